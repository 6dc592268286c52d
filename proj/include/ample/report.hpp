#pragma once
// Machine-readable run certificates: a verdict, a payload of witnesses, and a
// replay section sufficient to re-execute the run from the report alone.
// Serialization is byte-stable (sorted keys, fixed formatting) and the text
// rendering is derived from the JSON form, never computed separately.

#include <optional>
#include <string>

#include "json.hpp"

namespace ample::report {

using Json = nlohmann::json;

struct Report {
  std::string kind;     // "module.op"
  std::string verdict;  // pass | fail | inconclusive | evidence
  Json payload;         // witnesses / certificates / counts
  Json replay;          // op, inputs, args, budgets; null when not replayable
  std::string version;
  std::string inputDigest;  // content hash of the canonicalized inputs
};

// pass/evidence -> 0, fail -> 1, inconclusive -> 2.
int exitCodeFor(const std::string& verdict);

std::string toolVersion();

// Canonical serialization: sorted keys (the default object ordering), two
// space indent, one trailing newline. Reports never carry floating-point
// numbers, so formatting is exact.
std::string canonicalDump(const Json& j);

// FNV-1a 64-bit content hash, rendered as 16 hex digits.
std::string fnv1a64Hex(const std::string& bytes);

Json reportToJson(const Report& r);
// Inverse of reportToJson; throws std::invalid_argument on a malformed report.
Report reportFromJson(const Json& j);

// Indented key/value rendering of an arbitrary report JSON.
std::string renderText(const Json& j);

// Path of the first difference between two JSON values in canonical key
// order (depth-first), or nullopt when equal.
std::optional<std::string> firstDifference(const Json& a, const Json& b);

}  // namespace ample::report
