#include "ample/report.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace ample::report {

int exitCodeFor(const std::string& verdict) {
  if (verdict == "pass" || verdict == "evidence") return 0;
  if (verdict == "fail") return 1;
  if (verdict == "inconclusive") return 2;
  throw std::invalid_argument("unknown verdict '" + verdict + "'");
}

std::string toolVersion() { return "ample 0.1.0"; }

std::string canonicalDump(const Json& j) { return j.dump(2) + "\n"; }

std::string fnv1a64Hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

Json reportToJson(const Report& r) {
  Json j;
  j["kind"] = r.kind;
  j["verdict"] = r.verdict;
  j["payload"] = r.payload;
  j["replay"] = r.replay;
  j["version"] = r.version;
  j["input_digest"] = r.inputDigest;
  return j;
}

Report reportFromJson(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("report must be an object");
  Report r;
  for (const char* key :
       {"kind", "verdict", "payload", "replay", "version", "input_digest"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("report lacks '") + key + "'");
  r.kind = j["kind"].get<std::string>();
  r.verdict = j["verdict"].get<std::string>();
  exitCodeFor(r.verdict);  // validates the verdict tag
  r.payload = j["payload"];
  r.replay = j["replay"];
  r.version = j["version"].get<std::string>();
  r.inputDigest = j["input_digest"].get<std::string>();
  return r;
}

namespace {

void renderInto(const Json& j, int depth, std::ostringstream& out) {
  const std::string pad(2 * depth, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      out << pad << it.key() << ":";
      if (it->is_object() || it->is_array()) {
        out << "\n";
        renderInto(*it, depth + 1, out);
      } else {
        out << " " << it->dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const Json& item : j) {
      if (item.is_object() || item.is_array()) {
        out << pad << "-\n";
        renderInto(item, depth + 1, out);
      } else {
        out << pad << "- " << item.dump() << "\n";
      }
    }
    if (j.empty()) out << pad << "(empty)\n";
  } else {
    out << pad << j.dump() << "\n";
  }
}

}  // namespace

std::string renderText(const Json& j) {
  std::ostringstream out;
  renderInto(j, 0, out);
  return out.str();
}

std::optional<std::string> firstDifference(const Json& a, const Json& b) {
  if (a == b) return std::nullopt;
  if (a.type() != b.type()) return "";
  if (a.is_object()) {
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      if (ia.key() != ib.key())
        return "/" + (ia.key() < ib.key() ? ia.key() : ib.key());
      if (auto sub = firstDifference(*ia, *ib)) return "/" + ia.key() + *sub;
    }
    return ia != a.end() ? "/" + ia.key() : "/" + ib.key();
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
      if (auto sub = firstDifference(a[i], b[i]))
        return "/" + std::to_string(i) + *sub;
    return "/" + std::to_string(a.size() < b.size() ? a.size() : b.size());
  }
  return "";
}

}  // namespace ample::report
