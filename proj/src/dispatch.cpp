#include "ample/dispatch.hpp"

#include <climits>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ample/coarse.hpp"
#include "ample/dr.hpp"
#include "ample/gpd.hpp"
#include "ample/grp.hpp"
#include "ample/hls.hpp"
#include "ample/json_io.hpp"
#include "ample/kzero.hpp"
#include "ample/pact.hpp"

namespace ample::dispatch {

using json_io::Json;
using json_io::SchemaError;

namespace {

struct OpResult {
  std::string verdict;
  Json payload;
};

// --- small argument/json helpers ----------------------------------------------

const Json& inputDoc(const Json& inputs, const std::string& role) {
  if (!inputs.is_object() || !inputs.contains(role))
    throw std::invalid_argument("missing input document '" + role + "'");
  return inputs.at(role);
}

int argInt(const Json& args, const std::string& key, int fallback) {
  if (!args.is_object() || !args.contains(key)) return fallback;
  const Json& v = args.at(key);
  if (!v.is_number_integer())
    throw std::invalid_argument("argument '" + key + "' must be an integer");
  return v.get<int>();
}

bool argBool(const Json& args, const std::string& key, bool fallback) {
  if (!args.is_object() || !args.contains(key)) return fallback;
  const Json& v = args.at(key);
  if (!v.is_boolean())
    throw std::invalid_argument("argument '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string argStr(const Json& args, const std::string& key,
                   const std::string& fallback) {
  if (!args.is_object() || !args.contains(key)) return fallback;
  const Json& v = args.at(key);
  if (!v.is_string())
    throw std::invalid_argument("argument '" + key + "' must be a string");
  return v.get<std::string>();
}

const Json* argPtr(const Json& args, const std::string& key) {
  if (!args.is_object() || !args.contains(key)) return nullptr;
  return &args.at(key);
}

int searchBudgetInt(const Budgets& b) {
  return b.search > INT_MAX ? INT_MAX : static_cast<int>(b.search);
}

// Default generating set: one word per letter of the group's alphabet.
std::vector<grp::Word> defaultGenerators(const grp::GroupPtr& g) {
  std::vector<grp::Word> S;
  const int n = g->wordGroup().numGenerators();
  for (int i = 0; i < n; ++i) S.push_back(grp::generatorWord(g, i));
  return S;
}

int sumSigns(const grp::Word& w) {
  int s = 0;
  for (const grp::Letter& l : w.letters) s += l.sign;
  return s;
}

Json wordsJson(const std::vector<grp::Word>& words, std::size_t cap) {
  Json out = Json::array();
  for (std::size_t i = 0; i < words.size() && i < cap; ++i)
    out.push_back(grp::wordToString(words[i]));
  return out;
}

Json intsJson(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

Json longsJson(const std::vector<long long>& v) {
  Json out = Json::array();
  for (long long x : v) out.push_back(x);
  return out;
}

// --- graph path specs -----------------------------------------------------------

int resolveByLabel(const std::vector<std::string>& labels, const std::string& name,
                   char fallbackPrefix, int count, const char* what) {
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    if (labels[i] == name) return i;
  if (labels.empty() && name.size() > 1 && name[0] == fallbackPrefix) {
    const std::string tail = name.substr(1);
    if (tail.find_first_not_of("0123456789") == std::string::npos) {
      const int i = std::stoi(tail);
      if (i >= 0 && i < count) return i;
    }
  }
  if (!name.empty() && name.find_first_not_of("0123456789") == std::string::npos) {
    const int i = std::stoi(name);
    if (i >= 0 && i < count) return i;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " '" + name + "'");
}

// "@v" names the vertex cylinder; "e1.e2" chains edge labels range-first.
dr::GPath parsePathSpec(const dr::DirectedGraph& g, const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty path spec");
  if (spec[0] == '@')
    return dr::vertexPath(resolveByLabel(g.vertexLabels, spec.substr(1), 'v',
                                         g.numVertices, "vertex"));
  dr::GPath path;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t dot = spec.find('.', start);
    const std::string piece =
        spec.substr(start, dot == std::string::npos ? dot : dot - start);
    path.edges.push_back(resolveByLabel(g.edgeLabels, piece, 'e',
                                        static_cast<int>(g.edges.size()), "edge"));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  path.vertex = g.edges[path.edges.front()].to;
  if (!dr::validPath(g, path))
    throw std::invalid_argument("edges of '" + spec + "' do not chain");
  return path;
}

dr::CompactOpen parseSetSpec(const dr::DirectedGraph& g, const Json& parts) {
  if (!parts.is_array() || parts.empty())
    throw std::invalid_argument("expected a nonempty array of path specs");
  dr::CompactOpen O;
  for (const Json& p : parts) {
    if (!p.is_string())
      throw std::invalid_argument("path specs must be strings");
    O.push_back(parsePathSpec(g, p.get<std::string>()));
  }
  return dr::normalizeCompactOpen(g, std::move(O));
}

Json compactOpenJson(const dr::DirectedGraph& g, const dr::CompactOpen& O) {
  Json out = Json::array();
  for (const dr::GPath& p : O) out.push_back(dr::pathName(g, p));
  return out;
}

Json bisectionJson(const dr::DirectedGraph& g,
                   const kzero::BisectionWitness& w) {
  Json parts = Json::array();
  for (const auto& [range, source] : w.bisections) {
    Json b;
    b["range"] = dr::pathName(g, range);
    b["source"] = dr::pathName(g, source);
    parts.push_back(std::move(b));
  }
  Json out;
  out["parts"] = std::move(parts);
  out["source_set"] = compactOpenJson(g, w.sU);
  out["range_set"] = compactOpenJson(g, w.rU);
  out["role"] = w.role;
  return out;
}

std::string describeK0(const kzero::K0Group& K) {
  std::vector<std::string> parts;
  for (long long t : K.torsion) parts.push_back("Z/" + std::to_string(t));
  for (int i = 0; i < K.freeRank; ++i) parts.push_back("Z");
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
  return out;
}

// --- validate -------------------------------------------------------------------

Json entriesJson(const pact::PartialActionSpec& spec) {
  Json out = Json::array();
  for (const pact::PactEntry& e : spec.entries) {
    Json j;
    j["gamma"] = grp::wordToString(e.gamma);
    j["dom"] = intsJson(e.dom);
    j["img"] = intsJson(e.img);
    out.push_back(std::move(j));
  }
  return out;
}

OpResult opValidate(const Json& inputs, const Json& args) {
  const std::string kind = argStr(args, "kind", "");
  const Json& doc = inputDoc(inputs, "doc");
  OpResult r;
  try {
    if (kind == "group") {
      grp::GroupPtr g = json_io::parseGroup(doc);
      r.payload["generators"] = g->wordGroup().numGenerators();
      r.verdict = "pass";
    } else if (kind == "chain") {
      grp::QuotientChain chain = json_io::parseChain(doc);
      if (auto err = grp::validateChain(chain)) {
        r.verdict = "fail";
        r.payload["witness"] = *err;
      } else {
        r.verdict = "pass";
        r.payload["levels"] = static_cast<int>(chain.levels.size());
        Json sizes = Json::array();
        for (const grp::ChainLevel& l : chain.levels)
          sizes.push_back(static_cast<int>(l.group->table.size()));
        r.payload["level_sizes"] = std::move(sizes);
      }
    } else if (kind == "paction") {
      pact::PartialActionSpec spec = json_io::parsePartialAction(doc);
      pact::PactValidation v = pact::validatePartialAction(spec);
      if (v.ok) {
        r.verdict = "pass";
        r.payload["points"] = spec.numPoints;
        r.payload["entries"] =
            static_cast<int>(v.normalized ? v.normalized->entries.size()
                                          : spec.entries.size());
      } else {
        r.verdict = "fail";
        r.payload["axiom"] = v.axiom;
        r.payload["witness"] = v.witness;
        if (v.completion)
          r.payload["completion_entries"] = entriesJson(*v.completion);
      }
    } else if (kind == "graph") {
      dr::DirectedGraph g = json_io::parseGraph(doc);
      if (auto err = dr::validateGraph(g)) {
        r.verdict = "fail";
        r.payload["witness"] = *err;
      } else {
        r.verdict = "pass";
        r.payload["vertices"] = g.numVertices;
        r.payload["edges"] = static_cast<int>(g.edges.size());
      }
    } else if (kind == "kgraph") {
      dr::KGraph g = json_io::parseKGraph(doc);
      if (auto err = dr::validateKGraph(g)) {
        r.verdict = "fail";
        r.payload["witness"] = *err;
      } else {
        r.verdict = "pass";
        r.payload["rank"] = g.rank;
        r.payload["vertices"] = g.numVertices;
        r.payload["edges"] = static_cast<int>(g.edges.size());
        r.payload["squares"] = static_cast<int>(g.squares.size());
      }
    } else if (kind == "coarse") {
      coarse::FiniteCoarseSpace s = json_io::parseCoarseSpace(doc);
      if (auto err = coarse::validateSpace(s)) {
        r.verdict = "fail";
        r.payload["witness"] = *err;
      } else {
        r.verdict = "pass";
        r.payload["points"] = s.numPoints;
        r.payload["generators"] = static_cast<int>(s.generators.size());
      }
    } else if (kind == "coarse_map") {
      auto [space, f] = json_io::parseCoarseMap(doc);
      auto err = coarse::validateSpace(space);
      if (!err) err = coarse::validatePointMap(space, f);
      if (err) {
        r.verdict = "fail";
        r.payload["witness"] = *err;
      } else {
        r.verdict = "pass";
        r.payload["points"] = space.numPoints;
      }
    } else if (kind == "window") {
      coarse::WindowCocycle c = json_io::parseWindowCocycle(doc);
      if (auto err = coarse::validateWindowCocycle(c)) {
        r.verdict = "fail";
        r.payload["witness"] = *err;
      } else {
        r.verdict = "pass";
        r.payload["points"] = c.numPoints;
      }
    } else {
      throw std::invalid_argument("unknown document kind '" + kind + "'");
    }
  } catch (const SchemaError& e) {
    // For validate, a malformed document is itself the negative finding.
    r.verdict = "fail";
    r.payload = Json::object();
    r.payload["path"] = e.path;
    r.payload["witness"] = e.what();
  }
  r.payload["object"] = kind;
  return r;
}

// --- grp --------------------------------------------------------------------------

OpResult opGrpBall(const Json& inputs, const Json& args, const Budgets& b) {
  grp::GroupPtr g = json_io::parseGroup(inputDoc(inputs, "group"));
  const int radius = argInt(args, "radius", b.radius);
  std::vector<grp::Word> S;
  if (const Json* gens = argPtr(args, "gens"); gens && !gens->empty()) {
    for (std::size_t i = 0; i < gens->size(); ++i)
      S.push_back(json_io::parseWord(g, (*gens)[i], "/gens/" + std::to_string(i)));
  } else {
    S = defaultGenerators(g);
  }
  OpResult r;
  Json curve = Json::array();
  std::vector<grp::Word> ball;
  for (int l = 0; l <= radius; ++l) {
    ball = grp::ballEnumerate(g, S, l);
    curve.push_back(static_cast<int>(ball.size()));
  }
  r.payload["radius"] = radius;
  r.payload["curve"] = std::move(curve);
  r.payload["final_size"] = static_cast<int>(ball.size());
  r.payload["sample"] = wordsJson(ball, 32);
  r.verdict = "evidence";
  return r;
}

// --- pact -------------------------------------------------------------------------

OpResult opPactBuild(const Json& inputs) {
  pact::PartialActionSpec spec =
      json_io::parsePartialAction(inputDoc(inputs, "paction"));
  pact::TransformationGroupoid T = pact::buildTransformationGroupoid(spec);
  pact::PurityReport purity = pact::checkPureCocycle(T.cocycle);
  OpResult r;
  r.payload["arrows"] = T.G.n;
  r.payload["units"] = static_cast<int>(T.G.units.size());
  r.payload["entries"] = static_cast<int>(T.spec.entries.size());
  r.payload["cocycle_pure"] = purity.status == pact::PurityStatus::Pure;
  r.verdict = "pass";
  return r;
}

bool sameSpecs(const pact::PartialActionSpec& a, const pact::PartialActionSpec& b) {
  if (a.numPoints != b.numPoints || a.entries.size() != b.entries.size())
    return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!grp::equalWords(a.entries[i].gamma, b.entries[i].gamma)) return false;
    if (a.entries[i].dom != b.entries[i].dom) return false;
    if (a.entries[i].img != b.entries[i].img) return false;
  }
  return true;
}

OpResult opPactRoundtrip(const Json& inputs) {
  pact::PartialActionSpec spec =
      json_io::parsePartialAction(inputDoc(inputs, "paction"));
  pact::TransformationGroupoid T = pact::buildTransformationGroupoid(spec);

  std::map<std::string, gpd::ArrowSubset> fibers;
  for (int a = 0; a < T.G.n; ++a)
    fibers[grp::canonicalKey(T.cocycle.values[a])].push_back(a);
  bool allBisections = true;
  std::string firstBad;
  for (const auto& [gamma, fiber] : fibers) {
    (void)gamma;
    if (!gpd::isBisection(T.G, fiber)) {
      allBisections = false;
      firstBad = grp::wordToString(T.cocycle.values[fiber.front()]);
      break;
    }
  }

  pact::CocycleAction back = pact::cocycleToPartialAction(T.cocycle);
  const bool equal = sameSpecs(T.spec, back.spec);
  OpResult r;
  r.payload["arrows"] = T.G.n;
  r.payload["fibers"] = static_cast<int>(fibers.size());
  r.payload["fibers_bisections"] = allBisections;
  if (!allBisections) r.payload["fiber_witness"] = firstBad;
  r.payload["roundtrip_equal"] = equal;
  r.verdict = allBisections && equal ? "pass" : "fail";
  return r;
}

OpResult opPactDelta(const Json& inputs) {
  pact::PartialActionSpec spec =
      json_io::parsePartialAction(inputDoc(inputs, "paction"));
  pact::CanonicalDeltaH ch = pact::canonicalDeltaH(spec);
  gpd::ArrowSubset all(ch.trans.G.n);
  for (int a = 0; a < ch.trans.G.n; ++a) all[a] = a;
  pact::DeltaAuditReport rep = pact::deltaAudit(
      ch.trans.G, ch.H, ch.trans.G.units, all, &ch.trans.cocycle);
  OpResult r;
  r.payload["subgroupoid"] = rep.subgroupoid;
  r.payload["diagonal"] = rep.diagonal;
  r.payload["closed_graphs"] = rep.closedGraphs;
  if (!rep.violation.empty()) r.payload["violation"] = rep.violation;
  r.payload["fib_k_by_c"] = rep.fibKByC;
  r.payload["fib_c_by_k"] = rep.fibCByK;
  r.payload["measured"] = rep.measured;
  r.payload["moved_elements"] = static_cast<int>(rep.movedElements);
  r.payload["bound"] = rep.bound;
  r.payload["bound_holds"] = rep.boundHolds;
  r.verdict = rep.subgroupoid && rep.diagonal && rep.boundHolds ? "pass" : "fail";
  return r;
}

// --- hls --------------------------------------------------------------------------

grp::GroupPtr loadChainGroup(const Json& inputs) {
  return grp::Group::makeQuotientChain(
      json_io::parseChain(inputDoc(inputs, "chain")));
}

OpResult opHlsBuild(const Json& inputs, const Json& args, const Budgets& b) {
  grp::GroupPtr chainGroup = loadChainGroup(inputs);
  const int n = argInt(args, "n", b.trunc);
  const bool top = argBool(args, "top", false);
  hls::HlsTruncation T = hls::buildHls(chainGroup, n, top);
  OpResult r;
  r.payload["arrows"] = T.G.n;
  r.payload["levels"] = T.numLevels();
  Json sizes = Json::array();
  for (int k = 0; k < T.numLevels(); ++k) {
    const int next = k + 1 < T.numLevels() ? T.levelOffset[k + 1] : T.G.n;
    sizes.push_back(next - T.levelOffset[k]);
  }
  r.payload["level_sizes"] = std::move(sizes);
  r.verdict = "evidence";
  return r;
}

OpResult opHlsAfs(const Json& inputs, const Json& args, const Budgets& b) {
  grp::GroupPtr chainGroup = loadChainGroup(inputs);
  const int n = argInt(args, "n", b.trunc);
  hls::AfsTruncation T = hls::buildAfs(chainGroup, n);
  OpResult r;
  r.payload["arrows"] = T.G.n;
  r.payload["points"] = T.numPoints;
  r.payload["depth"] = T.depth;
  r.verdict = "evidence";
  return r;
}

OpResult opHlsWitness(const Json& inputs, const Json& args, const Budgets& b) {
  grp::GroupPtr chainGroup = loadChainGroup(inputs);
  const int radius = argInt(args, "l", b.radius);
  const int level = argInt(args, "n", b.trunc);
  const std::vector<grp::Word> S = defaultGenerators(chainGroup);
  hls::DeltaViolationCertificate cert =
      hls::deltaViolationWitness(chainGroup, S, radius, level);
  const std::optional<std::string> bad =
      hls::verifyDeltaViolation(cert, chainGroup);
  OpResult r;
  r.payload["level"] = cert.level;
  r.payload["radius"] = cert.radius;
  r.payload["ball_size"] = static_cast<int>(cert.ball.size());
  r.payload["fiber_lower_bound"] = static_cast<int>(cert.fiberLowerBound);
  r.payload["pairs"] = static_cast<int>(cert.pairs.size());
  r.payload["verified"] = !bad;
  if (bad) r.payload["divergence"] = *bad;
  Json sample = Json::array();
  for (std::size_t i = 0; i < cert.pairs.size() && i < 8; ++i) {
    const hls::ForcedPair& p = cert.pairs[i];
    Json j;
    j["gamma"] = grp::wordToString(p.deep.gamma);
    j["finite"] = Json::array({p.finite.level, p.finite.g, p.finite.x});
    sample.push_back(std::move(j));
  }
  r.payload["sample_pairs"] = std::move(sample);
  r.verdict = bad ? "fail" : "evidence";
  return r;
}

OpResult opHlsEquicont(const Json& inputs, const Json& args, const Budgets& b) {
  grp::GroupPtr chainGroup = loadChainGroup(inputs);
  const int depth = argInt(args, "n", b.trunc);
  const int radius = argInt(args, "radius", b.radius);
  const int coverLevel = argInt(args, "cover_level", depth);
  const grp::QuotientChain& chain = *chainGroup->chain;
  if (coverLevel < 0 || coverLevel >= static_cast<int>(chain.levels.size()))
    throw std::invalid_argument("cover level outside the chain");
  std::vector<hls::ShadowRef> cover;
  const int order =
      static_cast<int>(chain.levels[coverLevel].group->table.size());
  for (int e = 0; e < order; ++e) cover.push_back({coverLevel, e});
  std::vector<int> basepoint;
  for (int k = 0; k <= depth && k < static_cast<int>(chain.levels.size()); ++k)
    basepoint.push_back(chain.levels[k].group->identity);
  hls::EquicontinuityCertificate cert = hls::equicontinuityCertificate(
      chainGroup, depth, defaultGenerators(chainGroup), radius, basepoint, cover);
  OpResult r;
  r.payload["ok"] = cert.ok;
  if (!cert.failure.empty()) r.payload["failure"] = cert.failure;
  r.payload["v_level"] = cert.V.level;
  r.payload["v_element"] = cert.V.element;
  r.payload["v_points"] = static_cast<int>(cert.vPoints.size());
  r.payload["ball_traced"] = static_cast<int>(cert.trace.size());
  r.verdict = cert.ok ? "pass" : "fail";
  return r;
}

OpResult opHlsIso(const Json& inputs, const Json& args, const Budgets& b) {
  grp::GroupPtr chainGroup = loadChainGroup(inputs);
  const int depth = argInt(args, "n", b.trunc);
  const int actionDepth = argInt(args, "action_depth", -1);
  hls::BundleActionIso iso =
      hls::hlsVsPartialActionIso(chainGroup, depth, actionDepth);
  OpResult r;
  r.payload["left_arrows"] = iso.leftArrows;
  r.payload["right_arrows"] = iso.rightArrows;
  if (!iso.reason.empty()) r.payload["reason"] = iso.reason;
  switch (iso.status) {
    case gpd::IsoStatus::Found:
      r.payload["status"] = "found";
      r.verdict = "pass";
      break;
    case gpd::IsoStatus::NonIsomorphic:
      r.payload["status"] = "non-isomorphic";
      r.verdict = "fail";
      break;
    case gpd::IsoStatus::Exhausted:
      r.payload["status"] = "exhausted";
      r.verdict = "inconclusive";
      break;
  }
  return r;
}

// --- dr ---------------------------------------------------------------------------

OpResult opDrCylinders(const Json& inputs, const Json& args) {
  dr::DirectedGraph g = json_io::parseGraph(inputDoc(inputs, "graph"));
  dr::requireValidGraph(g);
  const dr::GPath mu = parsePathSpec(g, argStr(args, "mu", ""));
  const dr::GPath nu = parsePathSpec(g, argStr(args, "nu", ""));
  OpResult r;
  r.payload["mu"] = dr::pathName(g, mu);
  r.payload["nu"] = dr::pathName(g, nu);
  const std::optional<dr::GPath> meet = dr::cylinderMeet(mu, nu);
  r.payload["meet"] = meet ? Json(dr::pathName(g, *meet)) : Json();
  r.payload["difference"] = compactOpenJson(g, dr::cylinderDiff(g, mu, nu));
  r.payload["union"] =
      compactOpenJson(g, dr::uniteCompactOpen(g, {mu}, {nu}));
  r.verdict = "evidence";
  return r;
}

OpResult opDrCocycle(const Json& inputs, const Json& args, const Budgets& b) {
  const Json& doc = inputDoc(inputs, "graph");
  const int depth = argInt(args, "depth", b.depth);
  OpResult r;
  if (json_io::documentType(doc) == "kgraph") {
    dr::KGraph g = json_io::parseKGraph(doc);
    std::optional<dr::KTruncation> T =
        dr::buildKTruncation(g, depth, searchBudgetInt(b));
    if (!T) {
      r.verdict = "inconclusive";
      r.payload["reason"] = "rewrite budget exhausted";
      return r;
    }
    gpd::WordCocycle c = dr::flamCocycleK(*T);
    const std::optional<std::string> err = gpd::validateCocycle(c);
    bool degreeOk = true;
    for (int a = 0; a < T->G.n && degreeOk; ++a)
      degreeOk = dr::degreeDiffK(*T, a) == dr::colorCount(g, c.values[a]);
    r.payload["rank"] = g.rank;
    r.payload["arrows"] = T->G.n;
    r.payload["paths"] = static_cast<int>(T->paths.size());
    r.payload["cocycle_valid"] = !err;
    if (err) r.payload["violation"] = *err;
    r.payload["degree_consistent"] = degreeOk;
    r.verdict = !err && degreeOk ? "pass" : "fail";
    return r;
  }
  dr::DirectedGraph g = json_io::parseGraph(doc);
  dr::DrTruncation T = dr::buildDrTruncation(g, depth);
  gpd::WordCocycle c = dr::flamCocycle(T);
  const std::optional<std::string> err = gpd::validateCocycle(c);
  bool degreeOk = true;
  for (int a = 0; a < T.G.n && degreeOk; ++a)
    degreeOk = dr::degreeDiff(T, a) == sumSigns(c.values[a]);
  r.payload["arrows"] = T.G.n;
  r.payload["paths"] = static_cast<int>(T.paths.size());
  r.payload["cocycle_valid"] = !err;
  if (err) r.payload["violation"] = *err;
  r.payload["degree_consistent"] = degreeOk;
  Json sample = Json::array();
  for (int a = 0; a < T.G.n && a < 8; ++a) {
    Json j;
    j["arrow"] = T.G.labels.empty() ? std::to_string(a) : T.G.labels[a];
    j["value"] = grp::wordToString(c.values[a]);
    sample.push_back(std::move(j));
  }
  r.payload["sample"] = std::move(sample);
  r.verdict = !err && degreeOk ? "pass" : "fail";
  return r;
}

OpResult opDrPurity(const Json& inputs, const Json& args, const Budgets& b) {
  const Json& doc = inputDoc(inputs, "graph");
  const int depth = argInt(args, "depth", b.depth);
  dr::PurityCertificate cert;
  if (json_io::documentType(doc) == "kgraph") {
    cert = dr::purityCheckKGraph(json_io::parseKGraph(doc), depth,
                                 searchBudgetInt(b));
  } else {
    cert = dr::purityCheckGraph(json_io::parseGraph(doc), depth);
  }
  OpResult r;
  r.payload["pure"] = cert.pure == dr::TriState::Yes      ? "yes"
                      : cert.pure == dr::TriState::No     ? "no"
                                                          : "unknown";
  r.payload["evidence"] = cert.evidence;
  r.payload["max_len"] = cert.maxLen;
  r.payload["checked_arrows"] = cert.checkedArrows;
  r.verdict = cert.pure == dr::TriState::Yes      ? "pass"
              : cert.pure == dr::TriState::No     ? "fail"
                                                  : "inconclusive";
  return r;
}

OpResult opDrDelta(const Json& inputs, const Json& args, const Budgets& b) {
  dr::DirectedGraph g = json_io::parseGraph(inputDoc(inputs, "graph"));
  const int depth = argInt(args, "depth", b.depth);
  dr::DrTruncation T = dr::buildDrTruncation(g, depth);
  dr::SameDegreeReport rep = dr::sameDegreeDeltaBarH(T);
  OpResult r;
  r.payload["subgroupoid"] = rep.subgroupoid;
  r.payload["diagonal"] = rep.diagonal;
  if (!rep.violation.empty()) r.payload["violation"] = rep.violation;
  r.payload["fib_full"] = rep.fibFull;
  r.payload["cap"] = rep.cap;
  Json classes = Json::array();
  for (const auto& [deg, count] : rep.classSizes)
    classes.push_back(Json::array({deg, count}));
  r.payload["class_sizes"] = std::move(classes);
  r.verdict = rep.subgroupoid && rep.diagonal ? "pass" : "fail";
  return r;
}

OpResult opDrProper(const Json& inputs, const Json& args, const Budgets& b) {
  dr::DirectedGraph g = json_io::parseGraph(inputDoc(inputs, "graph"));
  const int depth = argInt(args, "depth", b.depth);
  dr::LocalPropernessCertificate cert = dr::localPropernessCertificate(g, depth);
  OpResult r;
  r.payload["ok"] = cert.ok;
  r.payload["window"] = cert.window;
  r.payload["bisections_checked"] = cert.bisectionsChecked;
  if (!cert.failure.empty()) r.payload["failure"] = cert.failure;
  r.verdict = cert.ok ? "pass" : "fail";
  return r;
}

// --- coarse -----------------------------------------------------------------------

std::pair<coarse::FiniteCoarseSpace, coarse::PointMap> loadCoarseMap(
    const Json& inputs) {
  auto [space, f] = json_io::parseCoarseMap(inputDoc(inputs, "map"));
  coarse::requireValidSpace(space);
  if (auto err = coarse::validatePointMap(space, f))
    throw std::invalid_argument(*err);
  return {std::move(space), std::move(f)};
}

OpResult opCoarseCheck(const Json& inputs, const Json& args) {
  auto [space, f] = loadCoarseMap(inputs);
  const int budget = argInt(args, "budget", 64);
  coarse::LabelSetReport rep = coarse::coarseMapCheck(space, f, budget);
  OpResult r;
  r.payload["bounded"] = rep.bounded;
  r.payload["budget"] = rep.budget;
  Json counts = Json::array();
  std::size_t total = 0;
  for (const auto& labels : rep.labels) {
    counts.push_back(static_cast<int>(labels.size()));
    total += labels.size();
  }
  r.payload["label_counts"] = std::move(counts);
  if (total <= 64) {
    Json all = Json::array();
    for (const auto& labels : rep.labels) {
      Json one = Json::array();
      for (const std::string& l : labels) one.push_back(l);
      all.push_back(std::move(one));
    }
    r.payload["labels"] = std::move(all);
  }
  if (rep.blownGenerator >= 0)
    r.payload["blown_generator"] = rep.blownGenerator;
  r.verdict = rep.bounded ? "pass" : "fail";
  return r;
}

OpResult opCoarseRoundtrip(const Json& inputs, const Json& args) {
  auto [space, f] = loadCoarseMap(inputs);
  coarse::MapCocycle M = coarse::mapToCocycle(space, f);
  const int basepoint = argInt(args, "basepoint", 0);
  if (basepoint < 0 || basepoint >= space.numPoints)
    throw std::invalid_argument("basepoint outside the point set");
  coarse::RecoveredMap rec = coarse::cocycleToMap(M, basepoint);
  const grp::Word shift = grp::invWord(f.image[basepoint]);
  bool recovered = true;
  std::string witness;
  int coveredCount = 0;
  for (int x = 0; x < space.numPoints; ++x) {
    if (!rec.covered[x]) continue;
    ++coveredCount;
    if (!grp::equalWords(rec.f.image[x], grp::mulWords(f.image[x], shift))) {
      recovered = false;
      witness = "point " + std::to_string(x);
      break;
    }
  }
  OpResult r;
  r.payload["pure"] = M.pure;
  if (!M.witness.empty()) r.payload["purity_witness"] = M.witness;
  r.payload["total"] = rec.total;
  r.payload["covered"] = coveredCount;
  Json skipped = Json::array();
  for (const std::string& s : rec.skipped) skipped.push_back(s);
  r.payload["skipped"] = std::move(skipped);
  r.payload["recovered"] = recovered;
  if (!witness.empty()) r.payload["witness"] = witness;
  r.verdict = recovered ? "pass" : "fail";
  return r;
}

OpResult opCoarseRefute(const Json& inputs) {
  auto [space, f] = loadCoarseMap(inputs);
  (void)space;
  coarse::RefuterResult res = coarse::maximalRefuter(f);
  OpResult r;
  if (!res.error.empty()) {
    r.verdict = "fail";
    r.payload["witness"] = res.error;
    return r;
  }
  r.payload["exhausted"] = res.exhausted;
  r.payload["pairs"] = static_cast<int>(res.pairs.size());
  Json pairs = Json::array();
  for (std::size_t i = 0; i < res.pairs.size() && i < 64; ++i) {
    Json j;
    j["k"] = res.pairs[i].first;
    j["n_k"] = res.pairs[i].second;
    j["label"] = grp::wordToString(res.labels[i]);
    pairs.push_back(std::move(j));
  }
  r.payload["matching"] = std::move(pairs);
  r.verdict = "evidence";
  return r;
}

OpResult opCoarseProfile(const Json& inputs, const Json& args) {
  const Json& doc = inputDoc(inputs, "window");
  std::vector<coarse::WindowCocycle> windows;
  if (const Json* ws = argPtr(args, "windows"); ws && !ws->empty()) {
    if (!doc.contains("fixture"))
      throw std::invalid_argument(
          "--end requires a fixture-based window document");
    for (const Json& n : *ws) {
      Json copy = doc;
      copy["end"] = n;
      windows.push_back(json_io::parseWindowCocycle(copy));
    }
  } else {
    windows.push_back(json_io::parseWindowCocycle(doc));
  }
  std::vector<grp::Word> gammas;
  if (const Json* gs = argPtr(args, "gammas"); gs && !gs->empty()) {
    for (std::size_t i = 0; i < gs->size(); ++i)
      gammas.push_back(json_io::parseWord(windows[0].target, (*gs)[i],
                                          "/gammas/" + std::to_string(i)));
  } else {
    gammas = defaultGenerators(windows[0].target);
  }
  coarse::PropernessProfile prof = coarse::propernessProfile(windows, gammas);
  OpResult r;
  r.payload["window_sizes"] = intsJson(prof.windowSizes);
  Json rows = Json::array();
  for (const coarse::FiberGrowth& row : prof.rows) {
    Json j;
    j["gamma"] = row.gamma;
    j["counts"] = intsJson(row.counts);
    j["evidence"] = row.evidence;
    rows.push_back(std::move(j));
  }
  r.payload["rows"] = std::move(rows);
  r.verdict = "evidence";
  return r;
}

// --- kzero ------------------------------------------------------------------------

OpResult opKzeroOracle(const Json& inputs) {
  dr::DirectedGraph g = json_io::parseGraph(inputDoc(inputs, "graph"));
  kzero::K0Group K = kzero::snfOracle(g);
  OpResult r;
  r.payload["vertices"] = K.numVertices;
  r.payload["diag"] = longsJson(K.diag);
  r.payload["torsion"] = longsJson(K.torsion);
  r.payload["free_rank"] = K.freeRank;
  r.payload["group"] = describeK0(K);
  Json classes = Json::array();
  for (int v = 0; v < K.numVertices; ++v) {
    std::vector<long long> e(K.numVertices, 0);
    e[v] = 1;
    Json j;
    j["vertex"] = g.vertexLabels.empty() ? "v" + std::to_string(v)
                                         : g.vertexLabels[v];
    j["class"] = longsJson(kzero::classOf(K, e));
    classes.push_back(std::move(j));
  }
  r.payload["unit_classes"] = std::move(classes);
  r.verdict = "evidence";
  return r;
}

OpResult opKzeroWitness(const Json& inputs, const Json& args) {
  dr::DirectedGraph g = json_io::parseGraph(inputDoc(inputs, "graph"));
  dr::requireValidGraph(g);
  const Json* set = argPtr(args, "set");
  if (!set) throw std::invalid_argument("missing --part path specs");
  dr::CompactOpen O = parseSetSpec(g, *set);
  const std::string mode = argStr(args, "mode", "paradox");
  OpResult r;
  r.payload["input"] = compactOpenJson(g, O);
  if (mode == "paradox") {
    kzero::ParadoxicalPair pw = kzero::paradoxicalWitness(g, O);
    r.payload["u1"] = bisectionJson(g, pw.U1);
    r.payload["u2"] = bisectionJson(g, pw.U2);
    r.verdict = "pass";
  } else if (mode == "neg") {
    kzero::K0Group K = kzero::snfOracle(g);
    kzero::NegResult nw = kzero::negWitness(g, K, O);
    const std::vector<long long> before = kzero::classOfSet(K, g, O);
    const std::vector<long long> after = kzero::classOfSet(K, g, nw.result);
    r.payload["result"] = compactOpenJson(g, nw.result);
    r.payload["class_input"] = longsJson(before);
    r.payload["class_result"] = longsJson(after);
    r.payload["sum_zero"] =
        kzero::zeroClass(kzero::addClass(K, before, after));
    r.verdict = "pass";
  } else {
    throw std::invalid_argument("unknown witness mode '" + mode + "'");
  }
  return r;
}

OpResult opKzeroRealize(const Json& inputs, const Json& args) {
  dr::DirectedGraph g = json_io::parseGraph(inputDoc(inputs, "graph"));
  kzero::K0Group K = kzero::snfOracle(g);
  const Json* t = argPtr(args, "target");
  if (!t || !t->is_array())
    throw std::invalid_argument("missing --target coordinates");
  std::vector<long long> target;
  for (const Json& x : *t) {
    if (!x.is_number_integer())
      throw std::invalid_argument("target coordinates must be integers");
    target.push_back(x.get<long long>());
  }
  kzero::RealizeResult res = kzero::realizeClass(g, K, target);
  OpResult r;
  r.payload["group"] = describeK0(K);
  r.payload["target"] = longsJson(target);
  if (!res.ok) {
    r.verdict = "inconclusive";
    r.payload["reason"] = res.reason;
    return r;
  }
  Json steps = Json::array();
  for (const kzero::RealizeStep& s : res.steps) {
    Json j;
    j["op"] = s.op;
    j["class"] = longsJson(s.classNow);
    j["parts"] = static_cast<int>(s.state.size());
    steps.push_back(std::move(j));
  }
  r.payload["steps"] = std::move(steps);
  r.payload["witness"] = compactOpenJson(g, res.witness);
  r.payload["class_check"] = kzero::classOfSet(K, g, res.witness) == target;
  r.verdict = "pass";
  return r;
}

Json budgetsJson(const Budgets& b) {
  Json j;
  j["depth"] = b.depth;
  j["trunc"] = b.trunc;
  j["radius"] = b.radius;
  j["search"] = b.search;
  return j;
}

Budgets budgetsFromJson(const Json& j) {
  Budgets b;
  b.depth = argInt(j, "depth", b.depth);
  b.trunc = argInt(j, "trunc", b.trunc);
  b.radius = argInt(j, "radius", b.radius);
  if (j.is_object() && j.contains("search")) b.search = j["search"].get<long long>();
  return b;
}

}  // namespace

Budgets envBudgets() {
  Budgets b;
  auto read = [](const char* name, long long fallback) -> long long {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const long long parsed = std::strtoll(v, &end, 10);
    if (end == v || *end != '\0')
      throw SchemaError(name, "environment override is not an integer");
    return parsed;
  };
  b.depth = static_cast<int>(read("AMPLE_BUDGET_DEPTH", b.depth));
  b.trunc = static_cast<int>(read("AMPLE_BUDGET_TRUNC", b.trunc));
  b.radius = static_cast<int>(read("AMPLE_BUDGET_RADIUS", b.radius));
  b.search = read("AMPLE_BUDGET_SEARCH", b.search);
  return b;
}

report::Report runOp(const std::string& module, const std::string& op,
                     const Json& inputs, const Json& args,
                     const Budgets& budgets) {
  OpResult res;
  try {
    if (module == "validate") {
      res = opValidate(inputs, args);
    } else if (module == "grp" && op == "ball") {
      res = opGrpBall(inputs, args, budgets);
    } else if (module == "pact" && op == "build") {
      res = opPactBuild(inputs);
    } else if (module == "pact" && op == "roundtrip") {
      res = opPactRoundtrip(inputs);
    } else if (module == "pact" && op == "delta") {
      res = opPactDelta(inputs);
    } else if (module == "hls" && op == "build") {
      res = opHlsBuild(inputs, args, budgets);
    } else if (module == "hls" && op == "afs") {
      res = opHlsAfs(inputs, args, budgets);
    } else if (module == "hls" && op == "witness") {
      res = opHlsWitness(inputs, args, budgets);
    } else if (module == "hls" && op == "equicont") {
      res = opHlsEquicont(inputs, args, budgets);
    } else if (module == "hls" && op == "iso") {
      res = opHlsIso(inputs, args, budgets);
    } else if (module == "dr" && op == "cylinders") {
      res = opDrCylinders(inputs, args);
    } else if (module == "dr" && op == "cocycle") {
      res = opDrCocycle(inputs, args, budgets);
    } else if (module == "dr" && op == "purity") {
      res = opDrPurity(inputs, args, budgets);
    } else if (module == "dr" && op == "delta") {
      res = opDrDelta(inputs, args, budgets);
    } else if (module == "dr" && op == "proper") {
      res = opDrProper(inputs, args, budgets);
    } else if (module == "coarse" && op == "check") {
      res = opCoarseCheck(inputs, args);
    } else if (module == "coarse" && op == "roundtrip") {
      res = opCoarseRoundtrip(inputs, args);
    } else if (module == "coarse" && op == "refute") {
      res = opCoarseRefute(inputs);
    } else if (module == "coarse" && op == "profile") {
      res = opCoarseProfile(inputs, args);
    } else if (module == "kzero" && op == "oracle") {
      res = opKzeroOracle(inputs);
    } else if (module == "kzero" && op == "witness") {
      res = opKzeroWitness(inputs, args);
    } else if (module == "kzero" && op == "realize") {
      res = opKzeroRealize(inputs, args);
    } else if (module == "replay" && op == "report") {
      return runReplay(inputDoc(inputs, "report"));
    } else {
      throw std::invalid_argument("unknown operation '" + module + " " + op + "'");
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const std::runtime_error& e) {
    // Budget exhaustion and similar resource stops are inconclusive, not bugs.
    res.verdict = "inconclusive";
    res.payload = Json::object();
    res.payload["reason"] = e.what();
  }
  report::Report rep;
  rep.kind = module + "." + op;
  rep.verdict = res.verdict;
  rep.payload = std::move(res.payload);
  rep.version = report::toolVersion();
  rep.inputDigest = report::fnv1a64Hex(report::canonicalDump(inputs));
  rep.replay = Json::object();
  rep.replay["op"] = Json::array({module, op});
  rep.replay["inputs"] = inputs;
  rep.replay["args"] = args;
  rep.replay["budgets"] = budgetsJson(budgets);
  return rep;
}

report::Report runReplay(const Json& storedReport) {
  report::Report stored;
  try {
    stored = report::reportFromJson(storedReport);
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/", e.what());
  }
  if (!stored.replay.is_object())
    throw SchemaError("/replay", "report has no replay section");
  for (const char* key : {"op", "inputs", "args", "budgets"})
    if (!stored.replay.contains(key))
      throw SchemaError(std::string("/replay/") + key, "missing required key");
  const Json& op = stored.replay["op"];
  if (!op.is_array() || op.size() != 2 || !op[0].is_string() || !op[1].is_string())
    throw SchemaError("/replay/op", "expected [module, op]");

  report::Report fresh =
      runOp(op[0].get<std::string>(), op[1].get<std::string>(),
            stored.replay["inputs"], stored.replay["args"],
            budgetsFromJson(stored.replay["budgets"]));

  report::Report rep;
  rep.kind = "replay.report";
  rep.version = report::toolVersion();
  rep.inputDigest = report::fnv1a64Hex(report::canonicalDump(storedReport));
  rep.payload["original_kind"] = stored.kind;
  const bool versionMatch = stored.version == report::toolVersion();
  rep.payload["version_match"] = versionMatch;
  if (!versionMatch)
    rep.payload["version_note"] = "report version '" + stored.version +
                                  "' differs from '" + report::toolVersion() +
                                  "'; replayed anyway";
  const bool samePayload = report::canonicalDump(stored.payload) ==
                           report::canonicalDump(fresh.payload);
  const bool sameVerdict = stored.verdict == fresh.verdict;
  if (samePayload && sameVerdict) {
    rep.payload["replay"] = "verified";
    rep.verdict = "pass";
  } else {
    rep.payload["replay"] = "divergence";
    rep.verdict = "fail";
    if (!sameVerdict) {
      rep.payload["first_difference"] = "/verdict";
    } else {
      auto diff = report::firstDifference(stored.payload, fresh.payload);
      rep.payload["first_difference"] = "/payload" + diff.value_or("");
    }
    rep.payload["stored_verdict"] = stored.verdict;
    rep.payload["fresh_verdict"] = fresh.verdict;
  }
  rep.replay = Json::object();
  rep.replay["op"] = Json::array({"replay", "report"});
  Json inputs;
  inputs["report"] = storedReport;
  rep.replay["inputs"] = std::move(inputs);
  rep.replay["args"] = Json::object();
  rep.replay["budgets"] = budgetsJson(Budgets{});
  return rep;
}

namespace {

struct CliRun {
  std::string module, op;
  std::vector<std::pair<std::string, std::string>> files;  // role -> path
  Json args = Json::object();
};

}  // namespace

int runCli(int argc, const char* const* argv) {
  CLI::App app{"ample: a workbench for ample groupoids, partial actions, "
               "path groupoids, coarse spaces, and class-group witnesses"};
  app.require_subcommand(1);
  std::string format = "text";
  std::string outPath;
  app.add_option("--format", format, "report rendering: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", outPath, "also write the JSON report to this file");

  Budgets budgets;
  try {
    budgets = envBudgets();
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }

  CliRun run;

  // validate
  {
    auto* sub = app.add_subcommand("validate", "check one input document");
    auto kind = std::make_shared<std::string>();
    auto file = std::make_shared<std::string>();
    sub->add_option("kind", *kind, "document kind")
        ->required()
        ->check(CLI::IsMember({"group", "chain", "paction", "graph", "kgraph",
                               "coarse", "coarse_map", "window"}));
    sub->add_option("file", *file, "document path")->required();
    sub->callback([&run, kind, file] {
      run.module = "validate";
      run.op = *kind;
      run.files = {{"doc", *file}};
      run.args["kind"] = *kind;
    });
  }

  // grp ball
  {
    auto* mod = app.add_subcommand("grp", "group word operations");
    mod->require_subcommand(1);
    auto* sub = mod->add_subcommand("ball", "word ball size curve");
    auto file = std::make_shared<std::string>();
    auto radius = std::make_shared<int>(budgets.radius);
    auto gens = std::make_shared<std::vector<std::string>>();
    sub->add_option("group", *file, "group document")->required();
    sub->add_option("--radius", *radius, "maximal word length");
    sub->add_option("--gen", *gens, "generating words (default: all letters)");
    sub->callback([&run, file, radius, gens] {
      run.module = "grp";
      run.op = "ball";
      run.files = {{"group", *file}};
      run.args["radius"] = *radius;
      if (!gens->empty()) run.args["gens"] = *gens;
    });
  }

  // pact
  {
    auto* mod = app.add_subcommand("pact", "partial actions");
    mod->require_subcommand(1);
    for (const char* opName : {"build", "roundtrip", "delta"}) {
      auto* sub = mod->add_subcommand(
          opName, opName == std::string("build")
                      ? "build the transformation groupoid"
                      : opName == std::string("roundtrip")
                            ? "action -> cocycle -> action identity"
                            : "audit the canonical fiber subgroupoid");
      auto file = std::make_shared<std::string>();
      sub->add_option("paction", *file, "partial action document")->required();
      std::string opCopy = opName;
      sub->callback([&run, file, opCopy] {
        run.module = "pact";
        run.op = opCopy;
        run.files = {{"paction", *file}};
      });
    }
  }

  // hls
  {
    auto* mod = app.add_subcommand("hls", "quotient-chain bundle groupoids");
    mod->require_subcommand(1);
    struct HlsOpts {
      std::string chain;
      int n, l, radius, coverLevel = -1, actionDepth = -1;
      bool top = false;
    };
    auto addCommon = [&](CLI::App* sub, std::shared_ptr<HlsOpts> o) {
      sub->add_option("--chain", o->chain, "chain document")->required();
      sub->add_option("--n", o->n, "truncation level");
    };
    {
      auto o = std::make_shared<HlsOpts>();
      o->n = budgets.trunc;
      auto* sub = mod->add_subcommand("build", "level bundle truncation");
      addCommon(sub, o);
      sub->add_flag("--top", o->top, "append a top fiber");
      sub->callback([&run, o] {
        run.module = "hls";
        run.op = "build";
        run.files = {{"chain", o->chain}};
        run.args["n"] = o->n;
        run.args["top"] = o->top;
      });
    }
    {
      auto o = std::make_shared<HlsOpts>();
      o->n = budgets.trunc;
      auto* sub = mod->add_subcommand("afs", "action groupoid truncation");
      addCommon(sub, o);
      sub->callback([&run, o] {
        run.module = "hls";
        run.op = "afs";
        run.files = {{"chain", o->chain}};
        run.args["n"] = o->n;
      });
    }
    {
      auto o = std::make_shared<HlsOpts>();
      o->n = budgets.trunc;
      o->l = budgets.radius;
      auto* sub = mod->add_subcommand(
          "witness", "forced-pair fiber growth certificate");
      addCommon(sub, o);
      sub->add_option("--l", o->l, "ball radius");
      sub->callback([&run, o] {
        run.module = "hls";
        run.op = "witness";
        run.files = {{"chain", o->chain}};
        run.args["n"] = o->n;
        run.args["l"] = o->l;
      });
    }
    {
      auto o = std::make_shared<HlsOpts>();
      o->n = budgets.trunc;
      o->radius = budgets.radius;
      auto* sub = mod->add_subcommand("equicont", "single-V equicontinuity");
      addCommon(sub, o);
      sub->add_option("--radius", o->radius, "ball radius");
      sub->add_option("--cover-level", o->coverLevel,
                      "shadow cover level (default: truncation level)");
      sub->callback([&run, o] {
        run.module = "hls";
        run.op = "equicont";
        run.files = {{"chain", o->chain}};
        run.args["n"] = o->n;
        run.args["radius"] = o->radius;
        run.args["cover_level"] = o->coverLevel < 0 ? o->n : o->coverLevel;
      });
    }
    {
      auto o = std::make_shared<HlsOpts>();
      o->n = budgets.trunc;
      auto* sub = mod->add_subcommand(
          "iso", "bundle vs trivial-action transformation groupoid");
      addCommon(sub, o);
      sub->add_option("--action-depth", o->actionDepth,
                      "points 0..d plus top (default: truncation level)");
      sub->callback([&run, o] {
        run.module = "hls";
        run.op = "iso";
        run.files = {{"chain", o->chain}};
        run.args["n"] = o->n;
        run.args["action_depth"] = o->actionDepth;
      });
    }
  }

  // dr
  {
    auto* mod = app.add_subcommand("dr", "path groupoids of (colored) graphs");
    mod->require_subcommand(1);
    struct DrOpts {
      std::string file, mu, nu;
      int depth;
    };
    for (const char* opName : {"cylinders", "cocycle", "purity", "delta",
                               "proper"}) {
      auto o = std::make_shared<DrOpts>();
      o->depth = budgets.depth;
      auto* sub = mod->add_subcommand(
          opName,
          opName == std::string("cylinders") ? "cylinder set calculus"
          : opName == std::string("cocycle") ? "edge-word cocycle check"
          : opName == std::string("purity")  ? "purity certificate"
          : opName == std::string("delta")   ? "same-degree pair subgroupoid"
                                             : "local properness certificate");
      sub->add_option("graph", o->file, "graph or kgraph document")->required();
      if (opName == std::string("cylinders")) {
        sub->add_option("--mu", o->mu, "path spec (@v or e1.e2)")->required();
        sub->add_option("--nu", o->nu, "path spec")->required();
      } else {
        sub->add_option("--depth", o->depth, "truncation depth");
      }
      std::string opCopy = opName;
      sub->callback([&run, o, opCopy] {
        run.module = "dr";
        run.op = opCopy;
        run.files = {{"graph", o->file}};
        if (opCopy == "cylinders") {
          run.args["mu"] = o->mu;
          run.args["nu"] = o->nu;
        } else {
          run.args["depth"] = o->depth;
        }
      });
    }
  }

  // coarse
  {
    auto* mod = app.add_subcommand("coarse", "coarse spaces and point maps");
    mod->require_subcommand(1);
    {
      auto file = std::make_shared<std::string>();
      auto budget = std::make_shared<int>(64);
      auto* sub = mod->add_subcommand("check", "difference-label boundedness");
      sub->add_option("map", *file, "coarse_map document")->required();
      sub->add_option("--budget", *budget, "label budget per generator");
      sub->callback([&run, file, budget] {
        run.module = "coarse";
        run.op = "check";
        run.files = {{"map", *file}};
        run.args["budget"] = *budget;
      });
    }
    {
      auto file = std::make_shared<std::string>();
      auto basepoint = std::make_shared<int>(0);
      auto* sub =
          mod->add_subcommand("roundtrip", "map -> cocycle -> map recovery");
      sub->add_option("map", *file, "coarse_map document")->required();
      sub->add_option("--basepoint", *basepoint, "recovery basepoint");
      sub->callback([&run, file, basepoint] {
        run.module = "coarse";
        run.op = "roundtrip";
        run.files = {{"map", *file}};
        run.args["basepoint"] = *basepoint;
      });
    }
    {
      auto file = std::make_shared<std::string>();
      auto* sub = mod->add_subcommand("refute", "greedy escaping matching");
      sub->add_option("map", *file, "coarse_map document")->required();
      sub->callback([&run, file] {
        run.module = "coarse";
        run.op = "refute";
        run.files = {{"map", *file}};
      });
    }
    {
      auto file = std::make_shared<std::string>();
      auto windows = std::make_shared<std::vector<int>>();
      auto gammas = std::make_shared<std::vector<std::string>>();
      auto* sub = mod->add_subcommand("profile", "fiber growth across windows");
      sub->add_option("window", *file, "window document")->required();
      sub->add_option("--end", *windows, "window ends (fixture documents)")
          ->delimiter(',');
      sub->add_option("--gamma", *gammas, "target elements to track")
          ->delimiter(',');
      sub->callback([&run, file, windows, gammas] {
        run.module = "coarse";
        run.op = "profile";
        run.files = {{"window", *file}};
        if (!windows->empty()) run.args["windows"] = *windows;
        if (!gammas->empty()) run.args["gammas"] = *gammas;
      });
    }
  }

  // kzero
  {
    auto* mod = app.add_subcommand("kzero", "class-group witness calculus");
    mod->require_subcommand(1);
    {
      auto file = std::make_shared<std::string>();
      auto* sub = mod->add_subcommand("oracle", "Smith-form class group");
      sub->add_option("graph", *file, "graph document")->required();
      sub->callback([&run, file] {
        run.module = "kzero";
        run.op = "oracle";
        run.files = {{"graph", *file}};
      });
    }
    {
      auto file = std::make_shared<std::string>();
      auto parts = std::make_shared<std::vector<std::string>>();
      auto mode = std::make_shared<std::string>("paradox");
      auto* sub = mod->add_subcommand("witness", "paradoxical / negation witness");
      sub->add_option("graph", *file, "graph document")->required();
      sub->add_option("--part", *parts, "path specs of the compact open set")
          ->required();
      sub->add_option("--mode", *mode, "paradox or neg")
          ->check(CLI::IsMember({"paradox", "neg"}));
      sub->callback([&run, file, parts, mode] {
        run.module = "kzero";
        run.op = "witness";
        run.files = {{"graph", *file}};
        run.args["set"] = *parts;
        run.args["mode"] = *mode;
      });
    }
    {
      auto file = std::make_shared<std::string>();
      auto target = std::make_shared<std::vector<long long>>();
      auto* sub = mod->add_subcommand("realize", "realize a class by a set");
      sub->add_option("graph", *file, "graph document")->required();
      sub->add_option("--target", *target, "reduced class coordinates")
          ->required()
          ->delimiter(',');
      sub->callback([&run, file, target] {
        run.module = "kzero";
        run.op = "realize";
        run.files = {{"graph", *file}};
        run.args["target"] = *target;
      });
    }
  }

  // replay
  {
    auto file = std::make_shared<std::string>();
    auto* sub = app.add_subcommand("replay", "re-execute a stored report");
    sub->add_option("report", *file, "report path")->required();
    sub->callback([&run, file] {
      run.module = "replay";
      run.op = "report";
      run.files = {{"report", *file}};
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    report::Report rep;
    if (run.module == "replay") {
      rep = runReplay(json_io::loadJsonFile(run.files[0].second));
    } else {
      Json inputs = Json::object();
      for (const auto& [role, path] : run.files)
        inputs[role] = json_io::loadJsonFile(path);
      rep = runOp(run.module, run.op, inputs, run.args, budgets);
    }
    const Json j = report::reportToJson(rep);
    if (format == "json")
      std::cout << report::canonicalDump(j);
    else
      std::cout << report::renderText(j);
    if (!outPath.empty()) {
      std::ofstream out(outPath);
      if (!out) {
        std::cerr << "input error: cannot write '" << outPath << "'\n";
        return 3;
      }
      out << report::canonicalDump(j);
    }
    return report::exitCodeFor(rep.verdict);
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ample::dispatch
