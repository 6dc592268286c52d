#include "ample/json_io.hpp"

#include <fstream>
#include <set>
#include <vector>

#include "ample/fixtures.hpp"

namespace ample::json_io {

namespace {

// Tracks which keys a parser consumed so leftovers can be rejected by name.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : obj_(j), path_(std::move(path)) {
    if (!j.is_object()) throw SchemaError(path_, "expected an object");
  }

  const Json& require(const std::string& key) {
    const Json* v = optional(key);
    if (!v) throw SchemaError(path_ + "/" + key, "missing required key");
    return *v;
  }

  const Json* optional(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        throw SchemaError(path_ + "/" + it.key(), "unknown key");
  }

  const std::string& path() const { return path_; }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

int asInt(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

bool asBool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

std::string asString(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<int> asIntList(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(asInt(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<std::string> asStringList(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(asString(j[i], path + "/" + std::to_string(i)));
  return out;
}

grp::GroupPtr parseGroupBody(const Json& j, const std::string& path);

// Shared body parser: the same shape with or without the top-level envelope.
grp::GroupPtr parseGroupBody(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = asString(r.require("kind"), path + "/kind");
  std::vector<std::string> labels;
  if (const Json* l = r.optional("labels"))
    labels = asStringList(*l, path + "/labels");
  grp::GroupPtr g;
  try {
    if (kind == "free" || kind == "free_abelian") {
      const int rank = asInt(r.require("rank"), path + "/rank");
      g = kind == "free" ? grp::Group::makeFree(rank, labels)
                         : grp::Group::makeFreeAbelian(rank, labels);
    } else if (kind == "finite") {
      const Json& t = r.require("table");
      if (!t.is_array()) throw SchemaError(path + "/table", "expected an array");
      std::vector<std::vector<int>> table;
      for (std::size_t i = 0; i < t.size(); ++i)
        table.push_back(asIntList(t[i], path + "/table/" + std::to_string(i)));
      g = grp::Group::makeFinite(std::move(table), labels);
    } else if (kind == "cyclic") {
      g = fixtures::cyclicGroup(asInt(r.require("order"), path + "/order"));
    } else if (kind == "elementary_abelian_2") {
      g = fixtures::elementaryAbelian2(
          asInt(r.require("exponent"), path + "/exponent"));
    } else {
      throw SchemaError(path + "/kind", "unknown group kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
  r.finish();
  return g;
}

grp::QuotientChain parseChainBody(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  if (const Json* f = r.optional("fixture")) {
    const std::string name = asString(*f, path + "/fixture");
    const int depth = asInt(r.require("depth"), path + "/depth");
    r.finish();
    try {
      if (name == "z_mod_2k") return fixtures::integersMod2kChain(depth);
      if (name == "f2_abelianized") return fixtures::freeTwoAbelianizedChain(depth);
      if (name == "direct_sum_2") return fixtures::directSum2Chain(depth);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path + "/depth", e.what());
    }
    throw SchemaError(path + "/fixture", "unknown chain fixture '" + name + "'");
  }
  grp::QuotientChain chain;
  chain.base = parseGroupBody(r.require("base"), path + "/base");
  const Json& levels = r.require("levels");
  if (!levels.is_array()) throw SchemaError(path + "/levels", "expected an array");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string lp = path + "/levels/" + std::to_string(i);
    ObjectReader lr(levels[i], lp);
    grp::ChainLevel level;
    level.group = parseGroupBody(lr.require("group"), lp + "/group");
    level.genImages = asIntList(lr.require("gen_images"), lp + "/gen_images");
    if (const Json* fm = lr.optional("factor_map"))
      level.factorMap = asIntList(*fm, lp + "/factor_map");
    lr.finish();
    chain.levels.push_back(std::move(level));
  }
  if (const Json* a = r.optional("assumes_trivial_intersection"))
    chain.assumesTrivialIntersection =
        asBool(*a, path + "/assumes_trivial_intersection");
  r.finish();
  return chain;
}

dr::DirectedGraph parseGraphBody(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  if (const Json* f = r.optional("fixture")) {
    const std::string name = asString(*f, path + "/fixture");
    if (name == "binary_graph") {
      r.finish();
      return fixtures::binaryGraph();
    }
    if (name == "loop_graph") {
      const int loops = asInt(r.require("loops"), path + "/loops");
      r.finish();
      try {
        return fixtures::loopGraph(loops);
      } catch (const std::invalid_argument& e) {
        throw SchemaError(path + "/loops", e.what());
      }
    }
    throw SchemaError(path + "/fixture", "unknown graph fixture '" + name + "'");
  }
  dr::DirectedGraph g;
  g.numVertices = asInt(r.require("num_vertices"), path + "/num_vertices");
  const Json& edges = r.require("edges");
  if (!edges.is_array()) throw SchemaError(path + "/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ep = path + "/edges/" + std::to_string(i);
    ObjectReader er(edges[i], ep);
    dr::Edge e;
    e.from = asInt(er.require("from"), ep + "/from");
    e.to = asInt(er.require("to"), ep + "/to");
    er.finish();
    g.edges.push_back(e);
  }
  if (const Json* vl = r.optional("vertex_labels"))
    g.vertexLabels = asStringList(*vl, path + "/vertex_labels");
  if (const Json* el = r.optional("edge_labels"))
    g.edgeLabels = asStringList(*el, path + "/edge_labels");
  r.finish();
  return g;
}

coarse::PairSet parsePairSet(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of pairs");
  coarse::PairSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string pp = path + "/" + std::to_string(i);
    const std::vector<int> pair = asIntList(j[i], pp);
    if (pair.size() != 2) throw SchemaError(pp, "expected a pair [x, y]");
    out.push_back({pair[0], pair[1]});
  }
  return out;
}

coarse::FiniteCoarseSpace parseCoarseBody(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  if (const Json* f = r.optional("fixture")) {
    const std::string name = asString(*f, path + "/fixture");
    if (name != "chain_space")
      throw SchemaError(path + "/fixture", "unknown coarse fixture '" + name + "'");
    const int points = asInt(r.require("points"), path + "/points");
    r.finish();
    try {
      return fixtures::chainSpace(points);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path + "/points", e.what());
    }
  }
  coarse::FiniteCoarseSpace space;
  space.numPoints = asInt(r.require("num_points"), path + "/num_points");
  if (const Json* pl = r.optional("point_labels"))
    space.pointLabels = asStringList(*pl, path + "/point_labels");
  const Json& gens = r.require("generators");
  if (!gens.is_array()) throw SchemaError(path + "/generators", "expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i)
    space.generators.push_back(
        parsePairSet(gens[i], path + "/generators/" + std::to_string(i)));
  r.finish();
  return space;
}

}  // namespace

Json loadJsonFile(const std::string& filePath) {
  std::ifstream in(filePath);
  if (!in) throw SchemaError(filePath, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(filePath, e.what());
  }
}

void requireDocument(const Json& doc, const std::string& expectedType) {
  const std::string type = documentType(doc);
  if (type != expectedType)
    throw SchemaError("/type",
                      "expected '" + expectedType + "', found '" + type + "'");
}

std::string documentType(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected a document object");
  auto v = doc.find("schema_version");
  if (v == doc.end()) throw SchemaError("/schema_version", "missing required key");
  if (!v->is_number_integer() || v->get<int>() != 1)
    throw SchemaError("/schema_version", "unsupported schema version");
  auto t = doc.find("type");
  if (t == doc.end()) throw SchemaError("/type", "missing required key");
  return asString(*t, "/type");
}

grp::Word parseWord(const grp::GroupPtr& g, const Json& value,
                    const std::string& path) {
  const std::string text = asString(value, path);
  try {
    return grp::wordFromString(g, text);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

grp::GroupPtr parseGroup(const Json& doc) {
  requireDocument(doc, "group");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  return parseGroupBody(body, "");
}

grp::QuotientChain parseChain(const Json& doc) {
  requireDocument(doc, "chain");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  return parseChainBody(body, "");
}

pact::PartialActionSpec parsePartialAction(const Json& doc) {
  requireDocument(doc, "paction");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  ObjectReader r(body, "");
  pact::PartialActionSpec spec;
  spec.group = parseGroupBody(r.require("group"), "/group");
  spec.numPoints = asInt(r.require("num_points"), "/num_points");
  if (const Json* pl = r.optional("point_labels"))
    spec.pointLabels = asStringList(*pl, "/point_labels");
  const Json& entries = r.require("entries");
  if (!entries.is_array()) throw SchemaError("/entries", "expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string ep = "/entries/" + std::to_string(i);
    ObjectReader er(entries[i], ep);
    pact::PactEntry entry;
    entry.gamma = parseWord(spec.group, er.require("gamma"), ep + "/gamma");
    entry.dom = asIntList(er.require("dom"), ep + "/dom");
    entry.img = asIntList(er.require("img"), ep + "/img");
    er.finish();
    spec.entries.push_back(std::move(entry));
  }
  r.finish();
  return spec;
}

dr::DirectedGraph parseGraph(const Json& doc) {
  requireDocument(doc, "graph");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  return parseGraphBody(body, "");
}

dr::KGraph parseKGraph(const Json& doc) {
  requireDocument(doc, "kgraph");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  ObjectReader r(body, "");
  if (const Json* f = r.optional("fixture")) {
    const std::string name = asString(*f, "/fixture");
    if (name != "one_square")
      throw SchemaError("/fixture", "unknown kgraph fixture '" + name + "'");
    r.finish();
    return fixtures::oneSquareKGraph();
  }
  dr::KGraph g;
  g.rank = asInt(r.require("rank"), "/rank");
  g.numVertices = asInt(r.require("num_vertices"), "/num_vertices");
  const Json& edges = r.require("edges");
  if (!edges.is_array()) throw SchemaError("/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ep = "/edges/" + std::to_string(i);
    ObjectReader er(edges[i], ep);
    dr::KEdge e;
    e.from = asInt(er.require("from"), ep + "/from");
    e.to = asInt(er.require("to"), ep + "/to");
    e.color = asInt(er.require("color"), ep + "/color");
    er.finish();
    g.edges.push_back(e);
  }
  const Json& squares = r.require("squares");
  if (!squares.is_array()) throw SchemaError("/squares", "expected an array");
  for (std::size_t i = 0; i < squares.size(); ++i) {
    const std::string sp = "/squares/" + std::to_string(i);
    const std::vector<int> q = asIntList(squares[i], sp);
    if (q.size() != 4) throw SchemaError(sp, "expected a quadruple [a, b, c, d]");
    g.squares.push_back({q[0], q[1], q[2], q[3]});
  }
  if (const Json* vl = r.optional("vertex_labels"))
    g.vertexLabels = asStringList(*vl, "/vertex_labels");
  if (const Json* el = r.optional("edge_labels"))
    g.edgeLabels = asStringList(*el, "/edge_labels");
  r.finish();
  return g;
}

coarse::FiniteCoarseSpace parseCoarseSpace(const Json& doc) {
  requireDocument(doc, "coarse");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  return parseCoarseBody(body, "");
}

std::pair<coarse::FiniteCoarseSpace, coarse::PointMap> parseCoarseMap(
    const Json& doc) {
  requireDocument(doc, "coarse_map");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  ObjectReader r(body, "");
  coarse::FiniteCoarseSpace space = parseCoarseBody(r.require("space"), "/space");
  coarse::PointMap f;
  f.target = parseGroupBody(r.require("target"), "/target");
  const Json& images = r.require("images");
  if (!images.is_array()) throw SchemaError("/images", "expected an array");
  for (std::size_t i = 0; i < images.size(); ++i)
    f.image.push_back(
        parseWord(f.target, images[i], "/images/" + std::to_string(i)));
  r.finish();
  return {std::move(space), std::move(f)};
}

coarse::WindowCocycle parseWindowCocycle(const Json& doc) {
  requireDocument(doc, "window");
  Json body = doc;
  body.erase("schema_version");
  body.erase("type");
  ObjectReader r(body, "");
  if (const Json* f = r.optional("fixture")) {
    const std::string name = asString(*f, "/fixture");
    const int end = asInt(r.require("end"), "/end");
    r.finish();
    try {
      if (name == "z_window") return fixtures::zWindowCocycle(end);
      if (name == "f_window") return fixtures::fWindowCocycle(end);
    } catch (const std::invalid_argument& e) {
      throw SchemaError("/end", e.what());
    }
    throw SchemaError("/fixture", "unknown window fixture '" + name + "'");
  }
  coarse::WindowCocycle c;
  c.target = parseGroupBody(r.require("target"), "/target");
  const Json& values = r.require("values");
  if (!values.is_array()) throw SchemaError("/values", "expected an array");
  c.numPoints = static_cast<int>(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    const std::string rp = "/values/" + std::to_string(x);
    if (!values[x].is_array()) throw SchemaError(rp, "expected an array");
    std::vector<grp::Word> row;
    for (std::size_t y = 0; y < values[x].size(); ++y)
      row.push_back(
          parseWord(c.target, values[x][y], rp + "/" + std::to_string(y)));
    c.value.push_back(std::move(row));
  }
  r.finish();
  return c;
}

}  // namespace ample::json_io
