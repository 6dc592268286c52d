#pragma once
// Versioned JSON input documents for the command-line tool: every document
// carries schema_version and a type tag, unknown keys are rejected, and all
// diagnostics point into the document by path.

#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

#include "ample/coarse.hpp"
#include "ample/dr.hpp"
#include "ample/grp.hpp"
#include "ample/pact.hpp"

namespace ample::json_io {

using Json = nlohmann::json;

// Input-document violation; `path` points into the document ("/entries/3/dom").
struct SchemaError : std::runtime_error {
  std::string path;
  SchemaError(std::string atPath, const std::string& message)
      : std::runtime_error(atPath + ": " + message), path(std::move(atPath)) {}
};

// Parses a file into JSON; file and syntax problems become SchemaErrors.
Json loadJsonFile(const std::string& filePath);

// Checks schema_version == 1 and type == expected on a top-level document.
void requireDocument(const Json& doc, const std::string& expectedType);
// The document's type tag (checking schema_version only).
std::string documentType(const Json& doc);

// --- typed parsers ------------------------------------------------------------
// Each takes a whole document of its type. Fixture shortcuts are accepted
// where noted so example files stay small.

// {type:"group", kind:"free"|"free_abelian", rank, labels?}
// {type:"group", kind:"finite", table, labels?}
// {type:"group", kind:"cyclic", order} | {kind:"elementary_abelian_2", exponent}
grp::GroupPtr parseGroup(const Json& doc);

// {type:"chain", fixture:"z_mod_2k"|"f2_abelianized"|"direct_sum_2", depth}
// {type:"chain", base:<group body>, levels:[{group:<group body>, gen_images,
//  factor_map?}], assumes_trivial_intersection?}
grp::QuotientChain parseChain(const Json& doc);

// {type:"paction", group:<group body>, num_points, point_labels?,
//  entries:[{gamma:"a b^-1", dom, img}]}
pact::PartialActionSpec parsePartialAction(const Json& doc);

// {type:"graph", fixture:"loop_graph", loops} | {fixture:"binary_graph"}
// {type:"graph", num_vertices, edges:[{from,to}], vertex_labels?, edge_labels?}
dr::DirectedGraph parseGraph(const Json& doc);

// {type:"kgraph", fixture:"one_square"}
// {type:"kgraph", rank, num_vertices, edges:[{from,to,color}],
//  squares:[[a,b,c,d]], vertex_labels?, edge_labels?}
dr::KGraph parseKGraph(const Json& doc);

// {type:"coarse", fixture:"chain_space", points}
// {type:"coarse", num_points, point_labels?, generators:[[[x,y],...]]}
coarse::FiniteCoarseSpace parseCoarseSpace(const Json& doc);

// {type:"coarse_map", space:<coarse body>, target:<group body>, images:[word]}
std::pair<coarse::FiniteCoarseSpace, coarse::PointMap> parseCoarseMap(
    const Json& doc);

// {type:"window", fixture:"z_window"|"f_window", end}
// {type:"window", target:<group body>, values:[[word]]}
coarse::WindowCocycle parseWindowCocycle(const Json& doc);

// A word in `g` from its display form; parse errors become SchemaErrors at
// `path`.
grp::Word parseWord(const grp::GroupPtr& g, const Json& value,
                    const std::string& path);

}  // namespace ample::json_io
