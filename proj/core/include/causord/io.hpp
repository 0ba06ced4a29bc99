#pragma once

#include <string>
#include <string_view>

#include "causord/ordering.hpp"
#include "causord/structure.hpp"

namespace causord {

/// Canonical structure text: one equation per line, variables ordered by
/// interned index. Parsing the result reproduces the structure exactly.
std::string to_text(const Structure& s);

/// {"equations": [{"id": ..., "vars": [...]}, ...]}; round-trips
/// losslessly with the text format.
std::string to_json(const Structure& s);
Structure structure_from_json(std::string_view json_text, ParseOptions options = {});

/// {"mapping": {...}} with keys in lexicographic order.
std::string mapping_to_json(const Structure& s, const TotalCausalMapping& mapping);

/// Full ordering export: {"mapping": ..., "direct": [[a,b],...],
/// "closure": [[a,b],...], "clusters": [[...],...]}. All lists are sorted
/// lexicographically by variable name.
std::string ordering_to_json(const Structure& s,
                             const TotalCausalMapping& mapping,
                             const DependencyGraph& direct,
                             const CausalOrdering& ordering);

std::string clusters_to_json(const CausalOrdering& ordering);

/// Cluster partition as variable names: each cluster sorted, the list
/// ordered by first member. The canonical form used by every export.
std::vector<std::vector<std::string>> cluster_names(const CausalOrdering& ordering);

/// DOT digraph of the direct dependencies, one node per variable.
std::string dependency_graph_to_dot(const DependencyGraph& g);

/// DOT digraph of the closure; strongly coupled clusters become labeled
/// subgraph groups.
std::string ordering_to_dot(const CausalOrdering& ordering);

}  // namespace causord
