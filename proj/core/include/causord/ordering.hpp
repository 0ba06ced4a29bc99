#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causord/errors.hpp"
#include "causord/structure.hpp"

namespace causord {

/// A bijection equation -> variable with phi(f) in Vars(f) for every f.
class TotalCausalMapping {
public:
    TotalCausalMapping() = default;
    explicit TotalCausalMapping(std::vector<Index> variable_of_equation)
        : variable_of_(std::move(variable_of_equation)) {}

    std::size_t size() const noexcept { return variable_of_.size(); }
    Index variable_of(Index equation) const { return variable_of_[equation]; }
    const std::vector<Index>& variables() const noexcept { return variable_of_; }

    /// Bijectivity plus membership, against the structure it was built for.
    bool valid_for(const Structure& s) const;

    bool operator==(const TotalCausalMapping& other) const = default;

private:
    std::vector<Index> variable_of_;
};

/// Finds a total causal mapping through a complete matching on the
/// bipartite correspondent of `s`, in O(sqrt(|V|) * |S|). Throws
/// NotCompleteError when no such mapping exists.
TotalCausalMapping total_causal_mapping(const Structure& s);

/// All distinct total causal mappings (perfect matchings of the bipartite
/// correspondent), enumerated deterministically in lexicographic order and
/// truncated at `limit`.
std::vector<TotalCausalMapping> enumerate_total_causal_mappings(
    const Structure& s,
    std::size_t limit = 10000,
    const BruteForceGuard& guard = {},
    const Deadline& deadline = {});

/// Directed graph over the variables holding the direct causal
/// dependencies induced by a mapping: an edge (a, b) for every equation f
/// with phi(f) = b and a in Vars(f) \ {b}. Duplicates collapse and there
/// are no self-loops.
class DependencyGraph {
public:
    DependencyGraph() = default;
    DependencyGraph(std::vector<std::string> vertex_names,
                    std::vector<std::pair<Index, Index>> edges);

    std::size_t vertex_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    const std::vector<std::string>& vertex_names() const noexcept { return names_; }
    std::span<const Index> successors(Index v) const { return adjacency_[v]; }

    /// Edges sorted by (from, to) index.
    std::vector<std::pair<Index, Index>> edges() const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<Index>> adjacency_;
    std::size_t edge_count_ = 0;
};

DependencyGraph direct_dependencies(const Structure& s, const TotalCausalMapping& mapping);

/// The irreflexive transitive closure of a dependency graph together with
/// its strongly coupled clusters (classes of mutually dependent
/// variables).
///
/// The closure is held in a collapsed form: the cluster partition plus a
/// cluster-level reachability bit matrix. That keeps instances with large
/// strongly coupled clusters tractable (their explicit closure is
/// quadratic in the cluster size) while edges() and depends() still expose
/// the exact edge set.
class CausalOrdering {
public:
    CausalOrdering() = default;

    std::size_t vertex_count() const noexcept { return names_.size(); }
    const std::vector<std::string>& vertex_names() const noexcept { return names_; }

    /// Exact |C+|, without materializing it.
    std::uint64_t edge_count() const noexcept { return edge_count_; }

    /// True iff (from, to) is in the closure. Irreflexive by construction.
    bool depends(Index from, Index to) const;

    std::size_t cluster_count() const noexcept { return members_.size(); }

    /// Cluster id of a variable. Clusters are numbered by ascending
    /// smallest member index, so ids are stable across equivalent
    /// computations.
    Index cluster_of(Index v) const { return canonical_of_component_[component_of_[v]]; }

    /// Members of one cluster, sorted by variable index.
    std::span<const Index> cluster_members(Index cluster) const {
        return members_[component_of_canonical_[cluster]];
    }

    /// The full partition in canonical order.
    std::vector<std::vector<Index>> clusters() const;

    /// Materialized edge set sorted by (from, to) index. Refuses closures
    /// above `max_edges` since their explicit form may not fit in memory.
    std::vector<std::pair<Index, Index>> edges(std::uint64_t max_edges = 50'000'000) const;

    /// Builds the collapsed representation from a component partition and
    /// a component-level reachability matrix (bit (A,B) set iff B != A is
    /// reachable from A). Shared by both closure routes.
    static CausalOrdering from_components(std::vector<std::string> names,
                                          std::vector<Index> component_of,
                                          std::vector<std::vector<Index>> members,
                                          std::vector<std::uint64_t> reach,
                                          std::size_t words_per_row);

private:
    std::vector<std::string> names_;
    std::vector<Index> component_of_;                // vertex -> internal component
    std::vector<std::vector<Index>> members_;        // internal component -> sorted members
    std::vector<Index> canonical_of_component_;      // internal -> canonical cluster id
    std::vector<Index> component_of_canonical_;      // canonical -> internal
    std::vector<std::uint64_t> reach_;               // internal component bit matrix
    std::size_t words_per_row_ = 0;
    std::uint64_t edge_count_ = 0;

    bool component_reaches(Index from_component, Index to_component) const {
        return (reach_[from_component * words_per_row_ + to_component / 64] >>
                (to_component % 64)) & 1u;
    }
};

/// DFS-based closure: strongly connected components (iterative Tarjan)
/// condensed, then reachability propagated in reverse topological order.
/// O(|V| * |E|) worst case, far less in practice.
CausalOrdering transitive_closure(const DependencyGraph& g);

/// Independent O(|V|^3) Floyd-Warshall closure over a boolean matrix;
/// exists purely to cross-check transitive_closure. Refuses graphs with
/// more than 4096 vertices.
CausalOrdering transitive_closure_floyd(const DependencyGraph& g);

/// The full pipeline: total causal mapping, direct dependencies,
/// transitive closure. O(|V| * |S|) overall. Throws NotCompleteError when
/// `s` is not complete.
CausalOrdering causal_ordering(const Structure& s);

}  // namespace causord
