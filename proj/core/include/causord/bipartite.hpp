#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "causord/errors.hpp"
#include "causord/structure.hpp"

namespace causord {

/// Bipartite graph over dense vertex indices: left in [0, left_count),
/// right in [0, right_count). Per-left adjacency is kept sorted and free of
/// duplicates. Immutable in practice: built once, then queried.
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(std::size_t left_count, std::size_t right_count);

    void add_edge(Index left, Index right);

    std::size_t left_count() const noexcept { return adjacency_.size(); }
    std::size_t right_count() const noexcept { return right_count_; }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::span<const Index> neighbors(Index left) const { return adjacency_[left]; }
    bool has_edge(Index left, Index right) const;

    bool operator==(const BipartiteGraph& other) const = default;

private:
    std::vector<std::vector<Index>> adjacency_;
    std::size_t right_count_ = 0;
    std::size_t edge_count_ = 0;

    friend BipartiteGraph complement(const BipartiteGraph&);
};

/// The bipartite correspondent of a structure: equations on the left,
/// variables on the right, one edge per variable appearance (so the edge
/// count equals the structure density). Indices coincide with the
/// structure's interned indices.
BipartiteGraph to_bipartite(const Structure& s);

/// Same vertex sets, exactly the cross edges absent from `g`.
BipartiteGraph complement(const BipartiteGraph& g);

struct Matching {
    static constexpr Index npos = static_cast<Index>(-1);

    std::vector<Index> right_of_left;  // npos where unmatched
    std::vector<Index> left_of_right;
    std::size_t size = 0;

    bool saturates_left() const noexcept { return size == right_of_left.size(); }
};

/// Maximum-cardinality matching via Hopcroft-Karp,
/// O(sqrt(|V1|+|V2|) * |E|). Ties are resolved by vertex index in the
/// BFS/DFS phases, so the result is reproducible.
Matching maximum_matching(const BipartiteGraph& g);

struct BicliqueWitness {
    std::vector<Index> left;   // size a, sorted
    std::vector<Index> right;  // size b, sorted
};

/// Exhaustive search for a complete bipartite subgraph with part sizes
/// (a, b): enumerates left subsets of size a in lexicographic order and
/// intersects their neighborhoods. Exponential on purpose; refuses
/// instances above the guard bound.
std::optional<BicliqueWitness> find_biclique(const BipartiteGraph& g,
                                             std::size_t a,
                                             std::size_t b,
                                             const BruteForceGuard& guard = {},
                                             const Deadline& deadline = {});

}  // namespace causord
