#include "causord/bipartite.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace causord {

BipartiteGraph::BipartiteGraph(std::size_t left_count, std::size_t right_count)
    : adjacency_(left_count), right_count_(right_count) {}

void BipartiteGraph::add_edge(Index left, Index right) {
    if (left >= adjacency_.size() || right >= right_count_) {
        throw Error("bipartite edge references an unknown vertex");
    }
    auto& row = adjacency_[left];
    auto it = std::lower_bound(row.begin(), row.end(), right);
    if (it != row.end() && *it == right) {
        throw Error("duplicate bipartite edge");
    }
    row.insert(it, right);
    ++edge_count_;
}

bool BipartiteGraph::has_edge(Index left, Index right) const {
    const auto& row = adjacency_[left];
    return std::binary_search(row.begin(), row.end(), right);
}

BipartiteGraph to_bipartite(const Structure& s) {
    BipartiteGraph g(s.equation_count(), s.variable_count());
    for (Index e = 0; e < s.equation_count(); ++e) {
        for (Index v : s.variables_of(e)) {
            g.add_edge(e, v);
        }
    }
    return g;
}

BipartiteGraph complement(const BipartiteGraph& g) {
    BipartiteGraph out(g.left_count(), g.right_count());
    for (Index l = 0; l < g.left_count(); ++l) {
        auto present = g.neighbors(l);
        auto& row = out.adjacency_[l];
        row.reserve(g.right_count() - present.size());
        std::size_t k = 0;
        for (Index r = 0; r < g.right_count(); ++r) {
            if (k < present.size() && present[k] == r) {
                ++k;
            } else {
                row.push_back(r);
            }
        }
        out.edge_count_ += row.size();
    }
    return out;
}

Matching maximum_matching(const BipartiteGraph& g) {
    const std::size_t n_left = g.left_count();
    const std::size_t n_right = g.right_count();
    constexpr Index npos = Matching::npos;
    constexpr Index inf = std::numeric_limits<Index>::max();

    std::vector<Index> match_left(n_left, npos);
    std::vector<Index> match_right(n_right, npos);
    std::size_t matched = 0;

    // Greedy seed: first free neighbor in index order.
    for (Index l = 0; l < n_left; ++l) {
        for (Index r : g.neighbors(l)) {
            if (match_right[r] == npos) {
                match_left[l] = r;
                match_right[r] = l;
                ++matched;
                break;
            }
        }
    }

    std::vector<Index> level(n_left);
    std::vector<Index> queue;
    queue.reserve(n_left);

    auto bfs = [&]() -> bool {
        queue.clear();
        for (Index l = 0; l < n_left; ++l) {
            if (match_left[l] == npos) {
                level[l] = 0;
                queue.push_back(l);
            } else {
                level[l] = inf;
            }
        }
        // Layers past the first one that reaches a free right vertex
        // cannot lie on a shortest augmenting path.
        Index frontier_limit = inf;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Index l = queue[head];
            if (level[l] >= frontier_limit) {
                continue;
            }
            for (Index r : g.neighbors(l)) {
                Index back = match_right[r];
                if (back == npos) {
                    frontier_limit = level[l];
                } else if (level[back] == inf) {
                    level[back] = level[l] + 1;
                    queue.push_back(back);
                }
            }
        }
        return frontier_limit != inf;
    };

    // Depth is bounded by the phase number, O(sqrt(V)) overall.
    auto augment = [&](auto&& self, Index l) -> bool {
        for (Index r : g.neighbors(l)) {
            Index back = match_right[r];
            if (back == npos || (level[back] == level[l] + 1 && self(self, back))) {
                match_left[l] = r;
                match_right[r] = l;
                return true;
            }
        }
        level[l] = inf;
        return false;
    };

    while (matched < n_left && bfs()) {
        for (Index l = 0; l < n_left; ++l) {
            if (match_left[l] == npos && augment(augment, l)) {
                ++matched;
            }
        }
    }

    Matching result;
    result.right_of_left = std::move(match_left);
    result.left_of_right = std::move(match_right);
    result.size = matched;
    return result;
}

std::optional<BicliqueWitness> find_biclique(const BipartiteGraph& g,
                                             std::size_t a,
                                             std::size_t b,
                                             const BruteForceGuard& guard,
                                             const Deadline& deadline) {
    if (a == 0 || b == 0) {
        throw Error("find_biclique requires a >= 1 and b >= 1");
    }
    guard.check(g.left_count(), "find_biclique");
    if (a > g.left_count() || b > g.right_count()) {
        return std::nullopt;
    }

    const std::size_t words = (g.right_count() + 63) / 64;
    std::vector<std::uint64_t> neighborhood(g.left_count() * words, 0);
    for (Index l = 0; l < g.left_count(); ++l) {
        for (Index r : g.neighbors(l)) {
            neighborhood[l * words + r / 64] |= std::uint64_t(1) << (r % 64);
        }
    }

    // Running intersections per recursion depth; depth d holds the
    // intersection of the d chosen neighborhoods.
    std::vector<std::uint64_t> stack((a + 1) * words, ~std::uint64_t(0));
    std::vector<Index> chosen;
    chosen.reserve(a);

    std::optional<BicliqueWitness> witness;
    auto search = [&](auto&& self, Index next) -> bool {
        deadline.poll();
        if (chosen.size() == a) {
            BicliqueWitness w;
            w.left = chosen;
            const std::uint64_t* inter = &stack[a * words];
            for (Index r = 0; r < g.right_count() && w.right.size() < b; ++r) {
                if ((inter[r / 64] >> (r % 64)) & 1u) {
                    w.right.push_back(r);
                }
            }
            witness = std::move(w);
            return true;
        }
        const std::size_t depth = chosen.size();
        const std::size_t remaining = a - depth;
        for (Index l = next; l + remaining <= g.left_count(); ++l) {
            std::uint64_t* out = &stack[(depth + 1) * words];
            const std::uint64_t* in = &stack[depth * words];
            std::size_t bits = 0;
            for (std::size_t w = 0; w < words; ++w) {
                out[w] = in[w] & neighborhood[l * words + w];
                bits += static_cast<std::size_t>(std::popcount(out[w]));
            }
            if (bits < b) {
                continue;
            }
            chosen.push_back(l);
            if (self(self, l + 1)) {
                return true;
            }
            chosen.pop_back();
        }
        return false;
    };

    // Mask off bits beyond the right count in the root row.
    if (g.right_count() % 64 != 0) {
        stack[words - 1] = (std::uint64_t(1) << (g.right_count() % 64)) - 1;
    }
    search(search, 0);
    return witness;
}

}  // namespace causord
