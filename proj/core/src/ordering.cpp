#include "causord/ordering.hpp"

#include <algorithm>
#include <bit>
#include <new>
#include <numeric>

#include "causord/bipartite.hpp"

namespace causord {

namespace {

constexpr Index kNoIndex = static_cast<Index>(-1);

}  // namespace

bool TotalCausalMapping::valid_for(const Structure& s) const {
    if (variable_of_.size() != s.equation_count() ||
        s.equation_count() != s.variable_count()) {
        return false;
    }
    std::vector<char> hit(s.variable_count(), 0);
    for (Index e = 0; e < variable_of_.size(); ++e) {
        Index v = variable_of_[e];
        if (v >= s.variable_count() || hit[v] || !s.contains(e, v)) {
            return false;
        }
        hit[v] = 1;
    }
    return true;
}

TotalCausalMapping total_causal_mapping(const Structure& s) {
    ValidationReport report = validate(s);
    if (!report.is_complete) {
        throw NotCompleteError(s, std::move(report));
    }
    if (s.empty()) {
        return TotalCausalMapping(std::vector<Index>{});
    }
    Matching matching = maximum_matching(to_bipartite(s));
    // A complete structure always admits a saturating matching.
    return TotalCausalMapping(std::move(matching.right_of_left));
}

std::vector<TotalCausalMapping> enumerate_total_causal_mappings(const Structure& s,
                                                                std::size_t limit,
                                                                const BruteForceGuard& guard,
                                                                const Deadline& deadline) {
    ValidationReport report = validate(s);
    if (!report.is_complete) {
        throw NotCompleteError(s, std::move(report));
    }
    guard.check(s.equation_count(), "enumerate_total_causal_mappings");

    const Index m = static_cast<Index>(s.equation_count());
    std::vector<TotalCausalMapping> out;
    if (limit == 0) {
        return out;
    }
    if (m == 0) {
        out.emplace_back(std::vector<Index>{});
        return out;
    }

    std::vector<char> used(s.variable_count(), 0);
    std::vector<Index> assignment(m, kNoIndex);

    // Prune branches that already starve a later equation.
    auto starved = [&](Index from) {
        for (Index f = from; f < m; ++f) {
            bool has_free = false;
            for (Index v : s.variables_of(f)) {
                if (!used[v]) {
                    has_free = true;
                    break;
                }
            }
            if (!has_free) {
                return true;
            }
        }
        return false;
    };

    auto walk = [&](auto&& self, Index e) -> bool {
        deadline.poll();
        if (e == m) {
            out.emplace_back(assignment);
            return out.size() < limit;
        }
        for (Index v : s.variables_of(e)) {
            if (used[v]) {
                continue;
            }
            used[v] = 1;
            assignment[e] = v;
            bool keep_going = starved(e + 1) || self(self, e + 1);
            assignment[e] = kNoIndex;
            used[v] = 0;
            if (!keep_going) {
                return false;
            }
        }
        return true;
    };
    walk(walk, 0);
    return out;
}

DependencyGraph::DependencyGraph(std::vector<std::string> vertex_names,
                                 std::vector<std::pair<Index, Index>> edges)
    : names_(std::move(vertex_names)), adjacency_(names_.size()) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [from, to] : edges) {
        if (from >= names_.size() || to >= names_.size()) {
            throw Error("dependency edge references an unknown vertex");
        }
        if (from == to) {
            throw Error("dependency graph must not contain self-loops");
        }
        adjacency_[from].push_back(to);
    }
    edge_count_ = edges.size();
}

std::vector<std::pair<Index, Index>> DependencyGraph::edges() const {
    std::vector<std::pair<Index, Index>> out;
    out.reserve(edge_count_);
    for (Index from = 0; from < adjacency_.size(); ++from) {
        for (Index to : adjacency_[from]) {
            out.emplace_back(from, to);
        }
    }
    return out;
}

DependencyGraph direct_dependencies(const Structure& s, const TotalCausalMapping& mapping) {
    if (!mapping.valid_for(s)) {
        throw Error("mapping is not a total causal mapping for this structure");
    }
    std::vector<std::pair<Index, Index>> edges;
    edges.reserve(s.density() - s.equation_count());
    for (Index e = 0; e < s.equation_count(); ++e) {
        const Index target = mapping.variable_of(e);
        for (Index v : s.variables_of(e)) {
            if (v != target) {
                edges.emplace_back(v, target);
            }
        }
    }
    return DependencyGraph(s.variable_names(), std::move(edges));
}

bool CausalOrdering::depends(Index from, Index to) const {
    if (from == to) {
        return false;
    }
    const Index a = component_of_[from];
    const Index b = component_of_[to];
    if (a == b) {
        return true;  // distinct members of one strongly coupled cluster
    }
    return component_reaches(a, b);
}

std::vector<std::vector<Index>> CausalOrdering::clusters() const {
    std::vector<std::vector<Index>> out;
    out.reserve(members_.size());
    for (Index internal : component_of_canonical_) {
        out.push_back(members_[internal]);
    }
    return out;
}

std::vector<std::pair<Index, Index>> CausalOrdering::edges(std::uint64_t max_edges) const {
    if (edge_count_ > max_edges) {
        throw Error("closure has " + std::to_string(edge_count_) +
                    " edges; refusing to materialize more than " + std::to_string(max_edges));
    }
    const std::size_t component_count = members_.size();

    // Component-level targets expanded to sorted vertex lists, shared by
    // every member of the source component.
    std::vector<std::vector<Index>> external(component_count);
    for (Index comp = 0; comp < component_count; ++comp) {
        auto& targets = external[comp];
        const std::uint64_t* row = &reach_[comp * words_per_row_];
        for (std::size_t w = 0; w < words_per_row_; ++w) {
            std::uint64_t bits = row[w];
            while (bits != 0) {
                const Index other = static_cast<Index>(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
                targets.insert(targets.end(), members_[other].begin(), members_[other].end());
            }
        }
        std::sort(targets.begin(), targets.end());
    }

    std::vector<std::pair<Index, Index>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (Index from = 0; from < names_.size(); ++from) {
        const Index comp = component_of_[from];
        const auto& intra = members_[comp];
        const auto& ext = external[comp];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < intra.size() || j < ext.size()) {
            Index to;
            if (j >= ext.size() || (i < intra.size() && intra[i] < ext[j])) {
                to = intra[i++];
                if (to == from) {
                    continue;
                }
            } else {
                to = ext[j++];
            }
            out.emplace_back(from, to);
        }
    }
    return out;
}

CausalOrdering CausalOrdering::from_components(std::vector<std::string> names,
                                               std::vector<Index> component_of,
                                               std::vector<std::vector<Index>> members,
                                               std::vector<std::uint64_t> reach,
                                               std::size_t words_per_row) {
    CausalOrdering o;
    o.names_ = std::move(names);
    o.component_of_ = std::move(component_of);
    o.members_ = std::move(members);
    o.reach_ = std::move(reach);
    o.words_per_row_ = words_per_row;

    const std::size_t component_count = o.members_.size();
    std::uint64_t count = 0;
    for (Index comp = 0; comp < component_count; ++comp) {
        const std::uint64_t size = o.members_[comp].size();
        count += size * (size - 1);
        std::uint64_t reachable = 0;
        const std::uint64_t* row = &o.reach_[comp * o.words_per_row_];
        for (std::size_t w = 0; w < o.words_per_row_; ++w) {
            std::uint64_t bits = row[w];
            while (bits != 0) {
                reachable += o.members_[w * 64 + std::countr_zero(bits)].size();
                bits &= bits - 1;
            }
        }
        count += size * reachable;
    }
    o.edge_count_ = count;

    // Canonical cluster ids: ascending smallest member index.
    o.component_of_canonical_.resize(component_count);
    std::iota(o.component_of_canonical_.begin(), o.component_of_canonical_.end(), 0);
    std::sort(o.component_of_canonical_.begin(), o.component_of_canonical_.end(),
              [&](Index a, Index b) { return o.members_[a][0] < o.members_[b][0]; });
    o.canonical_of_component_.resize(component_count);
    for (Index canonical = 0; canonical < component_count; ++canonical) {
        o.canonical_of_component_[o.component_of_canonical_[canonical]] = canonical;
    }
    return o;
}

CausalOrdering transitive_closure(const DependencyGraph& g) {
    const std::size_t n = g.vertex_count();

    // Iterative Tarjan; components come out sinks-first, so every
    // cross-component edge points at an already numbered component.
    std::vector<Index> order(n, kNoIndex);
    std::vector<Index> low(n, 0);
    std::vector<Index> component_of(n, kNoIndex);
    std::vector<char> on_stack(n, 0);
    std::vector<Index> scc_stack;
    std::vector<std::vector<Index>> members;
    Index next_order = 0;

    struct Frame {
        Index v;
        std::size_t child;
    };
    std::vector<Frame> call_stack;

    for (Index root = 0; root < n; ++root) {
        if (order[root] != kNoIndex) {
            continue;
        }
        order[root] = low[root] = next_order++;
        scc_stack.push_back(root);
        on_stack[root] = 1;
        call_stack.push_back({root, 0});

        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            auto successors = g.successors(frame.v);
            if (frame.child < successors.size()) {
                const Index w = successors[frame.child++];
                if (order[w] == kNoIndex) {
                    order[w] = low[w] = next_order++;
                    scc_stack.push_back(w);
                    on_stack[w] = 1;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[frame.v] = std::min(low[frame.v], order[w]);
                }
            } else {
                const Index v = frame.v;
                if (low[v] == order[v]) {
                    const Index comp = static_cast<Index>(members.size());
                    members.emplace_back();
                    while (true) {
                        const Index w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[w] = 0;
                        component_of[w] = comp;
                        members[comp].push_back(w);
                        if (w == v) {
                            break;
                        }
                    }
                    std::sort(members[comp].begin(), members[comp].end());
                }
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    low[call_stack.back().v] = std::min(low[call_stack.back().v], low[v]);
                }
            }
        }
    }

    const std::size_t component_count = members.size();
    const std::size_t words = (component_count + 63) / 64;
    std::vector<std::uint64_t> reach;
    try {
        reach.assign(component_count * words, 0);
    } catch (const std::bad_alloc&) {
        throw Error("closure reachability matrix does not fit in memory (" +
                    std::to_string(component_count) + " clusters)");
    }

    // Reachability in pop order: successors' rows are already final.
    std::vector<Index> targets;
    for (Index comp = 0; comp < component_count; ++comp) {
        targets.clear();
        for (Index v : members[comp]) {
            for (Index w : g.successors(v)) {
                if (component_of[w] != comp) {
                    targets.push_back(component_of[w]);
                }
            }
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        std::uint64_t* row = &reach[comp * words];
        for (Index other : targets) {
            row[other / 64] |= std::uint64_t(1) << (other % 64);
            const std::uint64_t* source = &reach[other * words];
            for (std::size_t w = 0; w < words; ++w) {
                row[w] |= source[w];
            }
        }
    }

    return CausalOrdering::from_components(g.vertex_names(), std::move(component_of),
                                           std::move(members), std::move(reach), words);
}

CausalOrdering transitive_closure_floyd(const DependencyGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 4096) {
        throw Error("floyd closure is limited to 4096 vertices; use the dfs route");
    }
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> matrix(n * words, 0);
    auto test = [&](Index i, Index j) {
        return (matrix[i * words + j / 64] >> (j % 64)) & 1u;
    };
    for (Index v = 0; v < n; ++v) {
        for (Index w : g.successors(v)) {
            matrix[v * words + w / 64] |= std::uint64_t(1) << (w % 64);
        }
    }
    for (Index k = 0; k < n; ++k) {
        const std::uint64_t* via = &matrix[k * words];
        for (Index i = 0; i < n; ++i) {
            if (test(i, k)) {
                std::uint64_t* row = &matrix[i * words];
                for (std::size_t w = 0; w < words; ++w) {
                    row[w] |= via[w];
                }
            }
        }
    }

    // Clusters from mutual reachability, numbered by smallest member.
    std::vector<Index> component_of(n, kNoIndex);
    std::vector<std::vector<Index>> members;
    for (Index i = 0; i < n; ++i) {
        if (component_of[i] != kNoIndex) {
            continue;
        }
        const Index comp = static_cast<Index>(members.size());
        members.push_back({i});
        component_of[i] = comp;
        for (Index j = i + 1; j < n; ++j) {
            if (component_of[j] == kNoIndex && test(i, j) && test(j, i)) {
                component_of[j] = comp;
                members[comp].push_back(j);
            }
        }
    }

    const std::size_t component_count = members.size();
    const std::size_t comp_words = (component_count + 63) / 64;
    std::vector<std::uint64_t> reach(component_count * comp_words, 0);
    for (Index a = 0; a < component_count; ++a) {
        for (Index b = 0; b < component_count; ++b) {
            if (a != b && test(members[a][0], members[b][0])) {
                reach[a * comp_words + b / 64] |= std::uint64_t(1) << (b % 64);
            }
        }
    }

    return CausalOrdering::from_components(g.vertex_names(), std::move(component_of),
                                           std::move(members), std::move(reach), comp_words);
}

CausalOrdering causal_ordering(const Structure& s) {
    const TotalCausalMapping mapping = total_causal_mapping(s);
    return transitive_closure(direct_dependencies(s, mapping));
}

}  // namespace causord
