#include "causord/simon.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "causord/bipartite.hpp"

namespace causord {

namespace {

constexpr Index kNoIndex = static_cast<Index>(-1);

// Enumerates size-l equation subsets in lexicographic index order and
// hands every subset whose variable union has exactly l elements to `fn`.
// Prefixes whose union already exceeds l are pruned, which is sound for
// structural inputs (adding equations never shrinks the union). `fn`
// returning false stops the walk.
template <typename Fn>
void for_each_complete_subset(const Structure& s,
                              std::size_t l,
                              const Deadline& deadline,
                              Fn&& fn) {
    const std::size_t m = s.equation_count();
    const std::size_t words = (s.variable_count() + 63) / 64;
    std::vector<std::uint64_t> masks(m * words, 0);
    for (Index e = 0; e < m; ++e) {
        for (Index v : s.variables_of(e)) {
            masks[e * words + v / 64] |= std::uint64_t(1) << (v % 64);
        }
    }

    std::vector<std::uint64_t> unions((l + 1) * words, 0);
    std::vector<Index> chosen;
    chosen.reserve(l);

    auto walk = [&](auto&& self, Index next) -> bool {
        deadline.poll();
        if (chosen.size() == l) {
            return fn(chosen);
        }
        const std::size_t depth = chosen.size();
        const std::size_t remaining = l - depth;
        for (Index e = next; e + remaining <= m; ++e) {
            const std::uint64_t* in = &unions[depth * words];
            std::uint64_t* out = &unions[(depth + 1) * words];
            std::size_t bits = 0;
            for (std::size_t w = 0; w < words; ++w) {
                out[w] = in[w] | masks[e * words + w];
                bits += static_cast<std::size_t>(std::popcount(out[w]));
            }
            if (bits > l || (depth + 1 == l && bits != l)) {
                continue;
            }
            chosen.push_back(e);
            const bool keep_going = self(self, e + 1);
            chosen.pop_back();
            if (!keep_going) {
                return false;
            }
        }
        return true;
    };
    walk(walk, 0);
}

void require_complete(const Structure& s) {
    ValidationReport report = validate(s);
    if (!report.is_complete) {
        throw NotCompleteError(s, std::move(report));
    }
}

void assert_pairwise_disjoint(const Structure& s, const MinimalSubstructures& result) {
    const std::size_t count = result.equation_sets.size();
    const std::size_t words = (s.variable_count() + 63) / 64;
    std::vector<std::uint64_t> var_masks(count * words, 0);
    for (std::size_t i = 0; i < count; ++i) {
        for (Index e : result.equation_sets[i]) {
            for (Index v : s.variables_of(e)) {
                var_masks[i * words + v / 64] |= std::uint64_t(1) << (v % 64);
            }
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            for (std::size_t w = 0; w < words; ++w) {
                if ((var_masks[i * words + w] & var_masks[j * words + w]) != 0) {
                    throw std::logic_error(
                        "minimal substructures are not variable-disjoint");
                }
            }
            // Variable-disjointness must force equation-disjointness.
            std::vector<Index> overlap;
            std::set_intersection(result.equation_sets[i].begin(),
                                  result.equation_sets[i].end(),
                                  result.equation_sets[j].begin(),
                                  result.equation_sets[j].end(),
                                  std::back_inserter(overlap));
            if (!overlap.empty()) {
                throw std::logic_error("minimal substructures share an equation");
            }
        }
    }
}

}  // namespace

MinimalSubstructures minimal_substructures(const Structure& s,
                                           const BruteForceGuard& guard,
                                           const Deadline& deadline) {
    require_complete(s);
    guard.check(s.equation_count(), "minimal_substructures");

    MinimalSubstructures result;
    const std::size_t m = s.equation_count();
    if (m == 0) {
        return result;
    }

    for (std::size_t l = 1; l < m; ++l) {
        for_each_complete_subset(s, l, deadline, [&](const std::vector<Index>& subset) {
            result.equation_sets.push_back(subset);
            return true;
        });
        if (!result.equation_sets.empty()) {
            result.size_each = l;
            assert_pairwise_disjoint(s, result);
            return result;
        }
    }

    // No proper complete substructure: the structure itself is minimal.
    result.size_each = m;
    result.equation_sets.emplace_back(m);
    std::iota(result.equation_sets.back().begin(), result.equation_sets.back().end(), 0);
    return result;
}

namespace {

// Lexicographically least assignment of a complete substructure: equations
// in index order each take their lowest-index variable that still leaves
// the rest perfectly matchable. A plain "lowest free variable" pick can
// dead-end even inside a minimal substructure, so every pick is checked
// for feasibility with a small augmenting-path matcher.
std::vector<std::pair<Index, Index>> assign_substructure(const Structure& s,
                                                         const std::vector<Index>& equations) {
    std::vector<Index> variables;
    for (Index e : equations) {
        auto vars = s.variables_of(e);
        variables.insert(variables.end(), vars.begin(), vars.end());
    }
    std::sort(variables.begin(), variables.end());
    variables.erase(std::unique(variables.begin(), variables.end()), variables.end());

    std::unordered_map<Index, Index> local_of_variable;
    for (Index i = 0; i < variables.size(); ++i) {
        local_of_variable.emplace(variables[i], i);
    }

    const std::size_t k = equations.size();
    std::vector<std::vector<Index>> adjacency(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (Index v : s.variables_of(equations[i])) {
            adjacency[i].push_back(local_of_variable.at(v));
        }
    }

    std::vector<Index> fixed(k, kNoIndex);  // equation -> local variable
    std::vector<char> taken(variables.size(), 0);

    // Can equations [from, k) be perfectly matched on the untaken variables?
    auto feasible = [&](std::size_t from) {
        std::vector<Index> match_variable(variables.size(), kNoIndex);
        std::vector<char> visited(variables.size(), 0);
        auto augment = [&](auto&& self, std::size_t eq) -> bool {
            for (Index v : adjacency[eq]) {
                if (taken[v] || visited[v]) {
                    continue;
                }
                visited[v] = 1;
                if (match_variable[v] == kNoIndex || self(self, match_variable[v])) {
                    match_variable[v] = static_cast<Index>(eq);
                    return true;
                }
            }
            return false;
        };
        for (std::size_t eq = from; eq < k; ++eq) {
            std::fill(visited.begin(), visited.end(), 0);
            if (!augment(augment, eq)) {
                return false;
            }
        }
        return true;
    };

    for (std::size_t eq = 0; eq < k; ++eq) {
        bool assigned = false;
        for (Index v : adjacency[eq]) {
            if (taken[v]) {
                continue;
            }
            taken[v] = 1;
            if (feasible(eq + 1)) {
                fixed[eq] = v;
                assigned = true;
                break;
            }
            taken[v] = 0;
        }
        if (!assigned) {
            throw std::logic_error("complete substructure admits no assignment");
        }
    }

    std::vector<std::pair<Index, Index>> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.emplace_back(equations[i], variables[fixed[i]]);
    }
    return out;
}

}  // namespace

TotalCausalMapping recursive_total_causal_mapping(const Structure& s,
                                                  const BruteForceGuard& guard,
                                                  const Deadline& deadline) {
    require_complete(s);
    guard.check(s.equation_count(), "recursive_total_causal_mapping");

    std::unordered_map<std::string, std::string> match_by_name;
    Structure current = s;
    while (!current.empty()) {
        deadline.poll();
        const MinimalSubstructures level = minimal_substructures(current, guard, deadline);
        std::vector<Index> removed;
        for (const auto& equations : level.equation_sets) {
            for (auto [e, v] : assign_substructure(current, equations)) {
                match_by_name.emplace(current.equation_name(e), current.variable_name(v));
                removed.push_back(e);
            }
        }
        current = subtract(current, removed);
    }

    std::vector<Index> assignment(s.equation_count(), kNoIndex);
    for (Index e = 0; e < s.equation_count(); ++e) {
        const std::string& variable = match_by_name.at(s.equation_name(e));
        assignment[e] = *s.find_variable(variable);
    }
    TotalCausalMapping mapping(std::move(assignment));
    if (!mapping.valid_for(s)) {
        throw std::logic_error("recursive mapping is not a bijection");
    }
    return mapping;
}

CausalOrdering classic_causal_ordering(const Structure& s,
                                       const BruteForceGuard& guard,
                                       const Deadline& deadline) {
    const TotalCausalMapping mapping = recursive_total_causal_mapping(s, guard, deadline);
    return transitive_closure(direct_dependencies(s, mapping));
}

namespace {

std::size_t union_size(const Structure& s, const std::vector<Index>& equations) {
    std::vector<Index> all;
    for (Index e : equations) {
        auto vars = s.variables_of(e);
        all.insert(all.end(), vars.begin(), vars.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all.size();
}

}  // namespace

CsdpResult complete_substructure_decision(const Structure& s,
                                          std::size_t size,
                                          CsdpMode mode,
                                          const BruteForceGuard& guard,
                                          const Deadline& deadline) {
    require_complete(s);
    const std::size_t m = s.equation_count();
    if (size < 1 || size >= m) {
        throw Error("csdp size must satisfy 1 <= size < " + std::to_string(m));
    }
    guard.check(m, "csdp");

    CsdpResult result;
    if (mode == CsdpMode::BruteForce) {
        for_each_complete_subset(s, size, deadline, [&](const std::vector<Index>& subset) {
            result.satisfiable = true;
            result.witness_equations = subset;
            return false;
        });
    } else {
        // A complete substructure of size l corresponds exactly to a
        // K_{l, m-l} biclique in the bipartite complement; its left side
        // is the witness.
        const BipartiteGraph complement_graph = complement(to_bipartite(s));
        auto witness = find_biclique(complement_graph, size, m - size, guard, deadline);
        if (witness) {
            result.satisfiable = true;
            result.witness_equations = std::move(witness->left);
        }
    }

    if (result.satisfiable &&
        (result.witness_equations.size() != size ||
         union_size(s, result.witness_equations) != size)) {
        throw std::logic_error("csdp witness failed verification");
    }
    return result;
}

}  // namespace causord
