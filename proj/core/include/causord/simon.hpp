#pragma once

#include <cstddef>
#include <vector>

#include "causord/errors.hpp"
#include "causord/ordering.hpp"
#include "causord/structure.hpp"

namespace causord {

/// All complete substructures of the globally smallest size l, as sets of
/// equation indices. For a structure with no proper complete substructure
/// the whole equation set is the single member (l = m). Members are
/// complete, pairwise variable-disjoint and, in consequence, pairwise
/// equation-disjoint; both facts are asserted on every invocation.
struct MinimalSubstructures {
    std::size_t size_each = 0;
    std::vector<std::vector<Index>> equation_sets;  // each sorted, list in lexicographic order
};

/// Subset enumeration in increasing l, exponential by nature. Requires a
/// complete structure and honors the brute-force guard.
MinimalSubstructures minimal_substructures(const Structure& s,
                                           const BruteForceGuard& guard = {},
                                           const Deadline& deadline = {});

/// The classical recursive mapping: find the minimal substructures, map
/// each of their equations to a still-unmatched own variable (lowest index
/// wins), eliminate, recurse on the remainder. Worst-case exponential.
TotalCausalMapping recursive_total_causal_mapping(const Structure& s,
                                                  const BruteForceGuard& guard = {},
                                                  const Deadline& deadline = {});

/// Classical causal ordering: recursive_total_causal_mapping composed with
/// the shared direct-dependency and closure code.
CausalOrdering classic_causal_ordering(const Structure& s,
                                       const BruteForceGuard& guard = {},
                                       const Deadline& deadline = {});

enum class CsdpMode {
    BruteForce,  // enumerate size-l equation subsets directly
    Biclique,    // decide through a biclique search on the bipartite complement
};

struct CsdpResult {
    bool satisfiable = false;
    std::vector<Index> witness_equations;  // sorted; empty iff not satisfiable

    explicit operator bool() const noexcept { return satisfiable; }
};

/// Does a complete structure with m equations contain a complete
/// substructure of exactly `size` equations, 1 <= size < m? Both modes
/// verify any witness they report.
CsdpResult complete_substructure_decision(const Structure& s,
                                          std::size_t size,
                                          CsdpMode mode,
                                          const BruteForceGuard& guard = {},
                                          const Deadline& deadline = {});

}  // namespace causord
