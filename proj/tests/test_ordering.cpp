#include <doctest.h>

#include <algorithm>
#include <set>

#include "causord/ordering.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace causord;
using namespace causord::testing;

namespace {

using Edge = std::pair<Index, Index>;

std::vector<Edge> sorted_closure_edges(const CausalOrdering& o) {
    auto edges = o.edges();
    std::sort(edges.begin(), edges.end());
    return edges;
}

std::vector<std::vector<Index>> canonical_clusters(const CausalOrdering& o) {
    return o.clusters();
}

void check_same_ordering(const CausalOrdering& a, const CausalOrdering& b) {
    CHECK(a.edge_count() == b.edge_count());
    CHECK(sorted_closure_edges(a) == sorted_closure_edges(b));
    CHECK(canonical_clusters(a) == canonical_clusters(b));
}

TotalCausalMapping identity_mapping(std::size_t n) {
    std::vector<Index> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<Index>(i);
    }
    return TotalCausalMapping(std::move(v));
}

}  // namespace

TEST_CASE("total_causal_mapping: fixture yields a valid bijection") {
    Structure s = seven_equation_structure();
    TotalCausalMapping phi = total_causal_mapping(s);
    CHECK(phi.valid_for(s));
    // Deterministic matching: the identity pairing.
    CHECK(phi == identity_mapping(7));
}

TEST_CASE("total_causal_mapping: incomplete structure is rejected with a report") {
    Structure s = parse_structure("f1: x1 x2\n");
    try {
        total_causal_mapping(s);
        FAIL("expected NotCompleteError");
    } catch (const NotCompleteError& e) {
        CHECK_FALSE(e.report().is_complete);
        CHECK(e.report().is_structural);
        CHECK(std::string(e.what()) == "not complete: 1 equation, 2 variables");
    }
}

TEST_CASE("total_causal_mapping: anchored triangle forces f4 to x4") {
    Structure s = triangle_anchor_structure();
    CHECK(total_causal_mapping(s).variable_of(3) == 3);
    for (const auto& phi : enumerate_total_causal_mappings(s)) {
        CHECK(phi.variable_of(3) == 3);
    }
}

TEST_CASE("direct_dependencies: fixture edges under the identity mapping") {
    Structure s = seven_equation_structure();
    DependencyGraph g = direct_dependencies(s, identity_mapping(7));
    std::vector<Edge> expected = {
        {0, 3}, {1, 3}, {2, 3}, {4, 3},  // into x4
        {0, 4}, {2, 4}, {3, 4},          // into x5
        {3, 5},                          // x4 -> x6
        {4, 6},                          // x5 -> x7
    };
    std::sort(expected.begin(), expected.end());
    CHECK(g.edges() == expected);
    CHECK(g.edge_count() == 9);
    CHECK(g.edge_count() == s.density() - s.variable_count());
}

TEST_CASE("direct_dependencies: single self-contained equation has no edges") {
    Structure s = parse_structure("f1: x1");
    CHECK(direct_dependencies(s, identity_mapping(1)).edge_count() == 0);
}

TEST_CASE("direct_dependencies: anchored triangle under a rotated mapping") {
    Structure s = triangle_anchor_structure();
    const Index x1 = vindex(s, "x1");
    const Index x2 = vindex(s, "x2");
    const Index x3 = vindex(s, "x3");
    const Index x4 = vindex(s, "x4");
    // f1 -> x3, f2 -> x1, f3 -> x2, f4 -> x4
    TotalCausalMapping phi(std::vector<Index>{x3, x1, x2, x4});
    REQUIRE(phi.valid_for(s));
    DependencyGraph g = direct_dependencies(s, phi);
    std::vector<Edge> expected = {{x1, x3}, {x2, x1}, {x3, x2},
                                  {x1, x4}, {x2, x4}, {x3, x4}};
    std::sort(expected.begin(), expected.end());
    CHECK(g.edges() == expected);
}

TEST_CASE("direct_dependencies: rejects a mapping for the wrong structure") {
    Structure s = seven_equation_structure();
    CHECK_THROWS_AS(direct_dependencies(s, identity_mapping(6)), Error);
    // Not injective.
    TotalCausalMapping repeated(std::vector<Index>{0, 0, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(direct_dependencies(s, repeated), Error);
    // Maps f1 to a variable it does not contain.
    TotalCausalMapping foreign(std::vector<Index>{1, 0, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(direct_dependencies(s, foreign), Error);
}

TEST_CASE("transitive_closure: fixture closure has 18 edges") {
    Structure s = seven_equation_structure();
    CausalOrdering o = transitive_closure(direct_dependencies(s, identity_mapping(7)));
    // Frozen from the independent per-vertex BFS oracle.
    std::vector<Edge> expected = {
        {0, 3}, {0, 4}, {0, 5}, {0, 6},
        {1, 3}, {1, 4}, {1, 5}, {1, 6},
        {2, 3}, {2, 4}, {2, 5}, {2, 6},
        {3, 4}, {3, 5}, {3, 6},
        {4, 3}, {4, 5}, {4, 6},
    };
    std::sort(expected.begin(), expected.end());
    auto oracle = bfs_closure_edges(direct_dependencies(s, identity_mapping(7)));
    std::sort(oracle.begin(), oracle.end());
    REQUIRE(oracle == expected);

    CHECK(o.edge_count() == 18);
    CHECK(sorted_closure_edges(o) == expected);
    CHECK(o.depends(0, 6));
    CHECK_FALSE(o.depends(6, 0));
    CHECK_FALSE(o.depends(3, 3));
}

TEST_CASE("transitive_closure: edgeless graph") {
    DependencyGraph g({"a", "b", "c"}, {});
    CausalOrdering o = transitive_closure(g);
    CHECK(o.edge_count() == 0);
    CHECK(o.cluster_count() == 3);
    CHECK(o.clusters() == std::vector<std::vector<Index>>{{0}, {1}, {2}});
}

TEST_CASE("transitive_closure: two-cycle is one cluster") {
    DependencyGraph g({"a", "b"}, {{0, 1}, {1, 0}});
    CausalOrdering o = transitive_closure(g);
    CHECK(o.edge_count() == 2);
    CHECK(o.depends(0, 1));
    CHECK(o.depends(1, 0));
    CHECK_FALSE(o.depends(0, 0));
    CHECK(o.cluster_count() == 1);
    CHECK(o.clusters() == std::vector<std::vector<Index>>{{0, 1}});
}

TEST_CASE("transitive_closure: agrees with floyd and the BFS oracle") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        DependencyGraph g = random_digraph(1 + seed % 50, 0.001 + 0.01 * (seed % 15), seed);
        CausalOrdering dfs = transitive_closure(g);
        CausalOrdering floyd = transitive_closure_floyd(g);
        check_same_ordering(dfs, floyd);

        auto oracle = bfs_closure_edges(g);
        std::sort(oracle.begin(), oracle.end());
        CHECK(sorted_closure_edges(dfs) == oracle);
    }
}

TEST_CASE("transitive_closure: clusters equal mutual-reachability classes") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        DependencyGraph g = random_digraph(20, 0.08, seed);
        CausalOrdering o = transitive_closure(g);
        for (Index a = 0; a < 20; ++a) {
            for (Index b = 0; b < 20; ++b) {
                bool same_cluster = o.cluster_of(a) == o.cluster_of(b);
                bool mutual = a == b || (o.depends(a, b) && o.depends(b, a));
                CHECK(same_cluster == mutual);
            }
        }
    }
}

TEST_CASE("transitive_closure_floyd: refuses oversized graphs") {
    std::vector<std::string> names(4097);
    for (std::size_t i = 0; i < names.size(); ++i) {
        names[i] = "v" + std::to_string(i);
    }
    DependencyGraph g(std::move(names), {});
    CHECK_THROWS_AS(transitive_closure_floyd(g), Error);
}

TEST_CASE("causal_ordering: fixture clusters") {
    CausalOrdering o = causal_ordering(seven_equation_structure());
    CHECK(o.edge_count() == 18);
    CHECK(o.cluster_count() == 6);
    // x4 and x5 are strongly coupled, everything else is a singleton.
    CHECK(o.clusters() ==
          std::vector<std::vector<Index>>{{0}, {1}, {2}, {3, 4}, {5}, {6}});
}

TEST_CASE("causal_ordering: single equation") {
    CausalOrdering o = causal_ordering(parse_structure("f1: x1"));
    CHECK(o.edge_count() == 0);
    CHECK(o.clusters() == std::vector<std::vector<Index>>{{0}});
}

TEST_CASE("causal_ordering: anchored triangle") {
    Structure s = triangle_anchor_structure();
    CausalOrdering o = causal_ordering(s);
    CHECK(o.clusters() == std::vector<std::vector<Index>>{{0, 1, 2}, {3}});
    for (Index v = 0; v < 3; ++v) {
        CHECK(o.depends(v, 3));
        CHECK_FALSE(o.depends(3, v));
    }
    CHECK(o.edge_count() == 9);
}

TEST_CASE("enumerate_total_causal_mappings: fixture has exactly two") {
    Structure s = seven_equation_structure();
    auto mappings = enumerate_total_causal_mappings(s);
    REQUIRE(mappings.size() == 2);
    for (const auto& phi : mappings) {
        CHECK(phi.valid_for(s));
    }
    // They differ exactly in the f4/f5 swap over x4/x5.
    CHECK(mappings[0].variable_of(3) == 3);
    CHECK(mappings[0].variable_of(4) == 4);
    CHECK(mappings[1].variable_of(3) == 4);
    CHECK(mappings[1].variable_of(4) == 3);
}

TEST_CASE("enumerate_total_causal_mappings: single equation and limits") {
    Structure s = parse_structure("f1: x1");
    CHECK(enumerate_total_causal_mappings(s).size() == 1);
    Structure seven = seven_equation_structure();
    CHECK(enumerate_total_causal_mappings(seven, 1).size() == 1);
    CHECK(enumerate_total_causal_mappings(seven, 0).empty());
}

TEST_CASE("enumerate_total_causal_mappings: guard") {
    Structure s = random_complete_structure(25, 0.0, 3);
    CHECK_THROWS_AS(enumerate_total_causal_mappings(s), GuardError);
    BruteForceGuard loose{.max_equations = 30, .unlimited = false};
    CHECK(enumerate_total_causal_mappings(s, 10, loose).size() == 1);
}

TEST_CASE("closure invariant: every mapping of one structure induces one ordering") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Structure s = random_complete_structure(1 + seed % 8, 1.0 + (seed % 3), seed);
        auto mappings = enumerate_total_causal_mappings(s, 100000);
        REQUIRE(!mappings.empty());
        CausalOrdering first = transitive_closure(direct_dependencies(s, mappings[0]));
        for (std::size_t i = 1; i < mappings.size(); ++i) {
            CausalOrdering other = transitive_closure(direct_dependencies(s, mappings[i]));
            check_same_ordering(first, other);
        }
    }
}

TEST_CASE("transitive_closure: directed cycle collapses to one cluster") {
    const std::size_t n = 1000;
    std::vector<std::string> names;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
        edges.emplace_back(static_cast<Index>(i), static_cast<Index>((i + 1) % n));
    }
    CausalOrdering o = transitive_closure(DependencyGraph(std::move(names), std::move(edges)));
    CHECK(o.cluster_count() == 1);
    CHECK(o.edge_count() == std::uint64_t(n) * (n - 1));
    CHECK(o.depends(0, 999));
    CHECK(o.depends(999, 0));
}

TEST_CASE("edges(): refuses closures above the materialization bound") {
    const std::size_t n = 8000;  // closure is n*(n-1), just under 64M pairs
    std::vector<std::string> names;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
        edges.emplace_back(static_cast<Index>(i), static_cast<Index>((i + 1) % n));
    }
    CausalOrdering o = transitive_closure(DependencyGraph(std::move(names), std::move(edges)));
    CHECK(o.edge_count() == std::uint64_t(n) * (n - 1));
    CHECK_THROWS_AS(o.edges(), Error);
    CHECK(o.edges(std::uint64_t(n) * n).size() == std::uint64_t(n) * (n - 1));
}

namespace {

// Number of perfect matchings by Ryser's inclusion-exclusion formula;
// independent of the backtracking enumerator.
std::uint64_t permanent(const Structure& s) {
    const std::size_t n = s.equation_count();
    std::vector<std::uint64_t> row_mask(n, 0);
    for (Index e = 0; e < n; ++e) {
        for (Index v : s.variables_of(e)) {
            row_mask[e] |= std::uint64_t(1) << v;
        }
    }
    std::int64_t total = 0;
    for (std::uint64_t subset = 0; subset < (std::uint64_t(1) << n); ++subset) {
        std::int64_t product = 1;
        for (std::size_t e = 0; e < n && product != 0; ++e) {
            product *= std::popcount(row_mask[e] & subset);
        }
        const int sign = (n - std::popcount(subset)) % 2 == 0 ? 1 : -1;
        total += sign * product;
    }
    return static_cast<std::uint64_t>(total);
}

}  // namespace

TEST_CASE("enumerate_total_causal_mappings: count matches the permanent") {
    CHECK(permanent(seven_equation_structure()) == 2);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Structure s = random_complete_structure(1 + seed % 8, 1.0 + (seed % 3), seed);
        auto mappings = enumerate_total_causal_mappings(s, 1000000);
        CHECK(mappings.size() == permanent(s));
    }
}

TEST_CASE("direct dependency count never exceeds density minus variables") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Structure s = random_complete_structure(2 + seed % 9, 1.3, seed);
        TotalCausalMapping phi = total_causal_mapping(s);
        DependencyGraph g = direct_dependencies(s, phi);
        CHECK(g.edge_count() <= s.density() - s.variable_count());
    }
}
