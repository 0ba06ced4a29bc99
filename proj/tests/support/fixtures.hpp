#pragma once

#include <string_view>

#include "causord/structure.hpp"

namespace causord::testing {

// 7 equations over 7 variables, density 16; minimal substructures are
// {f1}, {f2}, {f3} and the variables x4, x5 are strongly coupled.
inline constexpr std::string_view kSevenEquationText =
    "f1: x1\n"
    "f2: x2\n"
    "f3: x3\n"
    "f4: x1 x2 x3 x4 x5\n"
    "f5: x1 x3 x4 x5\n"
    "f6: x4 x6\n"
    "f7: x5 x7\n";

// 4 equations over 4 variables; {f1,f2,f3} is the single minimal
// substructure and every total causal mapping sends f4 to x4.
inline constexpr std::string_view kTriangleAnchorText =
    "f1: x1 x3\n"
    "f2: x1 x2\n"
    "f3: x2 x3\n"
    "f4: x1 x2 x3 x4\n";

// Interned index of a variable/equation, by name. Variables intern in
// first-appearance order, so fixture tests address them by name.
inline Index vindex(const Structure& s, std::string_view name) {
    return *s.find_variable(name);
}

inline Index eindex(const Structure& s, std::string_view name) {
    return *s.find_equation(name);
}

inline Structure seven_equation_structure() {
    return parse_structure(kSevenEquationText);
}

inline Structure triangle_anchor_structure() {
    return parse_structure(kTriangleAnchorText);
}

// f_i over {x_i, x_(i mod m)+1}: complete, and no proper subset of
// equations covers exactly its own number of variables, so the whole
// structure is its only complete substructure. Worst case for the
// subset-enumeration operations.
inline Structure cycle_structure(std::size_t m) {
    StructureBuilder builder;
    for (std::size_t i = 1; i <= m; ++i) {
        std::vector<std::string> vars = {"x" + std::to_string(i),
                                         "x" + std::to_string(i % m + 1)};
        builder.add_equation("f" + std::to_string(i), vars);
    }
    return builder.build();
}

}  // namespace causord::testing
