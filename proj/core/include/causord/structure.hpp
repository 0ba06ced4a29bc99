#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causord/errors.hpp"

namespace causord {

/// Interned index of an equation or variable, dense in [0, count).
using Index = std::uint32_t;

class StructureBuilder;

/// An incidence structure: a list of equations, each holding the set of
/// variables that appear in it. The variable universe is exactly the union
/// of all appearing variables, so there are no orphan variables by
/// construction. Immutable after construction and safe to share across
/// threads for reading.
class Structure {
public:
    Structure() = default;

    std::size_t equation_count() const noexcept { return vars_.size(); }
    std::size_t variable_count() const noexcept { return variable_names_.size(); }
    bool empty() const noexcept { return vars_.empty(); }

    /// Total number of variable appearances across all equations.
    std::size_t density() const noexcept { return density_; }

    const std::string& equation_name(Index e) const { return equation_names_[e]; }
    const std::string& variable_name(Index v) const { return variable_names_[v]; }
    const std::vector<std::string>& equation_names() const noexcept { return equation_names_; }
    const std::vector<std::string>& variable_names() const noexcept { return variable_names_; }

    /// Variables of one equation, sorted by interned index, no duplicates.
    std::span<const Index> variables_of(Index e) const { return vars_[e]; }

    bool contains(Index equation, Index variable) const;

    std::optional<Index> find_equation(std::string_view name) const;
    std::optional<Index> find_variable(std::string_view name) const;

    bool operator==(const Structure& other) const;

private:
    friend class StructureBuilder;

    std::vector<std::string> equation_names_;
    std::vector<std::string> variable_names_;
    std::vector<std::vector<Index>> vars_;
    std::unordered_map<std::string, Index> equation_index_;
    std::unordered_map<std::string, Index> variable_index_;
    std::size_t density_ = 0;
};

/// Accumulates equations and interns variables in first-appearance order.
/// Duplicate variable mentions within one equation are deduplicated;
/// duplicate equation ids and equations without variables are rejected.
class StructureBuilder {
public:
    StructureBuilder& add_equation(std::string_view equation,
                                   std::span<const std::string> variables);

    Structure build(bool allow_empty = false);

private:
    Structure s_;
};

/// True iff `name` matches [A-Za-z_][A-Za-z0-9_]*.
bool is_valid_identifier(std::string_view name);

struct ParseOptions {
    /// Accept input with zero equations (the empty structure is defined
    /// complete). Off by default: an empty file is a parse error.
    bool allow_empty = false;
};

/// Parses the structure text format: one `<eqid>: <var> <var> ...` per
/// line, `#` commenting to end of line, blank lines ignored.
Structure parse_structure(std::string_view text, ParseOptions options = {});

struct ValidationReport {
    bool is_structural = false;
    bool is_complete = false;
    std::size_t equation_count = 0;
    std::size_t variable_count = 0;

    /// When not structural: a subset of equations touching fewer variables
    /// than its own cardinality (sorted by equation index), plus the number
    /// of variables that subset touches.
    std::vector<Index> violator_equations;
    std::size_t violator_variable_count = 0;

    /// One-line human-readable verdict, e.g. "not complete: 1 equation, 2 variables".
    std::string summary(const Structure& s) const;
};

/// Checks the subset-cardinality condition (every k equations touch at
/// least k variables) via maximum-matching saturation, and completeness
/// (|E| = |V| on top of that). Failures are reported, never thrown.
ValidationReport validate(const Structure& s);

/// Raised by operations that require a complete structure; carries the
/// validation report so callers can explain the failure.
class NotCompleteError : public Error {
public:
    NotCompleteError(const Structure& s, ValidationReport report)
        : Error(report.summary(s)), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Removes `sub`'s equations from `s` and eliminates every variable
/// appearing in `sub` from the remaining equations. Errors if `sub` is not
/// a sub-collection of `s`'s equations or if elimination empties one of the
/// remaining equations.
Structure subtract(const Structure& s, const Structure& sub);

/// Same elimination, selecting the removed equations by index into `s`.
Structure subtract(const Structure& s, std::span<const Index> equations);

struct StructureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> cells;  // row-major, 0 or 1

    bool at(std::size_t row, std::size_t col) const { return cells[row * cols + col] != 0; }
    std::size_t row_sum(std::size_t row) const;
    std::size_t total() const;
};

/// Boolean equation-by-variable incidence matrix.
StructureMatrix to_matrix(const Structure& s);

/// Generates a complete structure of n equations: a random bijection
/// equation -> variable guarantees completeness, then each equation gains
/// extra distinct variable appearances with the given mean. Deterministic
/// for a fixed (n, extra, seed); equations are named f1..fn and variables
/// x1..xn.
Structure random_complete_structure(std::size_t n, double extra, std::uint64_t seed);

}  // namespace causord
