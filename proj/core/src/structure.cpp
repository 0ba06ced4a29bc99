#include "causord/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "causord/bipartite.hpp"

namespace causord {

namespace {

std::string counted(std::size_t n, const char* noun) {
    std::string out = std::to_string(n);
    out += ' ';
    out += noun;
    if (n != 1) {
        out += 's';
    }
    return out;
}

}  // namespace

bool Structure::contains(Index equation, Index variable) const {
    const auto& vars = vars_[equation];
    return std::binary_search(vars.begin(), vars.end(), variable);
}

std::optional<Index> Structure::find_equation(std::string_view name) const {
    auto it = equation_index_.find(std::string(name));
    if (it == equation_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<Index> Structure::find_variable(std::string_view name) const {
    auto it = variable_index_.find(std::string(name));
    if (it == variable_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool Structure::operator==(const Structure& other) const {
    return equation_names_ == other.equation_names_ &&
           variable_names_ == other.variable_names_ && vars_ == other.vars_;
}

namespace {

bool usable_name(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    for (char c : name) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
            return false;
        }
    }
    return true;
}

}  // namespace

StructureBuilder& StructureBuilder::add_equation(std::string_view equation,
                                                 std::span<const std::string> variables) {
    std::string name(equation);
    if (!usable_name(name)) {
        throw Error("equation id must be non-empty without whitespace");
    }
    if (s_.equation_index_.count(name) != 0) {
        throw Error("duplicate equation id '" + name + "'");
    }
    if (variables.empty()) {
        throw Error("equation '" + name + "' has no variables");
    }
    for (const std::string& var : variables) {
        if (!usable_name(var)) {
            throw Error("variable name must be non-empty without whitespace");
        }
    }

    // All names checked; interning below cannot fail and leave orphans.
    std::vector<Index> vars;
    vars.reserve(variables.size());
    for (const std::string& var : variables) {
        Index index;
        auto it = s_.variable_index_.find(var);
        if (it == s_.variable_index_.end()) {
            index = static_cast<Index>(s_.variable_names_.size());
            s_.variable_names_.push_back(var);
            s_.variable_index_.emplace(var, index);
        } else {
            index = it->second;
        }
        vars.push_back(index);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    s_.density_ += vars.size();
    s_.equation_index_.emplace(name, static_cast<Index>(s_.equation_names_.size()));
    s_.equation_names_.push_back(std::move(name));
    s_.vars_.push_back(std::move(vars));
    return *this;
}

Structure StructureBuilder::build(bool allow_empty) {
    if (s_.vars_.empty() && !allow_empty) {
        throw Error("structure has no equations");
    }
    return std::move(s_);
}

bool is_valid_identifier(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(name.front())) {
        return false;
    }
    return std::all_of(name.begin() + 1, name.end(), tail);
}

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

Structure parse_structure(std::string_view text, ParseOptions options) {
    StructureBuilder builder;
    std::size_t line_number = 0;
    std::size_t line_start = 0;
    bool saw_equation = false;

    while (line_start <= text.size()) {
        ++line_number;
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) {
            line_end = text.size();
        }
        std::string_view line = text.substr(line_start, line_end - line_start);
        std::size_t comment = line.find('#');
        if (comment != std::string_view::npos) {
            line = line.substr(0, comment);
        }

        std::size_t pos = 0;
        auto skip_space = [&] {
            while (pos < line.size() && is_space(line[pos])) {
                ++pos;
            }
        };
        auto read_token = [&]() -> std::string_view {
            std::size_t start = pos;
            while (pos < line.size() && !is_space(line[pos]) && line[pos] != ':') {
                ++pos;
            }
            return line.substr(start, pos - start);
        };

        skip_space();
        if (pos < line.size()) {
            std::size_t id_column = pos + 1;
            std::string_view id = read_token();
            if (!is_valid_identifier(id)) {
                throw ParseError("invalid equation id '" + std::string(id) + "'",
                                 line_number, id_column);
            }
            skip_space();
            if (pos >= line.size() || line[pos] != ':') {
                throw ParseError("expected ':' after equation id '" + std::string(id) + "'",
                                 line_number, pos + 1);
            }
            ++pos;

            std::vector<std::string> vars;
            while (true) {
                skip_space();
                if (pos >= line.size()) {
                    break;
                }
                std::size_t var_column = pos + 1;
                std::string_view var = read_token();
                if (pos < line.size() && line[pos] == ':') {
                    throw ParseError("unexpected ':'", line_number, pos + 1);
                }
                if (!is_valid_identifier(var)) {
                    throw ParseError("invalid variable name '" + std::string(var) + "'",
                                     line_number, var_column);
                }
                vars.emplace_back(var);
            }
            if (vars.empty()) {
                throw ParseError("equation '" + std::string(id) + "' has no variables",
                                 line_number, id_column);
            }
            try {
                builder.add_equation(id, vars);
            } catch (const Error& e) {
                throw ParseError(e.what(), line_number, id_column);
            }
            saw_equation = true;
        }

        if (line_end == text.size()) {
            break;
        }
        line_start = line_end + 1;
    }

    if (!saw_equation && !options.allow_empty) {
        throw ParseError("structure has no equations", line_number, 1);
    }
    return builder.build(options.allow_empty);
}

std::string ValidationReport::summary(const Structure& s) const {
    if (is_complete) {
        return "complete: " + counted(equation_count, "equation") + ", " +
               counted(variable_count, "variable");
    }
    if (!is_structural) {
        std::string out = "not structural: " + counted(violator_equations.size(), "equation") +
                          " cover only " + counted(violator_variable_count, "variable") + ":";
        for (Index e : violator_equations) {
            out += ' ';
            out += s.equation_name(e);
        }
        return out;
    }
    return "not complete: " + counted(equation_count, "equation") + ", " +
           counted(variable_count, "variable");
}

ValidationReport validate(const Structure& s) {
    ValidationReport report;
    report.equation_count = s.equation_count();
    report.variable_count = s.variable_count();
    if (s.empty()) {
        // The empty structure is defined complete.
        report.is_structural = true;
        report.is_complete = true;
        return report;
    }

    BipartiteGraph g = to_bipartite(s);
    Matching matching = maximum_matching(g);
    if (matching.saturates_left()) {
        report.is_structural = true;
        report.is_complete = s.equation_count() == s.variable_count();
        return report;
    }

    // Hall violator: equations reachable from an unsaturated one by
    // alternating paths; they touch strictly fewer variables than their
    // own number.
    std::vector<char> seen_left(s.equation_count(), 0);
    std::vector<char> seen_right(s.variable_count(), 0);
    std::vector<Index> queue;
    for (Index e = 0; e < s.equation_count(); ++e) {
        if (matching.right_of_left[e] == Matching::npos) {
            seen_left[e] = 1;
            queue.push_back(e);
            break;  // one unsaturated equation seeds a violator
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Index e = queue[head];
        for (Index v : g.neighbors(e)) {
            if (seen_right[v]) {
                continue;
            }
            seen_right[v] = 1;
            Index back = matching.left_of_right[v];
            if (back != Matching::npos && !seen_left[back]) {
                seen_left[back] = 1;
                queue.push_back(back);
            }
        }
    }

    for (Index e = 0; e < s.equation_count(); ++e) {
        if (seen_left[e]) {
            report.violator_equations.push_back(e);
        }
    }
    report.violator_variable_count =
        static_cast<std::size_t>(std::count(seen_right.begin(), seen_right.end(), 1));
    return report;
}

Structure subtract(const Structure& s, const Structure& sub) {
    std::vector<Index> removed;
    removed.reserve(sub.equation_count());
    for (Index e = 0; e < sub.equation_count(); ++e) {
        auto found = s.find_equation(sub.equation_name(e));
        if (!found) {
            throw Error("subtract: equation '" + sub.equation_name(e) +
                        "' is not part of the structure");
        }
        auto own = s.variables_of(*found);
        auto theirs = sub.variables_of(e);
        bool same = own.size() == theirs.size();
        for (std::size_t i = 0; same && i < own.size(); ++i) {
            same = s.variable_name(own[i]) == sub.variable_name(theirs[i]);
        }
        if (!same) {
            throw Error("subtract: equation '" + sub.equation_name(e) +
                        "' differs from its counterpart in the structure");
        }
        removed.push_back(*found);
    }
    return subtract(s, removed);
}

Structure subtract(const Structure& s, std::span<const Index> equations) {
    std::vector<char> remove_equation(s.equation_count(), 0);
    std::vector<char> remove_variable(s.variable_count(), 0);
    for (Index e : equations) {
        if (e >= s.equation_count()) {
            throw Error("subtract: equation index out of range");
        }
        remove_equation[e] = 1;
        for (Index v : s.variables_of(e)) {
            remove_variable[v] = 1;
        }
    }

    StructureBuilder builder;
    std::vector<std::string> vars;
    for (Index e = 0; e < s.equation_count(); ++e) {
        if (remove_equation[e]) {
            continue;
        }
        vars.clear();
        for (Index v : s.variables_of(e)) {
            if (!remove_variable[v]) {
                vars.push_back(s.variable_name(v));
            }
        }
        if (vars.empty()) {
            throw Error("subtract: eliminating the removed variables empties equation '" +
                        s.equation_name(e) + "'");
        }
        builder.add_equation(s.equation_name(e), vars);
    }
    return builder.build(/*allow_empty=*/true);
}

std::size_t StructureMatrix::row_sum(std::size_t row) const {
    std::size_t sum = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        sum += cells[row * cols + j];
    }
    return sum;
}

std::size_t StructureMatrix::total() const {
    std::size_t sum = 0;
    for (std::uint8_t c : cells) {
        sum += c;
    }
    return sum;
}

StructureMatrix to_matrix(const Structure& s) {
    StructureMatrix m;
    m.rows = s.equation_count();
    m.cols = s.variable_count();
    m.cells.assign(m.rows * m.cols, 0);
    for (Index e = 0; e < s.equation_count(); ++e) {
        for (Index v : s.variables_of(e)) {
            m.cells[e * m.cols + v] = 1;
        }
    }
    return m;
}

namespace {

// Unbiased draw from [0, n); rejection keeps the result identical on every
// platform, unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth's method; adequate for the small means the generator uses.
std::size_t poisson(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) {
        return 0;
    }
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= unit_uniform(rng);
    } while (p > limit);
    return k - 1;
}

}  // namespace

Structure random_complete_structure(std::size_t n, double extra, std::uint64_t seed) {
    if (n == 0) {
        throw Error("generator requires at least one equation");
    }
    if (!(extra >= 0.0)) {
        throw Error("generator requires extra >= 0");
    }

    std::mt19937_64 rng(seed);

    // A random bijection equation -> variable; it guarantees a saturating
    // matching and hence completeness.
    std::vector<Index> assigned(n);
    for (std::size_t i = 0; i < n; ++i) {
        assigned[i] = static_cast<Index>(i);
    }
    for (std::size_t i = n; i-- > 1;) {
        std::swap(assigned[i], assigned[uniform_below(rng, i + 1)]);
    }

    StructureBuilder builder;
    std::vector<std::string> vars;
    std::unordered_set<Index> used;
    for (std::size_t i = 0; i < n; ++i) {
        vars.clear();
        used.clear();
        used.insert(assigned[i]);
        vars.push_back("x" + std::to_string(assigned[i] + 1));

        std::size_t extras = std::min(poisson(rng, extra), n - 1);
        for (std::size_t k = 0; k < extras; ++k) {
            Index candidate;
            do {
                candidate = static_cast<Index>(uniform_below(rng, n));
            } while (used.count(candidate) != 0);
            used.insert(candidate);
            vars.push_back("x" + std::to_string(candidate + 1));
        }
        builder.add_equation("f" + std::to_string(i + 1), vars);
    }
    return builder.build();
}

}  // namespace causord
