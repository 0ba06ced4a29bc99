#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace causord {

/// Base class of every domain error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input text does not conform to the structure file grammar.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message)
        : Error(message), line_(0), column_(0) {}

    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(message + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A brute-force operation was asked to run on an instance above its bound.
class GuardError : public Error {
public:
    using Error::Error;
};

/// A cooperative wall-clock deadline expired inside a long-running search.
class TimeoutError : public Error {
public:
    using Error::Error;
};

/// Instance-size bound shared by all exponential operations.
/// `unlimited` corresponds to the CLI's --force-exponential flag.
struct BruteForceGuard {
    std::size_t max_equations = 24;
    bool unlimited = false;

    void check(std::size_t equation_count, const char* operation) const {
        if (unlimited || equation_count <= max_equations) {
            return;
        }
        throw GuardError(std::string(operation) + ": instance has " +
                         std::to_string(equation_count) +
                         " equations, above the brute-force bound of " +
                         std::to_string(max_equations) +
                         " (use --force-exponential to override)");
    }
};

/// Cooperative wall-clock limit. poll() samples the clock once every few
/// thousand calls, so it is cheap enough for tight enumeration loops.
class Deadline {
public:
    Deadline() = default;

    explicit Deadline(std::chrono::duration<double> budget)
        : armed_(true),
          seconds_(budget.count()),
          expires_at_(std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget)) {}

    bool armed() const noexcept { return armed_; }

    void poll() const {
        if (!armed_ || (++tick_ & 0x1fffu) != 0) {
            return;
        }
        if (std::chrono::steady_clock::now() > expires_at_) {
            char budget[32];
            std::snprintf(budget, sizeof budget, "%g", seconds_);
            throw TimeoutError("timed out after " + std::string(budget) + " s");
        }
    }

private:
    bool armed_ = false;
    double seconds_ = 0.0;
    std::chrono::steady_clock::time_point expires_at_{};
    mutable std::uint32_t tick_ = 0;
};

}  // namespace causord
