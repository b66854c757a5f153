#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hhineq {

// Base of every error raised by the library. `kind()` is the stable type name
// used in CLI diagnostics and report skip reasons.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept = 0;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message, std::string expected);

    [[nodiscard]] const char* kind() const noexcept override { return "ParseError"; }
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class EvalError : public Error {
public:
    EvalError(const std::string& message, double x);

    [[nodiscard]] const char* kind() const noexcept override { return "EvalError"; }
    [[nodiscard]] double point() const noexcept { return x_; }

private:
    double x_;
};

class DomainError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "DomainError"; }
};

class ToleranceNotReached : public Error {
public:
    ToleranceNotReached(double best_value, double best_estimate, std::size_t evals);

    [[nodiscard]] const char* kind() const noexcept override { return "ToleranceNotReached"; }
    [[nodiscard]] double best_value() const noexcept { return value_; }
    [[nodiscard]] double best_estimate() const noexcept { return estimate_; }
    [[nodiscard]] std::size_t evals() const noexcept { return evals_; }

private:
    double value_;
    double estimate_;
    std::size_t evals_;
};

class NegativeFunction : public Error {
public:
    NegativeFunction(double x, double value);

    [[nodiscard]] const char* kind() const noexcept override { return "NegativeFunction"; }
    [[nodiscard]] double point() const noexcept { return x_; }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    double x_;
    double value_;
};

class NegativeBracket : public Error {
public:
    explicit NegativeBracket(double bracket);

    [[nodiscard]] const char* kind() const noexcept override { return "NegativeBracket"; }
    [[nodiscard]] double bracket() const noexcept { return bracket_; }

private:
    double bracket_;
};

class IoError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "IoError"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "ConfigError"; }
};

// Shortest decimal string that reads back to the same double.
std::string format_shortest(double v);
// printf("%.*g") with the given number of significant digits.
std::string format_sig(double v, int digits);

}  // namespace hhineq
