#include "hhineq/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace hhineq {

ParseError::ParseError(std::size_t offset, const std::string& message, std::string expected)
    : Error("at offset " + std::to_string(offset) + ": " + message +
            (expected.empty() ? std::string{} : " (expected " + expected + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& message, double x)
    : Error(message + " at x = " + format_shortest(x)), x_(x) {}

ToleranceNotReached::ToleranceNotReached(double best_value, double best_estimate,
                                         std::size_t evals)
    : Error("evaluation cap of " + std::to_string(evals) +
            " reached; best value " + format_shortest(best_value) +
            " with error estimate " + format_shortest(best_estimate)),
      value_(best_value),
      estimate_(best_estimate),
      evals_(evals) {}

NegativeFunction::NegativeFunction(double x, double value)
    : Error("f(" + format_shortest(x) + ") = " + format_shortest(value) + " is negative"),
      x_(x),
      value_(value) {}

NegativeBracket::NegativeBracket(double bracket)
    : Error("bracket " + format_shortest(bracket) + " is negative"), bracket_(bracket) {}

std::string format_shortest(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) return "?";
    return {buf.data(), end};
}

std::string format_sig(double v, int digits) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*g", digits, v);
    return buf.data();
}

}  // namespace hhineq
