#pragma once

// Sampling-based membership checks for convexity classes.
//
// A "satisfied_on_samples" verdict is evidence only. A "violated" verdict
// carries a witness (x, y, mu) that can be re-evaluated independently.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "hhineq/expr.hpp"

namespace hhineq {

enum class Sense { first, second };

std::string_view to_string(Sense sense);
Sense parse_sense(std::string_view text);

// Parameters of the s-(alpha, m)-convex classes. m = 0 is excluded because
// the defining inequality evaluates f(y / m).
struct ClassSpec {
    Sense sense = Sense::first;
    double s = 1.0;      // (0, 1]
    double alpha = 1.0;  // [0, 1]
    double m = 1.0;      // (0, 1]

    void validate() const;
    friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

struct SamplingSpec {
    std::size_t grid_points_per_axis = 21;
    std::size_t random_trials = 2000;
    std::uint64_t rng_seed = 20240601;
    double violation_tolerance = 1e-9;

    void validate() const;
};

struct Witness {
    double x;
    double y;
    double mu;
    double lhs_value;
    double rhs_value;
};

enum class MembershipStatus { satisfied_on_samples, violated };

std::string_view to_string(MembershipStatus status);

struct MembershipVerdict {
    MembershipStatus status = MembershipStatus::satisfied_on_samples;
    std::optional<Witness> witness;
    std::size_t samples_checked = 0;

    [[nodiscard]] bool satisfied() const noexcept {
        return status == MembershipStatus::satisfied_on_samples;
    }
};

// Right-hand side of the class inequality at mu, given fx = f(x) and
// fy_over_m = f(y/m). First sense: mu^(alpha s) fx + m (1 - mu^(alpha s)) fy_over_m.
// Second sense: (mu^alpha)^s fx + m (1 - mu^alpha)^s fy_over_m. 0^0 = 1.
double class_rhs(const ClassSpec& spec, double fx, double fy_over_m, double mu);

// Effective violation margin: tolerance scaled by max(1, |lhs|, |rhs|) so that
// rounding in equality cases of large-valued functions is not reported.
double violation_margin(double tolerance, double lhs, double rhs);

// Checks f(mu x + (1-mu) y) <= class_rhs(spec, f(x), f(y/m), mu) for x, y on a
// lattice over [0, x_max] (plus any extra_points) and mu on a lattice over
// [0, 1], then on random triples. Throws NegativeFunction if f dips below
// -violation_tolerance at any sample.
MembershipVerdict check_membership(const ExprAst& f, const ClassSpec& spec, double x_max,
                                   const SamplingSpec& sampling,
                                   std::span<const double> extra_points = {});

// f(t x + (1-t) y) <= max{f(x), f(y)} on [a, b].
MembershipVerdict check_quasi_convex(const ExprAst& f, double a, double b,
                                     const SamplingSpec& sampling);

// f(t x + (1-t) y) <= t f(x) + (1-t) f(y) on [a, b].
MembershipVerdict check_convex(const ExprAst& f, double a, double b,
                               const SamplingSpec& sampling);

std::string describe(const Witness& w);

}  // namespace hhineq
