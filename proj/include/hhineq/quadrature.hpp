#pragma once

#include <cstddef>
#include <functional>

#include "hhineq/expr.hpp"

namespace hhineq {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kMaxQuadEvals = 1'000'000;

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    std::size_t evals = 0;
};

// (f, a, b, p, q): the weighted integral ∫_a^b (x-a)^p (b-x)^q f(x) dx.
struct WeightedProblem {
    ExprAst f;
    double a = 0.0;
    double b = 1.0;
    double p = 1.0;
    double q = 1.0;

    // Throws DomainError unless 0 <= a < b < inf and p, q > 0.
    void validate() const;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod 7/15 quadrature. The panel with the largest
// |K15 - G7| is bisected until the summed estimates fall below
// max(tol, 1e-13 |value|); the relative floor is the double-precision limit.
// Throws ToleranceNotReached when max_evals is exhausted.
QuadResult integrate(const Integrand& f, double lo, double hi, double tol = kDefaultQuadTol,
                     std::size_t max_evals = kMaxQuadEvals);

// Single 15-point Kronrod panel (exact for polynomials up to degree 22).
QuadResult kronrod_panel(const Integrand& f, double lo, double hi);

QuadResult weighted_integral(const WeightedProblem& prob, double tol = kDefaultQuadTol);

// (b-a)^{p+q+1} ∫_0^1 (1-t)^p t^q f(ta + (1-t)b) dt
QuadResult lemma1_rhs(const WeightedProblem& prob, double tol = kDefaultQuadTol);

struct IdentityReport {
    QuadResult lhs;
    QuadResult rhs;
    double abs_diff = 0.0;
    bool pass = false;
};

// Both sides of the change-of-variables identity; passes when they agree
// within the combined error estimates plus 1e-12 max(|lhs|, |rhs|, 1).
IdentityReport verify_lemma1(const WeightedProblem& prob, double tol = kDefaultQuadTol);

}  // namespace hhineq
