#pragma once

// Closed-form upper bounds for the weighted integral
//   ∫_a^b (x-a)^p (b-x)^q f(x) dx
// under quasi-convexity (T1-T3) and s-(alpha, m)-convexity in the first
// sense (T4-T6), plus the two-sided Hermite-Hadamard check.

#include <optional>
#include <string_view>

#include "hhineq/convexity.hpp"
#include "hhineq/quadrature.hpp"

namespace hhineq {

// Hölder exponent k > 1; the conjugate k/(k-1) is derived on demand.
class HolderExponent {
public:
    explicit HolderExponent(double k);
    [[nodiscard]] double value() const noexcept { return k_; }
    [[nodiscard]] double conjugate() const noexcept { return k_ / (k_ - 1.0); }

private:
    double k_;
};

// Power-mean exponent l >= 1.
class PowerMeanExponent {
public:
    explicit PowerMeanExponent(double l);
    [[nodiscard]] double value() const noexcept { return l_; }

private:
    double l_;
};

enum class TheoremTag { HH_left, HH_right, T1, T2, T3, T4, T5, T5_sharp, T6 };

std::string_view to_string(TheoremTag tag);
TheoremTag parse_theorem(std::string_view text);

struct BoundInputs {
    double a;
    double b;
    double p;
    double q;
    std::optional<ClassSpec> spec;
    std::optional<double> exponent;
};

struct BoundValue {
    double value;
    TheoremTag theorem_tag;
    BoundInputs inputs_echo;
};

struct HermiteHadamardReport {
    double midpoint;
    double mean_integral;
    double endpoint_avg;
    double slack;
    bool left_pass;   // midpoint <= mean
    bool right_pass;  // mean <= endpoint average
    bool left_reversed;   // midpoint >= mean
    bool right_reversed;  // mean >= endpoint average
};

HermiteHadamardReport hh_check(const ExprAst& f, double a, double b,
                               double tol = kDefaultQuadTol);

// (b-a)^{p+q+1} β(p+1, q+1) max{f(a), f(b)}
BoundValue quasi_bound_basic(const WeightedProblem& prob);

// (b-a)^{p+q+1} β(kp+1, kq+1)^{1/k} max{|f(a)|^{k'}, |f(b)|^{k'}}^{1/k'}, k' = k/(k-1)
BoundValue quasi_bound_holder(const WeightedProblem& prob, HolderExponent k);

// (b-a)^{p+q+1} β(p+1, q+1) max{|f(a)|^l, |f(b)|^l}^{1/l}
BoundValue quasi_bound_power_mean(const WeightedProblem& prob, PowerMeanExponent l);

// (b-a)^{p+q+1} [β(q+αs+1, p+1)(|f(a)| - m|f(b/m)|) + m β(q+1, p+1)|f(b/m)|]
BoundValue kms1_bound(const WeightedProblem& prob, const ClassSpec& spec);

// (b-a)^{p+q+1} β(αs+1, 1)^{1/k'} β(qk+1, pk+1)^{1/k} [|f(a)|^{k'} + m|f(b/m)|^{k'}]^{1/k'}
BoundValue kms1_bound_holder(const WeightedProblem& prob, const ClassSpec& spec,
                             HolderExponent k);

// Same Hölder route with the exact weights 1/(αs+1) and αs/(αs+1) on the
// two endpoint terms; never larger than kms1_bound_holder.
BoundValue kms1_bound_holder_sharp(const WeightedProblem& prob, const ClassSpec& spec,
                                   HolderExponent k);

// (b-a)^{p+q+1} β(q+1, p+1)^{(l-1)/l}
//   [β(q+αs+1, p+1)(|f(a)|^l - m|f(b/m)|^l) + m β(q+1, p+1)|f(b/m)|^l]^{1/l}
// Throws NegativeBracket when the bracket is negative.
BoundValue kms1_bound_power_mean(const WeightedProblem& prob, const ClassSpec& spec,
                                 PowerMeanExponent l);

}  // namespace hhineq
