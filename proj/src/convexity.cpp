#include "hhineq/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hhineq/errors.hpp"

namespace hhineq {

namespace {

std::vector<double> lattice(double lo, double hi, std::size_t n) {
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    pts.back() = hi;
    return pts;
}

std::vector<double> with_extras(std::vector<double> pts, std::span<const double> extras,
                                double lo, double hi) {
    for (double e : extras) {
        if (e >= lo && e <= hi) pts.push_back(e);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Shared scan: every lattice triple in order, then seeded random triples.
// `test` returns a witness when the inequality fails at (x, y, mu).
template <class Test>
MembershipVerdict scan(const std::vector<double>& xs, const std::vector<double>& mus, double lo,
                       double hi, const SamplingSpec& sampling, Test&& test) {
    MembershipVerdict verdict;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            for (double mu : mus) {
                ++verdict.samples_checked;
                if (auto w = test(i, j, xs[i], xs[j], mu)) {
                    verdict.status = MembershipStatus::violated;
                    verdict.witness = w;
                    return verdict;
                }
            }
        }
    }
    std::mt19937_64 rng(sampling.rng_seed);
    constexpr std::size_t kOffLattice = static_cast<std::size_t>(-1);
    for (std::size_t t = 0; t < sampling.random_trials; ++t) {
        const double x = lo + (hi - lo) * unit(rng);
        const double y = lo + (hi - lo) * unit(rng);
        const double mu = unit(rng);
        ++verdict.samples_checked;
        if (auto w = test(kOffLattice, kOffLattice, x, y, mu)) {
            verdict.status = MembershipStatus::violated;
            verdict.witness = w;
            return verdict;
        }
    }
    return verdict;
}

std::optional<Witness> compare(double x, double y, double mu, double lhs, double rhs,
                               double tolerance) {
    if (lhs > rhs + violation_margin(tolerance, lhs, rhs)) return Witness{x, y, mu, lhs, rhs};
    return std::nullopt;
}

void validate_interval(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("interval requires finite a < b");
    }
}

}  // namespace

std::string_view to_string(Sense sense) { return sense == Sense::first ? "first" : "second"; }

Sense parse_sense(std::string_view text) {
    if (text == "first" || text == "1") return Sense::first;
    if (text == "second" || text == "2") return Sense::second;
    throw DomainError("unknown sense '" + std::string(text) + "' (expected first or second)");
}

std::string_view to_string(MembershipStatus status) {
    return status == MembershipStatus::satisfied_on_samples ? "satisfied_on_samples" : "violated";
}

void ClassSpec::validate() const {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("class parameter s must lie in (0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("class parameter alpha must lie in [0, 1]");
    }
    if (!(m > 0.0 && m <= 1.0)) throw DomainError("class parameter m must lie in (0, 1]");
}

void SamplingSpec::validate() const {
    if (grid_points_per_axis < 3) throw DomainError("sampling grid needs at least 3 points");
    if (!(violation_tolerance >= 0.0)) {
        throw DomainError("violation tolerance must be non-negative");
    }
}

double class_rhs(const ClassSpec& spec, double fx, double fy_over_m, double mu) {
    // std::pow(0, 0) == 1, which is the convention wanted at the boundary.
    if (spec.sense == Sense::first) {
        const double c = std::pow(mu, spec.alpha * spec.s);
        return c * fx + spec.m * (1.0 - c) * fy_over_m;
    }
    const double c = std::pow(mu, spec.alpha);
    return std::pow(c, spec.s) * fx + spec.m * std::pow(1.0 - c, spec.s) * fy_over_m;
}

double violation_margin(double tolerance, double lhs, double rhs) {
    return tolerance * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

MembershipVerdict check_membership(const ExprAst& f, const ClassSpec& spec, double x_max,
                                   const SamplingSpec& sampling,
                                   std::span<const double> extra_points) {
    spec.validate();
    sampling.validate();
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be positive");

    const double tol = sampling.violation_tolerance;
    auto nonneg = [&](double x, double v) {
        if (v < -tol) throw NegativeFunction(x, v);
        return v;
    };
    const auto xs = with_extras(lattice(0.0, x_max, sampling.grid_points_per_axis), extra_points,
                                0.0, x_max);
    const auto mus = lattice(0.0, 1.0, sampling.grid_points_per_axis);

    std::vector<double> fx(xs.size());
    std::vector<double> fy_over_m(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fx[i] = nonneg(xs[i], f(xs[i]));
        const double ym = xs[i] / spec.m;
        fy_over_m[i] = nonneg(ym, f(ym));
    }

    return scan(xs, mus, 0.0, x_max, sampling,
                [&](std::size_t i, std::size_t j, double x, double y,
                    double mu) -> std::optional<Witness> {
                    const bool on_lattice = i < xs.size();
                    const double fxv = on_lattice ? fx[i] : nonneg(x, f(x));
                    const double fyv = on_lattice ? fy_over_m[j] : nonneg(y / spec.m, f(y / spec.m));
                    const double z = mu * x + (1.0 - mu) * y;
                    const double lhs = nonneg(z, f(z));
                    return compare(x, y, mu, lhs, class_rhs(spec, fxv, fyv, mu), tol);
                });
}

MembershipVerdict check_quasi_convex(const ExprAst& f, double a, double b,
                                     const SamplingSpec& sampling) {
    validate_interval(a, b);
    sampling.validate();
    const auto xs = lattice(a, b, sampling.grid_points_per_axis);
    const auto mus = lattice(0.0, 1.0, sampling.grid_points_per_axis);
    std::vector<double> fx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);

    return scan(xs, mus, a, b, sampling,
                [&](std::size_t i, std::size_t j, double x, double y,
                    double t) -> std::optional<Witness> {
                    const bool on_lattice = i < xs.size();
                    const double fxv = on_lattice ? fx[i] : f(x);
                    const double fyv = on_lattice ? fx[j] : f(y);
                    const double lhs = f(t * x + (1.0 - t) * y);
                    return compare(x, y, t, lhs, std::max(fxv, fyv),
                                   sampling.violation_tolerance);
                });
}

MembershipVerdict check_convex(const ExprAst& f, double a, double b,
                               const SamplingSpec& sampling) {
    validate_interval(a, b);
    sampling.validate();
    const auto xs = lattice(a, b, sampling.grid_points_per_axis);
    const auto mus = lattice(0.0, 1.0, sampling.grid_points_per_axis);
    std::vector<double> fx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);

    return scan(xs, mus, a, b, sampling,
                [&](std::size_t i, std::size_t j, double x, double y,
                    double t) -> std::optional<Witness> {
                    const bool on_lattice = i < xs.size();
                    const double fxv = on_lattice ? fx[i] : f(x);
                    const double fyv = on_lattice ? fx[j] : f(y);
                    const double lhs = f(t * x + (1.0 - t) * y);
                    return compare(x, y, t, lhs, t * fxv + (1.0 - t) * fyv,
                                   sampling.violation_tolerance);
                });
}

std::string describe(const Witness& w) {
    return "witness x=" + format_shortest(w.x) + " y=" + format_shortest(w.y) +
           " mu=" + format_shortest(w.mu) + " lhs=" + format_shortest(w.lhs_value) +
           " rhs=" + format_shortest(w.rhs_value);
}

}  // namespace hhineq
