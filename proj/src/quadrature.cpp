#include "hhineq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "hhineq/errors.hpp"

namespace hhineq {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr double kRelativeFloor = 1e-13;

struct Panel {
    double lo;
    double hi;
    double value;
    double err;
};

struct WorstFirst {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.err != b.err) return a.err < b.err;
        return a.lo > b.lo;
    }
};

Panel gk15(const Integrand& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
    }
    return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

struct Totals {
    double value = 0.0;
    double err = 0.0;
};

// Exact totals in a canonical (left-to-right) order so results are
// reproducible bit for bit.
Totals sum_panels(std::vector<Panel> panels) {
    std::sort(panels.begin(), panels.end(),
              [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    Totals t;
    for (const auto& p : panels) {
        t.value += p.value;
        t.err += p.err;
    }
    return t;
}

double threshold(double tol, double value) {
    return std::max(tol, kRelativeFloor * std::fabs(value));
}

}  // namespace

void WeightedProblem::validate() const {
    if (!(a >= 0.0) || !(a < b) || !std::isfinite(b)) {
        throw DomainError("weighted problem requires 0 <= a < b < inf, got [" +
                          format_shortest(a) + ", " + format_shortest(b) + "]");
    }
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
        throw DomainError("weighted problem requires p, q > 0, got p = " + format_shortest(p) +
                          ", q = " + format_shortest(q));
    }
}

QuadResult kronrod_panel(const Integrand& f, double lo, double hi) {
    const Panel p = gk15(f, lo, hi);
    return {p.value, p.err, 15};
}

QuadResult integrate(const Integrand& f, double lo, double hi, double tol,
                     std::size_t max_evals) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("integrate requires finite lo < hi");
    }
    if (!(tol > 0.0)) throw DomainError("integrate requires tol > 0");

    // priority_queue hides its container; derive to reach it for totals.
    struct Heap : std::priority_queue<Panel, std::vector<Panel>, WorstFirst> {
        const std::vector<Panel>& panels() const { return c; }
    } heap;

    heap.push(gk15(f, lo, hi));
    std::size_t evals = 15;
    Totals running{heap.top().value, heap.top().err};

    for (;;) {
        if (running.err <= threshold(tol, running.value)) {
            const Totals exact = sum_panels(heap.panels());
            if (exact.err <= threshold(tol, exact.value)) {
                return {exact.value, exact.err, evals};
            }
            running = exact;
        }
        if (evals + 30 > max_evals) {
            const Totals exact = sum_panels(heap.panels());
            throw ToleranceNotReached(exact.value, exact.err, evals);
        }
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi)) {
            const Totals exact = sum_panels(heap.panels());
            throw ToleranceNotReached(exact.value, exact.err, evals);
        }
        heap.pop();
        const Panel left = gk15(f, worst.lo, mid);
        const Panel right = gk15(f, mid, worst.hi);
        evals += 30;
        running.value += left.value + right.value - worst.value;
        running.err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
}

QuadResult weighted_integral(const WeightedProblem& prob, double tol) {
    prob.validate();
    const auto& [f, a, b, p, q] = prob;
    return integrate(
        [&](double x) { return std::pow(x - a, p) * std::pow(b - x, q) * f(x); }, a, b, tol);
}

QuadResult lemma1_rhs(const WeightedProblem& prob, double tol) {
    prob.validate();
    const auto& [f, a, b, p, q] = prob;
    const double scale = std::pow(b - a, p + q + 1.0);
    QuadResult inner = integrate(
        [&](double t) { return std::pow(1.0 - t, p) * std::pow(t, q) * f(t * a + (1.0 - t) * b); },
        0.0, 1.0, tol / scale);
    inner.value *= scale;
    inner.err_estimate *= scale;
    return inner;
}

IdentityReport verify_lemma1(const WeightedProblem& prob, double tol) {
    IdentityReport report;
    report.lhs = weighted_integral(prob, tol);
    report.rhs = lemma1_rhs(prob, tol);
    report.abs_diff = std::fabs(report.lhs.value - report.rhs.value);
    const double scale =
        std::max({std::fabs(report.lhs.value), std::fabs(report.rhs.value), 1.0});
    report.pass = report.abs_diff <=
                  report.lhs.err_estimate + report.rhs.err_estimate + 1e-12 * scale;
    return report;
}

}  // namespace hhineq
