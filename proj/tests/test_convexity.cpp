#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "hhineq/convexity.hpp"
#include "test_support.hpp"

using namespace hhineq;
using hhineq::testing::uniform;

namespace {

const ClassSpec kOrdinary{Sense::first, 1, 1, 1};

// Independent re-evaluation of the class inequality at a witness triple.
double oracle_class_rhs(const ClassSpec& c, double fx, double fym, double mu) {
    const double w = c.sense == Sense::first ? std::pow(mu, c.alpha * c.s)
                                             : std::pow(std::pow(mu, c.alpha), c.s);
    const double v = c.sense == Sense::first ? 1.0 - w
                                             : std::pow(1.0 - std::pow(mu, c.alpha), c.s);
    return w * fx + c.m * v * fym;
}

void check_class_witness(const ExprAst& f, const ClassSpec& c, const MembershipVerdict& v,
                         double tol) {
    REQUIRE(v.witness);
    const auto& w = *v.witness;
    const double lhs = f(w.mu * w.x + (1 - w.mu) * w.y);
    const double rhs = oracle_class_rhs(c, f(w.x), f(w.y / c.m), w.mu);
    CHECK(lhs > rhs + tol);
    CHECK(w.lhs_value == doctest::Approx(lhs).epsilon(1e-14));
    CHECK(w.rhs_value == doctest::Approx(rhs).epsilon(1e-12));
}

void check_convex_witness(const ExprAst& f, const MembershipVerdict& v, double tol) {
    REQUIRE(v.witness);
    const auto& w = *v.witness;
    const double lhs = f(w.mu * w.x + (1 - w.mu) * w.y);
    CHECK(lhs > w.mu * f(w.x) + (1 - w.mu) * f(w.y) + tol);
}

void check_quasi_witness(const ExprAst& f, const MembershipVerdict& v, double tol) {
    REQUIRE(v.witness);
    const auto& w = *v.witness;
    const double lhs = f(w.mu * w.x + (1 - w.mu) * w.y);
    CHECK(lhs > std::max(f(w.x), f(w.y)) + tol);
}

}  // namespace

TEST_CASE("class_rhs examples") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const ClassSpec c{Sense::first, uniform(rng, 0.01, 1), uniform(rng, 0, 1), uniform(rng, 0.01, 1)};
        const double fx = uniform(rng, 0, 10);
        CHECK(class_rhs(c, fx, uniform(rng, 0, 10), 1.0) == fx);
    }
    const ClassSpec second{Sense::second, 1, 1, 1};
    CHECK(class_rhs(second, 2, 4, 0.3) == doctest::Approx(3.4).epsilon(1e-15));
    // 0^0 = 1: with alpha = 0, mu = 0 puts all weight on fx.
    CHECK(class_rhs(ClassSpec{Sense::first, 0.5, 0, 1}, 3, 7, 0.0) == 3.0);
    CHECK(class_rhs(ClassSpec{Sense::second, 0.5, 0, 1}, 3, 7, 0.0) == 3.0);
}

TEST_CASE("s = 1 makes both senses identical bit for bit") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 5000; ++i) {
        const double alpha = uniform(rng, 0, 1);
        const double m = uniform(rng, 0.01, 1);
        const double fx = uniform(rng, 0, 100);
        const double fy = uniform(rng, 0, 100);
        const double mu = uniform(rng, 0, 1);
        const double a = class_rhs(ClassSpec{Sense::first, 1, alpha, m}, fx, fy, mu);
        const double b = class_rhs(ClassSpec{Sense::second, 1, alpha, m}, fx, fy, mu);
        REQUIRE(std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b));
    }
}

TEST_CASE("alpha = m = 1 gives classical s-convexity in the second sense") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 2000; ++i) {
        const double s = uniform(rng, 0.01, 1);
        const double fx = uniform(rng, 0, 100);
        const double fy = uniform(rng, 0, 100);
        const double t = uniform(rng, 0, 1);
        const double want = std::pow(t, s) * fx + std::pow(1 - t, s) * fy;
        CHECK(class_rhs(ClassSpec{Sense::second, s, 1, 1}, fx, fy, t) ==
              doctest::Approx(want).epsilon(1e-15));
    }
}

TEST_CASE("membership examples") {
    const SamplingSpec sampling;
    CHECK(check_membership(parse("x^2"), kOrdinary, 10, sampling).satisfied());

    const auto root = parse("sqrt(x)");
    const auto v = check_membership(root, kOrdinary, 1, sampling);
    CHECK(v.status == MembershipStatus::violated);
    check_class_witness(root, kOrdinary, v, sampling.violation_tolerance);
    // The concave counterexample from hand evaluation is itself a violation.
    CHECK(std::sqrt(0.5) > oracle_class_rhs(kOrdinary, 0.0, 1.0, 0.5));

    for (double s0 : {0.25, 0.5, 0.75}) {
        CAPTURE(s0);
        const ClassSpec c{Sense::second, s0, 1, 1};
        const auto f = parse("x^" + format_shortest(s0));
        CHECK(check_membership(f, c, 10, sampling).satisfied());
    }
}

TEST_CASE("quasi-convex and convex examples") {
    const SamplingSpec sampling;
    CHECK(check_quasi_convex(parse("x^3"), 0, 1, sampling).satisfied());
    CHECK(check_quasi_convex(parse("x^2"), -1, 1, sampling).satisfied());
    const auto sine = parse("sin(x)");
    const auto q = check_quasi_convex(sine, 0, 6, sampling);
    CHECK_FALSE(q.satisfied());
    check_quasi_witness(sine, q, sampling.violation_tolerance);

    CHECK(check_convex(parse("exp(x)"), 0, 2, sampling).satisfied());
    const auto cube = parse("x^3");
    const auto c = check_convex(cube, -1, 1, sampling);
    CHECK_FALSE(c.satisfied());
    check_convex_witness(cube, c, sampling.violation_tolerance);
    CHECK(check_convex(parse("abs(x-0.5)"), 0, 1, sampling).satisfied());
}

TEST_CASE("verdicts are determined by the seed") {
    SamplingSpec sampling;
    sampling.grid_points_per_axis = 3;
    sampling.random_trials = 5000;
    // x^2 on a 3-point grid is convex on the lattice, so only random triples can
    // find the concave dip of this perturbation.
    const auto f = parse("x^2 + 10*max2(0, 0.01 - (x - 0.37)^2)");
    for (std::uint64_t seed : {1ULL, 42ULL, 20240601ULL}) {
        sampling.rng_seed = seed;
        const auto a = check_convex(f, 0, 1, sampling);
        const auto b = check_convex(f, 0, 1, sampling);
        CHECK(a.status == b.status);
        CHECK(a.samples_checked == b.samples_checked);
        REQUIRE(a.witness.has_value() == b.witness.has_value());
        if (a.witness) {
            CHECK(a.witness->x == b.witness->x);
            CHECK(a.witness->y == b.witness->y);
            CHECK(a.witness->mu == b.witness->mu);
            check_convex_witness(f, a, sampling.violation_tolerance);
        }
    }
}

TEST_CASE("witnesses re-verify on random concave perturbations") {
    std::mt19937_64 rng(99);
    const SamplingSpec sampling;
    for (int i = 0; i < 30; ++i) {
        const double c = uniform(rng, 0.2, 0.8);
        const double h = uniform(rng, 0.2, 1.0);
        const auto f = parse("x^2 + " + testing::lit(h) + "*sqrt(abs(x - " + testing::lit(c) + "))");
        const auto v = check_convex(f, 0, 1, sampling);
        REQUIRE_FALSE(v.satisfied());
        check_convex_witness(f, v, sampling.violation_tolerance);
        const auto m = check_membership(f, kOrdinary, 1, sampling);
        REQUIRE_FALSE(m.satisfied());
        check_class_witness(f, kOrdinary, m, sampling.violation_tolerance);
    }
}

TEST_CASE("convex nonnegative functions pass the ordinary class check") {
    const SamplingSpec sampling;
    for (const char* src : {"x", "x^2", "x^3", "exp(x)", "abs(x-0.5)", "max2(1, x)", "(x-1)^2"}) {
        CAPTURE(src);
        const auto f = parse(src);
        for (double b : {1.0, 2.0, 3.0}) {
            REQUIRE(check_convex(f, 0, b, sampling).satisfied());
            CHECK(check_membership(f, kOrdinary, b, sampling).satisfied());
        }
    }
}

TEST_CASE("negative functions and invalid parameters") {
    const SamplingSpec sampling;
    try {
        (void)check_membership(parse("x - 1"), kOrdinary, 2, sampling);
        FAIL("expected NegativeFunction");
    } catch (const NegativeFunction& e) {
        CHECK(e.value() < 0.0);
        CHECK(e.point() >= 0.0);
    }
    CHECK_THROWS_AS(check_membership(parse("ln(x)"), kOrdinary, 2, sampling), EvalError);
    CHECK_THROWS_AS(check_membership(parse("x"), ClassSpec{Sense::first, 0, 1, 1}, 1, sampling),
                    DomainError);
    CHECK_THROWS_AS(check_membership(parse("x"), ClassSpec{Sense::first, 1, 1.5, 1}, 1, sampling),
                    DomainError);
    CHECK_THROWS_AS(check_membership(parse("x"), ClassSpec{Sense::first, 1, 1, 0}, 1, sampling),
                    DomainError);
    SamplingSpec bad;
    bad.grid_points_per_axis = 2;
    CHECK_THROWS_AS(check_convex(parse("x"), 0, 1, bad), DomainError);
    bad = SamplingSpec{};
    bad.violation_tolerance = -1;
    CHECK_THROWS_AS(check_quasi_convex(parse("x"), 0, 1, bad), DomainError);
    CHECK_THROWS_AS(check_quasi_convex(parse("x"), 1, 0, sampling), DomainError);
    CHECK(parse_sense("second") == Sense::second);
    CHECK_THROWS_AS(parse_sense("third"), DomainError);
}

TEST_CASE("m < 1 samples f beyond the range") {
    // f(y/m) with m = 0.5 needs f on [0, 2]; ln(2.5 - x) is defined only there.
    const SamplingSpec sampling;
    CHECK_NOTHROW(check_membership(parse("abs(ln(2.5 - x))"), ClassSpec{Sense::first, 1, 1, 0.5}, 1, sampling));
    CHECK_THROWS_AS(check_membership(parse("abs(ln(1.5 - x))"), ClassSpec{Sense::first, 1, 1, 0.5}, 1, sampling),
                    EvalError);
}

TEST_CASE("describe renders the witness") {
    const auto text = describe(Witness{0, 0.5, 0.25, 1.5, 1.0});
    CHECK(text.find("x=0") != std::string::npos);
    CHECK(text.find("mu=0.25") != std::string::npos);
}
