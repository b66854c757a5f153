#pragma once

// Sweep engine: for every (function, interval, p, q, class, theorem,
// exponent) configuration, verify the theorem's hypothesis on samples,
// integrate the left-hand side and compare it with the closed-form bound.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhineq/bounds.hpp"
#include "hhineq/convexity.hpp"
#include "hhineq/expr.hpp"

namespace hhineq {

struct NamedFunction {
    std::string name;
    ExprAst f;
};

struct Interval {
    double a;
    double b;
};

struct SweepConfig {
    std::vector<NamedFunction> functions;
    std::vector<Interval> intervals;
    std::vector<double> p_values;
    std::vector<double> q_values;
    std::vector<ClassSpec> class_specs;
    std::vector<double> k_values;
    std::vector<double> l_values;
    SamplingSpec sampling;
    double quad_tol = kDefaultQuadTol;

    // Throws ConfigError on empty lists or out-of-range values.
    void validate() const;
};

// Functions {x, x^2, x^3, exp(x), abs(x-0.5), x^0.5}, intervals {[0,1], [0,2],
// [1,3]}, p, q in {0.5, 1, 2, 3}, s in {0.25, 0.5, 1} x alpha in {0.5, 1} x
// m in {0.5, 1} (first sense), k in {1.5, 2, 5}, l in {1, 2, 4}.
SweepConfig standard_sweep_config();

// Key/value text format, one entry per line; see README for the schema.
SweepConfig parse_sweep_config(std::string_view text);
SweepConfig load_sweep_config(const std::string& path);

struct BoundRow {
    std::string function;
    double a = 0.0;
    double b = 0.0;
    double p = 0.0;
    double q = 0.0;
    ClassSpec spec;
    TheoremTag theorem = TheoremTag::T1;
    std::optional<double> exponent;
    std::string membership;  // satisfied_on_samples | violated | error
    std::optional<double> lhs;
    std::optional<double> lhs_err;
    std::optional<double> bound;
    std::optional<double> slack_ratio;
    bool pass = false;
    // Second-sense rows evaluated with first-sense formulas; never counted.
    bool conjectural = false;
    std::string skip_reason;

    [[nodiscard]] bool skipped() const noexcept { return !lhs.has_value(); }
    [[nodiscard]] bool counted() const noexcept { return !skipped() && !conjectural; }
    [[nodiscard]] bool failed() const noexcept { return counted() && !pass; }
};

struct BoundReport {
    std::vector<BoundRow> rows;

    [[nodiscard]] std::size_t passed() const;
    [[nodiscard]] std::size_t failed() const;
    [[nodiscard]] std::size_t skipped() const;
    [[nodiscard]] std::size_t conjectural() const;
};

// lhs <= bound + lhs_err + 1e-9 max(|lhs|, |bound|, 1)
bool dominated(double lhs, double lhs_err, double bound);

// Rows are ordered by config-list position: function, interval, p, q, class,
// theorem (T1, T2, T3, T4, T5, T5_sharp, T6), exponent. A row that fails is
// re-integrated at a tenth of quad_tol before it is reported as failing.
BoundReport run_sweep(const SweepConfig& config);

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view text);

void write_report(const BoundReport& report, ReportFormat format, std::ostream& out);
// Writes to `path`; throws IoError naming the path on failure.
void emit_report(const BoundReport& report, ReportFormat format, const std::string& path);

struct TightestEntry {
    std::string function;
    double a;
    double b;
    double p;
    double q;
    ClassSpec spec;
    TheoremTag theorem;
    std::optional<double> exponent;
    double slack_ratio;
};

struct TightestSummary {
    std::vector<TightestEntry> entries;
    std::size_t omitted_groups = 0;
};

// Per (function, interval, p, q, class) group, the passing row with the
// largest slack ratio. Ties (within 1e-12 relative) resolve in the order
// T4, T5_sharp, T5, T6, T1, T2, T3.
TightestSummary tightest_theorem(const BoundReport& report);

}  // namespace hhineq
