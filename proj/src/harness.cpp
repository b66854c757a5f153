#include "hhineq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>

#include "json.hpp"

#include "hhineq/errors.hpp"

namespace hhineq {

namespace {

enum class Hypothesis { quasi, klass };

// Memoized hypothesis checks and left-hand sides for one sweep.
class SweepCache {
public:
    explicit SweepCache(const SweepConfig& config) : config_(config) {}

    struct Membership {
        std::string status;  // satisfied_on_samples | violated | error
        std::string detail;
    };

    const Membership& membership(std::size_t fi, std::size_t ii, Hypothesis kind, double power,
                                 std::size_t si) {
        // The quasi-convexity check does not depend on the class.
        const std::size_t class_key = kind == Hypothesis::quasi ? 0 : si;
        const auto key = std::make_tuple(fi, ii, static_cast<int>(kind), power, class_key);
        if (auto it = membership_.find(key); it != membership_.end()) return it->second;

        const auto& [name, f] = config_.functions[fi];
        const auto [a, b] = config_.intervals[ii];
        const ExprAst target = power == 0.0 ? f : abs_power(f, power);
        const std::string label = power == 0.0   ? "f"
                                  : power == 1.0 ? "|f|"
                                                 : "|f|^" + format_shortest(power);
        Membership m;
        try {
            MembershipVerdict v;
            if (kind == Hypothesis::quasi) {
                v = check_quasi_convex(target, a, b, config_.sampling);
            } else {
                const double anchors[] = {a, b};
                v = check_membership(target, config_.class_specs[si], b, config_.sampling, anchors);
            }
            m.status = std::string(to_string(v.status));
            if (v.witness) {
                m.detail = "membership violated: " + label +
                           (kind == Hypothesis::quasi ? " not quasi-convex; "
                                                      : " not in class; ") +
                           describe(*v.witness);
            }
        } catch (const Error& e) {
            m.status = "error";
            m.detail = std::string("membership check ") + e.kind() + ": " + e.what();
        }
        return membership_.emplace(key, std::move(m)).first->second;
    }

    struct Lhs {
        std::optional<QuadResult> result;
        std::string error;
    };

    // Left-hand side at the configured tolerance.
    const Lhs& lhs(std::size_t fi, std::size_t ii, std::size_t pi, std::size_t qi) {
        const auto key = std::make_tuple(fi, ii, pi, qi);
        if (auto it = lhs_.find(key); it != lhs_.end()) return it->second;
        Lhs entry;
        try {
            entry.result = weighted_integral(problem(fi, ii, pi, qi), config_.quad_tol);
        } catch (const Error& e) {
            entry.error = std::string(e.kind()) + ": " + e.what();
        }
        return lhs_.emplace(key, std::move(entry)).first->second;
    }

    WeightedProblem problem(std::size_t fi, std::size_t ii, std::size_t pi, std::size_t qi) const {
        const auto [a, b] = config_.intervals[ii];
        return {config_.functions[fi].f, a, b, config_.p_values[pi], config_.q_values[qi]};
    }

private:
    const SweepConfig& config_;
    std::map<std::tuple<std::size_t, std::size_t, int, double, std::size_t>, Membership>
        membership_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, Lhs> lhs_;
};

struct Job {
    TheoremTag tag;
    std::optional<double> exponent;
};

std::vector<Job> theorem_jobs(const SweepConfig& config) {
    std::vector<Job> jobs;
    jobs.push_back({TheoremTag::T1, std::nullopt});
    for (double k : config.k_values) jobs.push_back({TheoremTag::T2, k});
    for (double l : config.l_values) jobs.push_back({TheoremTag::T3, l});
    jobs.push_back({TheoremTag::T4, std::nullopt});
    for (double k : config.k_values) jobs.push_back({TheoremTag::T5, k});
    for (double k : config.k_values) jobs.push_back({TheoremTag::T5_sharp, k});
    for (double l : config.l_values) jobs.push_back({TheoremTag::T6, l});
    return jobs;
}

bool is_class_theorem(TheoremTag tag) {
    return tag == TheoremTag::T4 || tag == TheoremTag::T5 || tag == TheoremTag::T5_sharp ||
           tag == TheoremTag::T6;
}

// Power of |f| whose membership the theorem hypothesizes; 0 stands for f
// itself (T1 assumes f, not |f|, is quasi-convex).
double hypothesis_power(const Job& job) {
    switch (job.tag) {
        case TheoremTag::T2:
        case TheoremTag::T5:
        case TheoremTag::T5_sharp: return HolderExponent(*job.exponent).conjugate();
        case TheoremTag::T3:
        case TheoremTag::T6: return *job.exponent;
        case TheoremTag::T1: return 0.0;
        default: return 1.0;
    }
}

double evaluate_bound(const WeightedProblem& prob, const ClassSpec& spec, const Job& job) {
    switch (job.tag) {
        case TheoremTag::T1: return quasi_bound_basic(prob).value;
        case TheoremTag::T2: return quasi_bound_holder(prob, HolderExponent(*job.exponent)).value;
        case TheoremTag::T3:
            return quasi_bound_power_mean(prob, PowerMeanExponent(*job.exponent)).value;
        case TheoremTag::T4: return kms1_bound(prob, spec).value;
        case TheoremTag::T5: return kms1_bound_holder(prob, spec, HolderExponent(*job.exponent)).value;
        case TheoremTag::T5_sharp:
            return kms1_bound_holder_sharp(prob, spec, HolderExponent(*job.exponent)).value;
        case TheoremTag::T6:
            return kms1_bound_power_mean(prob, spec, PowerMeanExponent(*job.exponent)).value;
        default: throw DomainError("theorem not evaluated by sweeps");
    }
}

int tie_rank(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::T4: return 0;
        case TheoremTag::T5_sharp: return 1;
        case TheoremTag::T5: return 2;
        case TheoremTag::T6: return 3;
        case TheoremTag::T1: return 4;
        case TheoremTag::T2: return 5;
        case TheoremTag::T3: return 6;
        default: return 7;
    }
}

constexpr const char* kColumns[] = {
    "function", "a",   "b",      "p",          "q",     "sense",
    "s",        "alpha", "m",    "theorem",    "exponent", "membership",
    "lhs",      "lhs_err", "bound", "slack_ratio", "pass",  "skip_reason",
};

std::string csv_number(const std::optional<double>& v) {
    if (!v) return {};
    return format_sig(*v, 17);
}

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string skip_reason_text(const BoundRow& row) {
    if (!row.conjectural) return row.skip_reason;
    const std::string tag = "conjectural=true (second-sense class, first-sense formula)";
    return row.skip_reason.empty() ? tag : tag + "; " + row.skip_reason;
}

nlohmann::ordered_json json_number(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

std::size_t BoundReport::passed() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return r.counted() && r.pass; }));
}

std::size_t BoundReport::failed() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return r.failed(); }));
}

std::size_t BoundReport::skipped() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return r.skipped(); }));
}

std::size_t BoundReport::conjectural() const {
    return static_cast<std::size_t>(std::count_if(
        rows.begin(), rows.end(), [](const BoundRow& r) { return r.conjectural; }));
}

bool dominated(double lhs, double lhs_err, double bound) {
    const double scale = std::max({std::fabs(lhs), std::fabs(bound), 1.0});
    return lhs <= bound + lhs_err + 1e-9 * scale;
}

BoundReport run_sweep(const SweepConfig& config) {
    config.validate();
    SweepCache cache(config);
    const auto jobs = theorem_jobs(config);
    BoundReport report;

    for (std::size_t fi = 0; fi < config.functions.size(); ++fi) {
        for (std::size_t ii = 0; ii < config.intervals.size(); ++ii) {
            for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
                for (std::size_t qi = 0; qi < config.q_values.size(); ++qi) {
                    const WeightedProblem prob = cache.problem(fi, ii, pi, qi);
                    for (std::size_t si = 0; si < config.class_specs.size(); ++si) {
                        const ClassSpec& spec = config.class_specs[si];
                        for (const Job& job : jobs) {
                            BoundRow row;
                            row.function = config.functions[fi].name;
                            row.a = prob.a;
                            row.b = prob.b;
                            row.p = prob.p;
                            row.q = prob.q;
                            row.spec = spec;
                            row.theorem = job.tag;
                            row.exponent = job.exponent;
                            const bool klass = is_class_theorem(job.tag);
                            row.conjectural = klass && spec.sense == Sense::second;

                            const auto& m = cache.membership(
                                fi, ii, klass ? Hypothesis::klass : Hypothesis::quasi,
                                hypothesis_power(job), si);
                            row.membership = m.status;
                            if (m.status != "satisfied_on_samples") {
                                row.skip_reason = m.detail;
                                report.rows.push_back(std::move(row));
                                continue;
                            }
                            try {
                                ClassSpec first = spec;
                                first.sense = Sense::first;
                                const double bound = evaluate_bound(prob, first, job);
                                const auto& cached = cache.lhs(fi, ii, pi, qi);
                                if (!cached.result) {
                                    row.skip_reason = cached.error;
                                    report.rows.push_back(std::move(row));
                                    continue;
                                }
                                QuadResult lhs = *cached.result;
                                if (!dominated(lhs.value, lhs.err_estimate, bound)) {
                                    lhs = weighted_integral(prob, config.quad_tol / 10.0);
                                }
                                row.lhs = lhs.value;
                                row.lhs_err = lhs.err_estimate;
                                row.bound = bound;
                                if (bound > 0.0) row.slack_ratio = lhs.value / bound;
                                row.pass = dominated(lhs.value, lhs.err_estimate, bound);
                            } catch (const Error& e) {
                                row.skip_reason = std::string(e.kind()) + ": " + e.what();
                                row.lhs.reset();
                            }
                            report.rows.push_back(std::move(row));
                        }
                    }
                }
            }
        }
    }
    return report;
}

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "json") return ReportFormat::json;
    throw DomainError("unknown report format '" + std::string(text) + "' (expected csv or json)");
}

void write_report(const BoundReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv) {
        for (std::size_t i = 0; i < std::size(kColumns); ++i) {
            out << (i ? "," : "") << kColumns[i];
        }
        out << '\n';
        for (const auto& r : report.rows) {
            out << csv_text(r.function) << ',' << csv_number(r.a) << ',' << csv_number(r.b) << ','
                << csv_number(r.p) << ',' << csv_number(r.q) << ',' << to_string(r.spec.sense)
                << ',' << csv_number(r.spec.s) << ',' << csv_number(r.spec.alpha) << ','
                << csv_number(r.spec.m) << ',' << to_string(r.theorem) << ','
                << csv_number(r.exponent) << ',' << r.membership << ',' << csv_number(r.lhs)
                << ',' << csv_number(r.lhs_err) << ',' << csv_number(r.bound) << ','
                << csv_number(r.slack_ratio) << ',' << (r.pass ? "true" : "false") << ','
                << csv_text(skip_reason_text(r)) << '\n';
        }
        return;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back(nlohmann::ordered_json{
            {"function", r.function},
            {"a", r.a},
            {"b", r.b},
            {"p", r.p},
            {"q", r.q},
            {"sense", std::string(to_string(r.spec.sense))},
            {"s", r.spec.s},
            {"alpha", r.spec.alpha},
            {"m", r.spec.m},
            {"theorem", std::string(to_string(r.theorem))},
            {"exponent", json_number(r.exponent)},
            {"membership", r.membership},
            {"lhs", json_number(r.lhs)},
            {"lhs_err", json_number(r.lhs_err)},
            {"bound", json_number(r.bound)},
            {"slack_ratio", json_number(r.slack_ratio)},
            {"pass", r.pass},
            {"skip_reason", skip_reason_text(r)},
        });
    }
    out << rows.dump(2) << '\n';
}

void emit_report(const BoundReport& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open report file '" + path + "' for writing");
    write_report(report, format, out);
    out.flush();
    if (!out) throw IoError("failed writing report file '" + path + "'");
}

TightestSummary tightest_theorem(const BoundReport& report) {
    using Key = std::tuple<std::string, double, double, double, double, int, double, double, double>;
    std::vector<Key> order;
    std::map<Key, std::optional<TightestEntry>> groups;

    for (const auto& r : report.rows) {
        const Key key{r.function, r.a, r.b, r.p, r.q, static_cast<int>(r.spec.sense),
                      r.spec.s, r.spec.alpha, r.spec.m};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        if (!r.counted() || !r.pass || !r.slack_ratio) continue;

        auto& best = it->second;
        const TightestEntry candidate{r.function, r.a, r.b, r.p, r.q,
                                      r.spec, r.theorem, r.exponent, *r.slack_ratio};
        if (!best) {
            best = candidate;
            continue;
        }
        const double tol = 1e-12 * std::max(std::fabs(best->slack_ratio), std::fabs(candidate.slack_ratio));
        const double diff = candidate.slack_ratio - best->slack_ratio;
        if (diff > tol || (std::fabs(diff) <= tol && tie_rank(candidate.theorem) < tie_rank(best->theorem))) {
            best = candidate;
        }
    }

    TightestSummary summary;
    for (const auto& key : order) {
        if (const auto& best = groups[key]) {
            summary.entries.push_back(*best);
        } else {
            ++summary.omitted_groups;
        }
    }
    return summary;
}

}  // namespace hhineq
