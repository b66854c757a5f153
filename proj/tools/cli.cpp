#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "hhineq/bounds.hpp"
#include "hhineq/convexity.hpp"
#include "hhineq/errors.hpp"
#include "hhineq/harness.hpp"
#include "hhineq/quadrature.hpp"
#include "hhineq/specfun.hpp"

namespace hhineq::cli {

namespace {

using FieldValue = std::variant<std::monostate, double, long long, bool, std::string>;

class Fields {
public:
    Fields& add(std::string key, FieldValue value) {
        items_.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    const auto& items() const { return items_; }

private:
    std::vector<std::pair<std::string, FieldValue>> items_;
};

enum class Format { text, csv, json };

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    return Format::text;
}

std::string render_value(const FieldValue& v, int digits) {
    return std::visit(
        [digits](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, double>) {
                return format_sig(x, digits);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else {
                return x;
            }
        },
        v);
}

void render(const Fields& fields, Format format, std::ostream& out) {
    switch (format) {
        case Format::text:
            for (const auto& [k, v] : fields.items()) out << k << ": " << render_value(v, 12) << '\n';
            return;
        case Format::csv: {
            bool first = true;
            for (const auto& [k, v] : fields.items()) {
                out << (first ? "" : ",") << k;
                first = false;
            }
            out << '\n';
            first = true;
            for (const auto& [k, v] : fields.items()) {
                std::string cell = render_value(v, 17);
                if (cell.find_first_of(",\"\n") != std::string::npos) {
                    std::string quoted = "\"";
                    for (char c : cell) {
                        if (c == '"') quoted += '"';
                        quoted += c;
                    }
                    cell = quoted + '"';
                }
                out << (first ? "" : ",") << cell;
                first = false;
            }
            out << '\n';
            return;
        }
        case Format::json: {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (const auto& [k, v] : fields.items()) {
                std::visit(
                    [&](const auto& x) {
                        using T = std::decay_t<decltype(x)>;
                        if constexpr (std::is_same_v<T, std::monostate>) {
                            obj[k] = nullptr;
                        } else {
                            obj[k] = x;
                        }
                    },
                    v);
            }
            out << obj.dump(2) << '\n';
            return;
        }
    }
}

void add_format(CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
}

WeightedProblem make_problem(const std::string& f, double a, double b, double p, double q) {
    WeightedProblem prob{parse(f), a, b, p, q};
    prob.validate();
    return prob;
}

void add_witness(Fields& fields, const MembershipVerdict& v) {
    fields.add("status", std::string(to_string(v.status)))
        .add("samples_checked", static_cast<long long>(v.samples_checked));
    if (v.witness) {
        fields.add("witness_x", v.witness->x)
            .add("witness_y", v.witness->y)
            .add("witness_mu", v.witness->mu)
            .add("witness_lhs", v.witness->lhs_value)
            .add("witness_rhs", v.witness->rhs_value);
    } else {
        for (const char* k : {"witness_x", "witness_y", "witness_mu", "witness_lhs", "witness_rhs"}) {
            fields.add(k, std::monostate{});
        }
    }
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(token, &used));
        } catch (const std::exception&) {
            throw ConfigError(std::string("malformed ") + what + " '" + text + "'");
        }
    }
    if (v.size() != 2) throw ConfigError(std::string(what) + " takes two comma-separated numbers");
    return {v[0], v[1]};
}

ClassSpec parse_class(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) parts.push_back(token);
    if (parts.size() != 4) throw ConfigError("--class takes sense,s,alpha,m");
    try {
        ClassSpec spec{parse_sense(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                       std::stod(parts[3])};
        spec.validate();
        return spec;
    } catch (const std::invalid_argument&) {
        throw ConfigError("malformed --class '" + text + "'");
    }
}

struct SweepFlags {
    std::string config_path;
    bool standard = false;
    std::vector<std::string> functions;
    std::vector<std::string> intervals;
    std::vector<double> p;
    std::vector<double> q;
    std::vector<std::string> classes;
    std::vector<double> k;
    std::vector<double> l;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> trials;
    std::optional<double> quad_tol;
    std::string out_path;
    bool summary = false;
};

SweepConfig build_sweep_config(const SweepFlags& flags) {
    SweepConfig config;
    if (flags.standard) config = standard_sweep_config();
    if (!flags.config_path.empty()) config = load_sweep_config(flags.config_path);
    if (!flags.functions.empty()) {
        config.functions.clear();
        for (const auto& entry : flags.functions) {
            const auto colon = entry.find(':');
            if (colon == std::string::npos) {
                config.functions.push_back({entry, parse(entry)});
            } else {
                config.functions.push_back({entry.substr(0, colon), parse(entry.substr(colon + 1))});
            }
        }
    }
    if (!flags.intervals.empty()) {
        config.intervals.clear();
        for (const auto& iv : flags.intervals) {
            const auto [a, b] = parse_pair(iv, "--interval");
            config.intervals.push_back({a, b});
        }
    }
    if (!flags.p.empty()) config.p_values = flags.p;
    if (!flags.q.empty()) config.q_values = flags.q;
    if (!flags.classes.empty()) {
        config.class_specs.clear();
        for (const auto& c : flags.classes) config.class_specs.push_back(parse_class(c));
    }
    if (!flags.k.empty()) config.k_values = flags.k;
    if (!flags.l.empty()) config.l_values = flags.l;
    if (flags.seed) config.sampling.rng_seed = *flags.seed;
    if (flags.grid) config.sampling.grid_points_per_axis = *flags.grid;
    if (flags.trials) config.sampling.random_trials = *flags.trials;
    if (flags.quad_tol) config.quad_tol = *flags.quad_tol;
    config.validate();
    return config;
}

void print_sweep_text(const BoundReport& report, bool summary, std::ostream& out) {
    out << "rows: " << report.rows.size() << '\n'
        << "passed: " << report.passed() << '\n'
        << "failed: " << report.failed() << '\n'
        << "skipped: " << report.skipped() << '\n'
        << "conjectural: " << report.conjectural() << '\n';
    for (const auto& r : report.rows) {
        if (!r.failed()) continue;
        out << "FAIL " << r.function << " [" << format_sig(r.a, 12) << ", " << format_sig(r.b, 12)
            << "] p=" << format_sig(r.p, 12) << " q=" << format_sig(r.q, 12)
            << " class=(" << to_string(r.spec.sense) << ", " << format_sig(r.spec.s, 12) << ", "
            << format_sig(r.spec.alpha, 12) << ", " << format_sig(r.spec.m, 12) << ") "
            << to_string(r.theorem)
            << (r.exponent ? " exponent=" + format_sig(*r.exponent, 12) : std::string{})
            << " lhs=" << format_sig(*r.lhs, 12) << " bound=" << format_sig(*r.bound, 12) << '\n';
    }
    if (!summary) return;
    const TightestSummary t = tightest_theorem(report);
    out << "tightest theorem per group (" << t.entries.size() << " groups, " << t.omitted_groups
        << " without passing rows):\n";
    for (const auto& e : t.entries) {
        out << "  " << e.function << " [" << format_sig(e.a, 12) << ", " << format_sig(e.b, 12)
            << "] p=" << format_sig(e.p, 12) << " q=" << format_sig(e.q, 12) << " class=("
            << to_string(e.spec.sense) << ", " << format_sig(e.spec.s, 12) << ", "
            << format_sig(e.spec.alpha, 12) << ", " << format_sig(e.spec.m, 12) << ") -> "
            << to_string(e.theorem)
            << (e.exponent ? " exponent=" + format_sig(*e.exponent, 12) : std::string{})
            << " slack_ratio=" << format_sig(e.slack_ratio, 12) << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Machine-checks Hermite-Hadamard-type integral bounds", "hhverify"};
    app.require_subcommand(1, 1);

    int exit_code = kExitOk;
    std::function<void()> action;

    // beta
    double beta_x = 0, beta_y = 0;
    std::string beta_format = "text";
    auto* beta_cmd = app.add_subcommand("beta", "Euler Beta function B(X, Y)");
    beta_cmd->add_option("X", beta_x)->required();
    beta_cmd->add_option("Y", beta_y)->required();
    add_format(beta_cmd, beta_format);
    beta_cmd->callback([&] {
        action = [&] {
            const double v = beta(beta_x, beta_y);
            if (parse_format(beta_format) == Format::text) {
                out << format_shortest(v) << '\n';
                return;
            }
            render(Fields{}.add("x", beta_x).add("y", beta_y).add("beta", v),
                   parse_format(beta_format), out);
        };
    });

    // integrate
    std::string int_f;
    double int_a = 0, int_b = 1, int_tol = kDefaultQuadTol;
    std::optional<double> int_p, int_q;
    bool int_lemma = false;
    std::string int_format = "text";
    auto* int_cmd = app.add_subcommand(
        "integrate", "Adaptive Gauss-Kronrod integral of f, or of (x-a)^p (b-x)^q f with --p/--q");
    int_cmd->add_option("--f", int_f, "Integrand expression")->required();
    int_cmd->add_option("--a", int_a, "Lower limit")->required();
    int_cmd->add_option("--b", int_b, "Upper limit")->required();
    int_cmd->add_option("--p", int_p, "Weight exponent at a");
    int_cmd->add_option("--q", int_q, "Weight exponent at b");
    int_cmd->add_flag("--lemma-rhs", int_lemma,
                      "Evaluate the weighted integral through the substitution x = ta + (1-t)b");
    int_cmd->add_option("--tol", int_tol, "Absolute tolerance")->capture_default_str();
    add_format(int_cmd, int_format);
    int_cmd->callback([&] {
        action = [&] {
            QuadResult r;
            if (int_p || int_q || int_lemma) {
                if (!int_p || !int_q) throw ConfigError("weighted integration needs both --p and --q");
                const auto prob = make_problem(int_f, int_a, int_b, *int_p, *int_q);
                r = int_lemma ? lemma1_rhs(prob, int_tol) : weighted_integral(prob, int_tol);
            } else {
                const ExprAst f = parse(int_f);
                r = integrate([&](double x) { return f(x); }, int_a, int_b, int_tol);
            }
            render(Fields{}
                       .add("value", r.value)
                       .add("err_estimate", r.err_estimate)
                       .add("evals", static_cast<long long>(r.evals)),
                   parse_format(int_format), out);
        };
    });

    // check-class
    std::string cc_f, cc_kind = "generalized", cc_sense = "first", cc_format = "text";
    double cc_s = 1, cc_alpha = 1, cc_m = 1;
    std::vector<double> cc_range;
    SamplingSpec cc_sampling;
    auto* cc_cmd = app.add_subcommand("check-class", "Sampling-based convexity class membership");
    cc_cmd->add_option("--f", cc_f, "Function expression")->required();
    cc_cmd->add_option("--kind", cc_kind, "generalized (s-(alpha,m) class), quasi or convex")
        ->check(CLI::IsMember({"generalized", "quasi", "convex"}))
        ->capture_default_str();
    cc_cmd->add_option("--sense", cc_sense, "first or second")
        ->check(CLI::IsMember({"first", "second"}))
        ->capture_default_str();
    cc_cmd->add_option("--s", cc_s)->capture_default_str();
    cc_cmd->add_option("--alpha", cc_alpha)->capture_default_str();
    cc_cmd->add_option("--m", cc_m)->capture_default_str();
    cc_cmd->add_option("--range", cc_range, "LO,HI (LO must be 0 for --kind generalized)")
        ->required()
        ->expected(2)
        ->delimiter(',');
    cc_cmd->add_option("--seed", cc_sampling.rng_seed)->capture_default_str();
    cc_cmd->add_option("--grid", cc_sampling.grid_points_per_axis)->capture_default_str();
    cc_cmd->add_option("--trials", cc_sampling.random_trials)->capture_default_str();
    cc_cmd->add_option("--violation-tol", cc_sampling.violation_tolerance)->capture_default_str();
    add_format(cc_cmd, cc_format);
    cc_cmd->callback([&] {
        action = [&] {
            const ExprAst f = parse(cc_f);
            const double lo = cc_range[0];
            const double hi = cc_range[1];
            MembershipVerdict v;
            if (cc_kind == "quasi") {
                v = check_quasi_convex(f, lo, hi, cc_sampling);
            } else if (cc_kind == "convex") {
                v = check_convex(f, lo, hi, cc_sampling);
            } else {
                if (lo != 0.0) throw DomainError("generalized classes are checked on [0, HI]");
                v = check_membership(f, {parse_sense(cc_sense), cc_s, cc_alpha, cc_m}, hi,
                                     cc_sampling);
            }
            Fields fields;
            add_witness(fields, v);
            render(fields, parse_format(cc_format), out);
            if (!v.satisfied()) exit_code = kExitVerificationFailed;
        };
    });

    // verify-lemma
    std::string vl_f, vl_format = "text";
    double vl_a = 0, vl_b = 1, vl_p = 1, vl_q = 1, vl_tol = kDefaultQuadTol;
    auto* vl_cmd = app.add_subcommand(
        "verify-lemma", "Check the weighted integral against its [0,1] substitution form");
    vl_cmd->add_option("--f", vl_f)->required();
    vl_cmd->add_option("--a", vl_a)->required();
    vl_cmd->add_option("--b", vl_b)->required();
    vl_cmd->add_option("--p", vl_p)->required();
    vl_cmd->add_option("--q", vl_q)->required();
    vl_cmd->add_option("--tol", vl_tol)->capture_default_str();
    add_format(vl_cmd, vl_format);
    vl_cmd->callback([&] {
        action = [&] {
            const auto r = verify_lemma1(make_problem(vl_f, vl_a, vl_b, vl_p, vl_q), vl_tol);
            render(Fields{}
                       .add("lhs", r.lhs.value)
                       .add("lhs_err", r.lhs.err_estimate)
                       .add("rhs", r.rhs.value)
                       .add("rhs_err", r.rhs.err_estimate)
                       .add("abs_diff", r.abs_diff)
                       .add("pass", r.pass),
                   parse_format(vl_format), out);
            if (!r.pass) exit_code = kExitVerificationFailed;
        };
    });

    // hh, and the shared Hermite-Hadamard renderer used by `bound --theorem hh`
    std::string hh_f, hh_format = "text";
    double hh_a = 0, hh_b = 1, hh_tol = kDefaultQuadTol;
    auto run_hh = [&](const std::string& f, double a, double b, double tol, Format format) {
        const auto r = hh_check(parse(f), a, b, tol);
        render(Fields{}
                   .add("midpoint", r.midpoint)
                   .add("mean_integral", r.mean_integral)
                   .add("endpoint_avg", r.endpoint_avg)
                   .add("slack", r.slack)
                   .add("left_pass", r.left_pass)
                   .add("right_pass", r.right_pass)
                   .add("left_reversed", r.left_reversed)
                   .add("right_reversed", r.right_reversed),
               format, out);
        if (!r.left_pass || !r.right_pass) exit_code = kExitVerificationFailed;
    };
    auto* hh_cmd = app.add_subcommand("hh", "Two-sided Hermite-Hadamard check on [a, b]");
    hh_cmd->add_option("--f", hh_f)->required();
    hh_cmd->add_option("--a", hh_a)->required();
    hh_cmd->add_option("--b", hh_b)->required();
    hh_cmd->add_option("--tol", hh_tol)->capture_default_str();
    add_format(hh_cmd, hh_format);
    hh_cmd->callback([&] {
        action = [&] { run_hh(hh_f, hh_a, hh_b, hh_tol, parse_format(hh_format)); };
    });

    // bound
    std::string bd_theorem, bd_f, bd_sense = "first", bd_format = "text";
    double bd_a = 0, bd_b = 1, bd_p = 1, bd_q = 1, bd_s = 1, bd_alpha = 1, bd_m = 1;
    double bd_tol = kDefaultQuadTol;
    std::optional<double> bd_k, bd_l;
    auto* bd_cmd = app.add_subcommand("bound", "Evaluate one closed-form bound against the integral");
    bd_cmd->add_option("--theorem", bd_theorem)
        ->required()
        ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "t5", "t5sharp", "t6", "hh"}));
    bd_cmd->add_option("--f", bd_f)->required();
    bd_cmd->add_option("--a", bd_a)->required();
    bd_cmd->add_option("--b", bd_b)->required();
    bd_cmd->add_option("--p", bd_p)->capture_default_str();
    bd_cmd->add_option("--q", bd_q)->capture_default_str();
    bd_cmd->add_option("--sense", bd_sense)->check(CLI::IsMember({"first"}))->capture_default_str();
    bd_cmd->add_option("--s", bd_s)->capture_default_str();
    bd_cmd->add_option("--alpha", bd_alpha)->capture_default_str();
    bd_cmd->add_option("--m", bd_m)->capture_default_str();
    bd_cmd->add_option("--k", bd_k, "Hölder exponent (t2, t5, t5sharp)");
    bd_cmd->add_option("--l", bd_l, "Power-mean exponent (t3, t6)");
    bd_cmd->add_option("--tol", bd_tol)->capture_default_str();
    add_format(bd_cmd, bd_format);
    bd_cmd->callback([&] {
        action = [&] {
            if (bd_theorem == "hh") {
                run_hh(bd_f, bd_a, bd_b, bd_tol, parse_format(bd_format));
                return;
            }
            const auto prob = make_problem(bd_f, bd_a, bd_b, bd_p, bd_q);
            const ClassSpec spec{parse_sense(bd_sense), bd_s, bd_alpha, bd_m};
            auto need = [](const std::optional<double>& v, const char* flag) {
                if (!v) throw ConfigError(std::string("this theorem requires ") + flag);
                return *v;
            };
            const TheoremTag tag = parse_theorem(bd_theorem);
            BoundValue bv{};
            switch (tag) {
                case TheoremTag::T1: bv = quasi_bound_basic(prob); break;
                case TheoremTag::T2: bv = quasi_bound_holder(prob, HolderExponent(need(bd_k, "--k"))); break;
                case TheoremTag::T3:
                    bv = quasi_bound_power_mean(prob, PowerMeanExponent(need(bd_l, "--l")));
                    break;
                case TheoremTag::T4: bv = kms1_bound(prob, spec); break;
                case TheoremTag::T5:
                    bv = kms1_bound_holder(prob, spec, HolderExponent(need(bd_k, "--k")));
                    break;
                case TheoremTag::T5_sharp:
                    bv = kms1_bound_holder_sharp(prob, spec, HolderExponent(need(bd_k, "--k")));
                    break;
                case TheoremTag::T6:
                    bv = kms1_bound_power_mean(prob, spec, PowerMeanExponent(need(bd_l, "--l")));
                    break;
                default: throw DomainError("unsupported theorem");
            }
            const QuadResult lhs = weighted_integral(prob, bd_tol);
            const bool pass = dominated(lhs.value, lhs.err_estimate, bv.value);
            Fields fields;
            fields.add("theorem", std::string(to_string(tag)))
                .add("bound", bv.value)
                .add("lhs", lhs.value)
                .add("lhs_err", lhs.err_estimate);
            if (bv.value > 0.0) {
                fields.add("slack_ratio", lhs.value / bv.value);
            } else {
                fields.add("slack_ratio", std::monostate{});
            }
            fields.add("pass", pass);
            render(fields, parse_format(bd_format), out);
            if (!pass) exit_code = kExitVerificationFailed;
        };
    });

    // sweep
    SweepFlags sw;
    std::string sw_format = "text";
    auto* sw_cmd = app.add_subcommand("sweep", "Run a verification campaign over a parameter grid");
    sw_cmd->add_option("--config", sw.config_path, "Sweep configuration file");
    sw_cmd->add_flag("--standard", sw.standard, "Start from the built-in standard sweep");
    sw_cmd->add_option("--f", sw.functions, "Function, optionally 'name:expr' (repeatable)");
    sw_cmd->add_option("--interval", sw.intervals, "Interval 'a,b' (repeatable)");
    sw_cmd->add_option("--p", sw.p, "Comma-separated p values")->delimiter(',');
    sw_cmd->add_option("--q", sw.q, "Comma-separated q values")->delimiter(',');
    sw_cmd->add_option("--class", sw.classes, "Class 'sense,s,alpha,m' (repeatable)");
    sw_cmd->add_option("--k", sw.k, "Comma-separated Hölder exponents")->delimiter(',');
    sw_cmd->add_option("--l", sw.l, "Comma-separated power-mean exponents")->delimiter(',');
    sw_cmd->add_option("--seed", sw.seed);
    sw_cmd->add_option("--grid", sw.grid);
    sw_cmd->add_option("--trials", sw.trials);
    sw_cmd->add_option("--quad-tol", sw.quad_tol);
    sw_cmd->add_option("--out", sw.out_path, "Write the csv/json report here instead of stdout");
    sw_cmd->add_flag("--summary", sw.summary, "Also print the tightest theorem per group");
    add_format(sw_cmd, sw_format);
    sw_cmd->callback([&] {
        action = [&] {
            const SweepConfig config = build_sweep_config(sw);
            const BoundReport report = run_sweep(config);
            const Format format = parse_format(sw_format);
            if (format == Format::text) {
                if (!sw.out_path.empty()) throw ConfigError("--out requires --format csv or json");
                print_sweep_text(report, sw.summary, out);
            } else {
                const ReportFormat rf = format == Format::csv ? ReportFormat::csv : ReportFormat::json;
                if (sw.out_path.empty()) {
                    write_report(report, rf, out);
                } else {
                    emit_report(report, rf, sw.out_path);
                    print_sweep_text(report, sw.summary, out);
                }
            }
            if (report.failed() > 0) exit_code = kExitVerificationFailed;
        };
    });

    std::vector<const char*> argv{"hhverify"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.get_name() << ": " << e.what() << '\n';
        return kExitError;
    }

    try {
        if (action) action();
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return exit_code;
}

}  // namespace hhineq::cli
