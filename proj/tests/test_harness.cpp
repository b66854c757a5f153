#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "hhineq/harness.hpp"

using namespace hhineq;

namespace {

SweepConfig small_config(std::vector<std::string> functions) {
    SweepConfig c;
    for (const auto& src : functions) c.functions.push_back({src, parse(src)});
    c.intervals = {{0, 1}};
    c.p_values = {1};
    c.q_values = {1};
    c.class_specs = {{Sense::first, 1, 1, 1}};
    c.k_values = {2};
    c.l_values = {2};
    return c;
}

std::string to_csv(const BoundReport& r) {
    std::ostringstream out;
    write_report(r, ReportFormat::csv, out);
    return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

double power_for(const BoundRow& row) {
    switch (row.theorem) {
        case TheoremTag::T1: return 0;
        case TheoremTag::T2:
        case TheoremTag::T5:
        case TheoremTag::T5_sharp: return *row.exponent / (*row.exponent - 1);
        case TheoremTag::T3:
        case TheoremTag::T6: return *row.exponent;
        default: return 1;
    }
}

// Re-checks a skipped row's witness with the class formulas written out here.
void reverify_skip(const BoundRow& row, const ExprAst& f, double tol) {
    const auto at = row.skip_reason.find("witness ");
    REQUIRE(at != std::string::npos);
    double x = 0, y = 0, mu = 0;
    REQUIRE(std::sscanf(row.skip_reason.c_str() + at, "witness x=%lf y=%lf mu=%lf", &x, &y, &mu) == 3);
    const double power = power_for(row);
    const auto g = [&](double t) {
        const double v = f(t);
        return power == 0 ? v : std::pow(std::fabs(v), power);
    };
    const double lhs = g(mu * x + (1 - mu) * y);
    double rhs = 0;
    if (row.theorem == TheoremTag::T1 || row.theorem == TheoremTag::T2 || row.theorem == TheoremTag::T3) {
        rhs = std::max(g(x), g(y));
        CHECK(x >= row.a);
        CHECK(y <= row.b);
    } else {
        const auto& c = row.spec;
        const double w = std::pow(mu, c.alpha * c.s);
        rhs = w * g(x) + c.m * (1 - w) * g(y / c.m);
    }
    CHECK(lhs > rhs + tol);
}

}  // namespace

TEST_CASE("saturating config passes everywhere") {
    const auto report = run_sweep(small_config({"x", "x^2", "1"}));
    CHECK(report.rows.size() == 3 * 7);
    CHECK(report.failed() == 0);
    CHECK(report.skipped() == 0);
    CHECK(report.passed() == report.rows.size());
    for (const auto& r : report.rows) {
        if (r.function == "1" && (r.theorem == TheoremTag::T1 || r.theorem == TheoremTag::T4 ||
                                  r.theorem == TheoremTag::T6)) {
            REQUIRE(r.slack_ratio);
            CHECK(std::fabs(*r.slack_ratio - 1.0) <= 1e-9);
        }
        if (r.function == "x" && r.theorem == TheoremTag::T4) {
            CHECK(std::fabs(*r.slack_ratio - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("concave function rows are skipped with a witness") {
    const auto config = small_config({"sqrt(x)"});
    const auto report = run_sweep(config);
    CHECK(report.failed() == 0);
    bool saw_t4 = false;
    for (const auto& r : report.rows) {
        if (r.theorem == TheoremTag::T4) {
            saw_t4 = true;
            CHECK(r.skipped());
            CHECK(r.membership == "violated");
            CHECK(r.skip_reason.find("witness x=") != std::string::npos);
            reverify_skip(r, config.functions[0].f, config.sampling.violation_tolerance);
        }
    }
    CHECK(saw_t4);
}

TEST_CASE("empty lists are rejected before any row runs") {
    const auto base = small_config({"x"});
    auto c = base;
    c.l_values.clear();
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c = base;
    c.functions.clear();
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c = base;
    c.intervals.clear();
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c = base;
    c.k_values = {1.0};
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c = base;
    c.intervals = {{1, 0.5}};
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c = base;
    c.class_specs = {{Sense::first, 2, 1, 1}};
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    c = base;
    c.p_values = {0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("CSV and JSON schema") {
    auto report = run_sweep(small_config({"x"}));
    report.rows.resize(3);
    const auto lines = lines_of(to_csv(report));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "function,a,b,p,q,sense,s,alpha,m,theorem,exponent,membership,lhs,lhs_err,bound,"
          "slack_ratio,pass,skip_reason");
    CHECK(lines[1].rfind("x,0,1,1,1,first,1,1,1,T1,,satisfied_on_samples,", 0) == 0);
    CHECK(lines[2].rfind("x,0,1,1,1,first,1,1,1,T2,2,", 0) == 0);
    CHECK(lines[3].rfind("x,0,1,1,1,first,1,1,1,T3,2,", 0) == 0);

    std::ostringstream js;
    write_report(report, ReportFormat::json, js);
    const auto doc = nlohmann::ordered_json::parse(js.str());
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 3);
    const auto header = lines[0];
    std::string keys;
    for (const auto& [k, v] : doc[0].items()) keys += (keys.empty() ? "" : ",") + k;
    CHECK(keys == header);
    CHECK(doc[0]["exponent"].is_null());
    CHECK(doc[1]["exponent"] == 2.0);
    CHECK(doc[0]["theorem"] == "T1");
    CHECK(doc[0]["lhs"].get<double>() == *report.rows[0].lhs);
}

TEST_CASE("CSV numbers carry 17 significant digits") {
    auto report = run_sweep(small_config({"x"}));
    const auto lines = lines_of(to_csv(report));
    // T2 bound is sqrt(1/30), not a short decimal.
    std::istringstream row(lines[2]);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() >= 15);
    CHECK(std::stod(cells[14]) == *report.rows[1].bound);
}

TEST_CASE("text cells are quoted when needed") {
    SweepConfig c = small_config({"x"});
    c.functions[0].name = "a, \"quoted\" name";
    const auto csv = to_csv(run_sweep(c));
    CHECK(csv.find("\"a, \"\"quoted\"\" name\",0,1") != std::string::npos);
}

TEST_CASE("rows follow the configuration axes") {
    SweepConfig c = small_config({"x", "x^2"});
    c.intervals = {{0, 1}, {1, 2}};
    c.p_values = {1, 2};
    c.l_values = {1, 3};
    const auto report = run_sweep(c);
    REQUIRE(report.rows.size() == 2 * 2 * 2 * 1 * 1 * 9);
    CHECK(report.rows.front().function == "x");
    CHECK(report.rows.back().function == "x^2");
    const TheoremTag order[] = {TheoremTag::T1, TheoremTag::T2, TheoremTag::T3, TheoremTag::T3,
                                TheoremTag::T4, TheoremTag::T5, TheoremTag::T5_sharp,
                                TheoremTag::T6, TheoremTag::T6};
    for (std::size_t i = 0; i < 9; ++i) CHECK(report.rows[i].theorem == order[i]);
    CHECK(*report.rows[2].exponent == 1.0);
    CHECK(*report.rows[3].exponent == 3.0);
    CHECK(report.rows[9].p == 2.0);
    CHECK(report.rows[18].a == 1.0);
}

TEST_CASE("identical configs give identical reports") {
    SweepConfig c = small_config({"x", "exp(x)", "sqrt(x)", "abs(x-0.3)"});
    c.sampling.rng_seed = 12345;
    c.class_specs.push_back({Sense::first, 0.5, 0.5, 0.5});
    const auto a = run_sweep(c);
    const auto b = run_sweep(c);
    CHECK(to_csv(a) == to_csv(b));
    std::ostringstream ja, jb;
    write_report(a, ReportFormat::json, ja);
    write_report(b, ReportFormat::json, jb);
    CHECK(ja.str() == jb.str());
}

TEST_CASE("every skipped membership row re-verifies") {
    SweepConfig c;
    for (const char* src : {"sqrt(x)", "sin(3*x) + 1", "x^0.25", "abs(x - 0.7) + 0.2*sqrt(x)", "x^2"}) {
        c.functions.push_back({src, parse(src)});
    }
    c.intervals = {{0, 1}, {0.5, 2}};
    c.p_values = {1, 2};
    c.q_values = {0.5};
    c.class_specs = {{Sense::first, 1, 1, 1}, {Sense::first, 0.5, 0.5, 0.5}};
    c.k_values = {1.5, 3};
    c.l_values = {1, 2};
    const auto report = run_sweep(c);
    std::map<std::string, ExprAst> fs;
    for (const auto& nf : c.functions) fs.emplace(nf.name, nf.f);
    std::size_t checked = 0;
    for (const auto& r : report.rows) {
        if (r.membership != "violated") continue;
        CAPTURE(r.function);
        CAPTURE(r.skip_reason);
        reverify_skip(r, fs.at(r.function), c.sampling.violation_tolerance);
        ++checked;
    }
    CHECK(checked > 50);
    CHECK(report.failed() == 0);
}

TEST_CASE("second-sense classes produce conjectural rows") {
    SweepConfig c = small_config({"x^2"});
    c.class_specs = {{Sense::second, 0.5, 1, 1}};
    const auto report = run_sweep(c);
    std::size_t conj = 0;
    for (const auto& r : report.rows) {
        const bool klass = r.theorem == TheoremTag::T4 || r.theorem == TheoremTag::T5 ||
                           r.theorem == TheoremTag::T5_sharp || r.theorem == TheoremTag::T6;
        CHECK(r.conjectural == klass);
        if (r.conjectural) {
            ++conj;
            CHECK_FALSE(r.counted());
        }
    }
    CHECK(conj == 4);
    CHECK(report.conjectural() == 4);
    CHECK(report.passed() == 3);
    const auto lines = lines_of(to_csv(report));
    CHECK(lines[4].find(",\"conjectural=true (second-sense class, first-sense formula)") != std::string::npos);
    CHECK(lines[1].find("conjectural") == std::string::npos);
}

TEST_CASE("fail rows survive a tighter standalone re-evaluation") {
    // The hump sits between the 3-point lattice nodes, so the sampled quasi
    // check passes while the integral exceeds the T1 bound.
    SweepConfig c = small_config({"1 + 50*exp(-2000*(x-0.62)^2)"});
    c.sampling.grid_points_per_axis = 3;
    c.sampling.random_trials = 0;
    const auto report = run_sweep(c);
    REQUIRE(report.failed() > 0);
    for (const auto& r : report.rows) {
        if (!r.failed()) continue;
        const WeightedProblem prob{c.functions[0].f, r.a, r.b, r.p, r.q};
        const auto lhs = weighted_integral(prob, c.quad_tol / 10);
        double bound = 0;
        switch (r.theorem) {
            case TheoremTag::T1: bound = quasi_bound_basic(prob).value; break;
            case TheoremTag::T2: bound = quasi_bound_holder(prob, HolderExponent(*r.exponent)).value; break;
            case TheoremTag::T3: bound = quasi_bound_power_mean(prob, PowerMeanExponent(*r.exponent)).value; break;
            case TheoremTag::T4: bound = kms1_bound(prob, r.spec).value; break;
            case TheoremTag::T5: bound = kms1_bound_holder(prob, r.spec, HolderExponent(*r.exponent)).value; break;
            case TheoremTag::T5_sharp: bound = kms1_bound_holder_sharp(prob, r.spec, HolderExponent(*r.exponent)).value; break;
            default: bound = kms1_bound_power_mean(prob, r.spec, PowerMeanExponent(*r.exponent)).value;
        }
        CHECK(bound == *r.bound);
        CHECK_FALSE(dominated(lhs.value, lhs.err_estimate, bound));
    }
}

TEST_CASE("row errors are captured, not thrown") {
    SweepConfig c = small_config({"ln(x)"});
    BoundReport report;
    CHECK_NOTHROW(report = run_sweep(c));
    CHECK(report.rows.size() == 7);
    for (const auto& r : report.rows) {
        CHECK(r.skipped());
        CHECK(r.skip_reason.find("EvalError") != std::string::npos);
    }
}

TEST_CASE("dominated") {
    CHECK(dominated(1.0, 0.0, 1.0));
    CHECK(dominated(1.0 + 5e-10, 0.0, 1.0));
    CHECK_FALSE(dominated(1.0 + 2e-9, 0.0, 1.0));
    CHECK(dominated(1.0 + 2e-9, 1e-9, 1.0));
    CHECK(dominated(1000.0 + 5e-7, 0.0, 1000.0));
}

TEST_CASE("tightest_theorem") {
    SweepConfig c = small_config({"x"});
    c.l_values = {1};
    auto summary = tightest_theorem(run_sweep(c));
    REQUIRE(summary.entries.size() == 1);
    CHECK(summary.entries[0].theorem == TheoremTag::T4);
    CHECK(summary.omitted_groups == 0);

    BoundRow base;
    base.function = "g";
    base.b = 1;
    base.p = base.q = 1;
    base.membership = "satisfied_on_samples";
    base.lhs = 0.5;
    base.lhs_err = 0;
    base.bound = 1;
    base.slack_ratio = 0.5;
    base.pass = true;

    BoundReport single;
    single.rows = {base};
    single.rows[0].theorem = TheoremTag::T2;
    summary = tightest_theorem(single);
    REQUIRE(summary.entries.size() == 1);
    CHECK(summary.entries[0].theorem == TheoremTag::T2);

    BoundReport tie;
    tie.rows = {base, base};
    tie.rows[0].theorem = TheoremTag::T3;
    tie.rows[0].exponent = 1.0;
    tie.rows[1].theorem = TheoremTag::T1;
    summary = tightest_theorem(tie);
    REQUIRE(summary.entries.size() == 1);
    CHECK(summary.entries[0].theorem == TheoremTag::T1);

    BoundReport omitted;
    omitted.rows = {base, base};
    omitted.rows[1].function = "h";
    omitted.rows[1].pass = false;
    summary = tightest_theorem(omitted);
    CHECK(summary.entries.size() == 1);
    CHECK(summary.omitted_groups == 1);
}

TEST_CASE("config text parsing") {
    const auto c = parse_sweep_config(R"(# demo
function = lin: x
function = exp(x)   # unnamed
interval = 0, 1
interval = 1, 3
p = 0.5, 1
q = 2
k = 1.5, 5
l = 1
class = first, 0.5, 1, 0.5
class = second, 1, 1, 1
grid = 5
trials = 10
seed = 18446744073709551615
violation_tolerance = 1e-8
quad_tol = 1e-9
)");
    REQUIRE(c.functions.size() == 2);
    CHECK(c.functions[0].name == "lin");
    CHECK(c.functions[1].name == "exp(x)");
    CHECK(c.intervals.size() == 2);
    CHECK(c.intervals[1].b == 3.0);
    CHECK(c.p_values == std::vector<double>{0.5, 1});
    CHECK(c.k_values == std::vector<double>{1.5, 5});
    CHECK(c.class_specs[0] == ClassSpec{Sense::first, 0.5, 1, 0.5});
    CHECK(c.class_specs[1].sense == Sense::second);
    CHECK(c.sampling.grid_points_per_axis == 5);
    CHECK(c.sampling.random_trials == 10);
    CHECK(c.sampling.rng_seed == 18446744073709551615ULL);
    CHECK(c.sampling.violation_tolerance == 1e-8);
    CHECK(c.quad_tol == 1e-9);
    CHECK_NOTHROW(c.validate());

    try {
        (void)parse_sweep_config("p = 1\nq = 1\nbogus = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_sweep_config("interval = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_config("p = one\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_config("function = x^\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_config("class = third, 1, 1, 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_config("just words\n"), ConfigError);
    CHECK_THROWS_AS(run_sweep(parse_sweep_config("function = x\n")), ConfigError);
}

TEST_CASE("standard config matches the documented grid") {
    const auto c = standard_sweep_config();
    CHECK(c.functions.size() == 6);
    CHECK(c.intervals.size() == 3);
    CHECK(c.p_values.size() == 4);
    CHECK(c.class_specs.size() == 12);
    CHECK(c.k_values == std::vector<double>{1.5, 2, 5});
    CHECK(c.l_values == std::vector<double>{1, 2, 4});
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("report files") {
    const auto report = run_sweep(small_config({"x"}));
    const auto dir = std::filesystem::temp_directory_path() / "hhineq_test_harness";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "r.csv").string();
    emit_report(report, ReportFormat::csv, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == to_csv(report));
    std::filesystem::remove_all(dir);

    try {
        emit_report(report, ReportFormat::csv, "/nonexistent-dir/x/r.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/x/r.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(load_sweep_config("/nonexistent-dir/c.txt"), IoError);
    CHECK(parse_report_format("json") == ReportFormat::json);
    CHECK_THROWS_AS(parse_report_format("xml"), DomainError);
}
