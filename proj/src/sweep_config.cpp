#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hhineq/errors.hpp"
#include "hhineq/harness.hpp"

namespace hhineq {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_values(std::string_view s) {
    std::vector<std::string> out;
    std::string token;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) out.push_back(std::move(token));
            token.clear();
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

class LineParser {
public:
    explicit LineParser(std::size_t line) : line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("line " + std::to_string(line_) + ": " + msg);
    }

    double number(const std::string& token) const {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            fail("expected a number, got '" + token + "'");
        }
        if (used != token.size() || !std::isfinite(v)) fail("expected a number, got '" + token + "'");
        return v;
    }

    std::vector<double> numbers(std::string_view value) const {
        std::vector<double> out;
        for (const auto& t : split_values(value)) out.push_back(number(t));
        if (out.empty()) fail("expected at least one number");
        return out;
    }

    std::uint64_t count(std::string_view value) const {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            fail("expected a non-negative integer, got '" + std::string(value) + "'");
        }
        return v;
    }

private:
    std::size_t line_;
};

}  // namespace

void SweepConfig::validate() const {
    auto nonempty = [](bool empty, const char* what) {
        if (empty) throw ConfigError(std::string("sweep config: ") + what + " list is empty");
    };
    nonempty(functions.empty(), "functions");
    nonempty(intervals.empty(), "interval");
    nonempty(p_values.empty(), "p");
    nonempty(q_values.empty(), "q");
    nonempty(class_specs.empty(), "class");
    nonempty(k_values.empty(), "k");
    nonempty(l_values.empty(), "l");
    for (const auto& iv : intervals) {
        if (!(iv.a >= 0.0) || !(iv.a < iv.b) || !std::isfinite(iv.b)) {
            throw ConfigError("sweep config: intervals must satisfy 0 <= a < b");
        }
    }
    for (double p : p_values) {
        if (!(p > 0.0)) throw ConfigError("sweep config: p values must be positive");
    }
    for (double q : q_values) {
        if (!(q > 0.0)) throw ConfigError("sweep config: q values must be positive");
    }
    for (double k : k_values) {
        if (!(k > 1.0)) throw ConfigError("sweep config: k values must exceed 1");
    }
    for (double l : l_values) {
        if (!(l >= 1.0)) throw ConfigError("sweep config: l values must be at least 1");
    }
    if (!(quad_tol > 0.0)) throw ConfigError("sweep config: quad_tol must be positive");
    try {
        for (const auto& spec : class_specs) spec.validate();
        sampling.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
}

SweepConfig standard_sweep_config() {
    SweepConfig c;
    for (const char* src : {"x", "x^2", "x^3", "exp(x)", "abs(x-0.5)", "x^0.5"}) {
        c.functions.push_back({src, parse(src)});
    }
    c.intervals = {{0.0, 1.0}, {0.0, 2.0}, {1.0, 3.0}};
    c.p_values = {0.5, 1.0, 2.0, 3.0};
    c.q_values = {0.5, 1.0, 2.0, 3.0};
    for (double s : {0.25, 0.5, 1.0}) {
        for (double alpha : {0.5, 1.0}) {
            for (double m : {0.5, 1.0}) c.class_specs.push_back({Sense::first, s, alpha, m});
        }
    }
    c.k_values = {1.5, 2.0, 5.0};
    c.l_values = {1.0, 2.0, 4.0};
    return c;
}

SweepConfig parse_sweep_config(std::string_view text) {
    SweepConfig c;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const LineParser lp(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) lp.fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "function") {
            std::string_view name = value;
            std::string_view source = value;
            if (const auto colon = value.find(':'); colon != std::string_view::npos) {
                name = trim(value.substr(0, colon));
                source = trim(value.substr(colon + 1));
            }
            try {
                c.functions.push_back({std::string(name), parse(source)});
            } catch (const ParseError& e) {
                lp.fail(std::string("ParseError ") + e.what());
            }
        } else if (key == "interval") {
            const auto v = lp.numbers(value);
            if (v.size() != 2) lp.fail("interval takes two numbers: a, b");
            c.intervals.push_back({v[0], v[1]});
        } else if (key == "p") {
            c.p_values = lp.numbers(value);
        } else if (key == "q") {
            c.q_values = lp.numbers(value);
        } else if (key == "k") {
            c.k_values = lp.numbers(value);
        } else if (key == "l") {
            c.l_values = lp.numbers(value);
        } else if (key == "class") {
            const auto parts = split_values(value);
            if (parts.size() != 4) lp.fail("class takes: sense, s, alpha, m");
            try {
                c.class_specs.push_back({parse_sense(parts[0]), lp.number(parts[1]),
                                         lp.number(parts[2]), lp.number(parts[3])});
            } catch (const DomainError& e) {
                lp.fail(e.what());
            }
        } else if (key == "grid") {
            c.sampling.grid_points_per_axis = lp.count(value);
        } else if (key == "trials") {
            c.sampling.random_trials = lp.count(value);
        } else if (key == "seed") {
            c.sampling.rng_seed = lp.count(value);
        } else if (key == "violation_tolerance") {
            c.sampling.violation_tolerance = lp.numbers(value).at(0);
        } else if (key == "quad_tol") {
            c.quad_tol = lp.numbers(value).at(0);
        } else {
            lp.fail("unknown key '" + key + "'");
        }
    }
    return c;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sweep config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sweep_config(buf.str());
}

}  // namespace hhineq
