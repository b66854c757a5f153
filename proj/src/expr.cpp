#include "hhineq/expr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace hhineq {

namespace {

constexpr std::string_view kAtomHint = "number, 'x', 'pi', 'e', function call or '('";

struct FunctionName {
    std::string_view name;
    Function fn;
    std::size_t arity;
};

constexpr FunctionName kFunctions[] = {
    {"exp", Function::exp, 1},   {"ln", Function::ln, 1},   {"abs", Function::abs, 1},
    {"sqrt", Function::sqrt, 1}, {"sin", Function::sin, 1}, {"cos", Function::cos, 1},
    {"max2", Function::max2, 2},
};

const FunctionName* lookup(std::string_view name) {
    for (const auto& entry : kFunctions) {
        if (entry.name == name) return &entry;
    }
    return nullptr;
}

NodePtr make(auto payload) { return std::make_shared<const Node>(Node{std::move(payload)}); }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) {
            fail("unexpected '" + std::string(1, src_[pos_]) + "'", "operator or end of input");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::string_view expected) const {
        throw ParseError(pos_, msg, std::string(expected));
    }

    [[noreturn]] void fail_here(std::string_view expected) const {
        if (pos_ >= src_.size()) fail("unexpected end of input", expected);
        fail("unexpected '" + std::string(1, src_[pos_]) + "'", expected);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail_here(std::string("'") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Binary{BinaryOp::add, lhs, term()});
            } else if (accept('-')) {
                lhs = make(Binary{BinaryOp::sub, lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = make(Binary{BinaryOp::mul, lhs, factor()});
            } else if (accept('/')) {
                lhs = make(Binary{BinaryOp::div, lhs, factor()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor() {
        if (accept('-')) return make(Negate{power()});
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Binary{BinaryOp::pow, base, factor()});
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail_here(kAtomHint);
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (accept('(')) {
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        fail_here(kAtomHint);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) fail("malformed number", "digit");
        // Exponent only when digits follow, so "2e" leaves 'e' for the caller.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc{} || ptr != src_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("number out of range", "finite number");
        }
        return make(Number{value});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Variable{});
        if (name == "pi") return make(NamedConstant{Constant::pi});
        if (name == "e") return make(NamedConstant{Constant::e});
        const FunctionName* entry = lookup(name);
        if (entry == nullptr) {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'",
                 "'x', 'pi', 'e' or a function name");
        }
        expect('(');
        std::vector<NodePtr> args;
        args.push_back(expr());
        if (accept(',')) args.push_back(expr());
        if (args.size() != entry->arity) {
            fail(std::string(entry->name) + " takes " + std::to_string(entry->arity) +
                     " argument(s)",
                 entry->arity == 2 ? "','" : "')'");
        }
        expect(')');
        return make(Call{entry->fn, std::move(args)});
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what, double x) {
    if (!std::isfinite(v)) throw EvalError(std::string(what) + " produced a non-finite value", x);
    return v;
}

double eval_node(const Node& node, double x) {
    return std::visit(
        [x](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return checked(x, "variable", x);
            } else if constexpr (std::is_same_v<T, NamedConstant>) {
                return n.which == Constant::pi ? std::numbers::pi : std::numbers::e;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval_node(*n.operand, x);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const double l = eval_node(*n.lhs, x);
                const double r = eval_node(*n.rhs, x);
                switch (n.op) {
                    case BinaryOp::add: return checked(l + r, "addition", x);
                    case BinaryOp::sub: return checked(l - r, "subtraction", x);
                    case BinaryOp::mul: return checked(l * r, "multiplication", x);
                    case BinaryOp::div:
                        if (r == 0.0) throw EvalError("division by zero", x);
                        return checked(l / r, "division", x);
                    case BinaryOp::pow:
                        if (l < 0.0 && std::trunc(r) != r) {
                            throw EvalError("negative base with non-integer exponent", x);
                        }
                        if (l == 0.0 && r < 0.0) throw EvalError("zero raised to negative power", x);
                        return checked(std::pow(l, r), "power", x);
                }
                return 0.0;
            } else {
                const double a = eval_node(*n.args[0], x);
                switch (n.fn) {
                    case Function::exp: return checked(std::exp(a), "exp", x);
                    case Function::ln:
                        if (a <= 0.0) throw EvalError("ln of non-positive argument", x);
                        return checked(std::log(a), "ln", x);
                    case Function::abs: return std::fabs(a);
                    case Function::sqrt:
                        if (a < 0.0) throw EvalError("sqrt of negative argument", x);
                        return std::sqrt(a);
                    case Function::sin: return std::sin(a);
                    case Function::cos: return std::cos(a);
                    case Function::max2: return std::max(a, eval_node(*n.args[1], x));
                }
                return 0.0;
            }
        },
        node.data);
}

char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return '+';
        case BinaryOp::sub: return '-';
        case BinaryOp::mul: return '*';
        case BinaryOp::div: return '/';
        case BinaryOp::pow: return '^';
    }
    return '?';
}

void print(const Node& node, std::string& out) {
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                out += format_shortest(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += 'x';
            } else if constexpr (std::is_same_v<T, NamedConstant>) {
                out += n.which == Constant::pi ? "pi" : "e";
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += "(-";
                print(*n.operand, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Binary>) {
                out += '(';
                print(*n.lhs, out);
                out += ' ';
                out += op_char(n.op);
                out += ' ';
                print(*n.rhs, out);
                out += ')';
            } else {
                out += name_of(n.fn);
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i > 0) out += ", ";
                    print(*n.args[i], out);
                }
                out += ')';
            }
        },
        node.data);
}

bool equal(const Node& a, const Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        [&b](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            const auto& m = std::get<T>(b.data);
            if constexpr (std::is_same_v<T, Number>) {
                return std::bit_cast<std::uint64_t>(n.value) ==
                       std::bit_cast<std::uint64_t>(m.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, NamedConstant>) {
                return n.which == m.which;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return equal(*n.operand, *m.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return n.op == m.op && equal(*n.lhs, *m.lhs) && equal(*n.rhs, *m.rhs);
            } else {
                if (n.fn != m.fn || n.args.size() != m.args.size()) return false;
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (!equal(*n.args[i], *m.args[i])) return false;
                }
                return true;
            }
        },
        a.data);
}

}  // namespace

std::string_view name_of(Function fn) {
    for (const auto& entry : kFunctions) {
        if (entry.fn == fn) return entry.name;
    }
    return "?";
}

std::size_t arity_of(Function fn) {
    for (const auto& entry : kFunctions) {
        if (entry.fn == fn) return entry.arity;
    }
    return 0;
}

ExprAst ExprAst::number(double value) {
    if (!std::isfinite(value) || std::signbit(value)) {
        throw DomainError("expression literals must be finite and non-negative");
    }
    return ExprAst(make(Number{value}));
}

ExprAst ExprAst::variable() { return ExprAst(make(Variable{})); }

ExprAst ExprAst::constant(Constant which) { return ExprAst(make(NamedConstant{which})); }

ExprAst ExprAst::binary(BinaryOp op, const ExprAst& lhs, const ExprAst& rhs) {
    return ExprAst(make(Binary{op, lhs.root_, rhs.root_}));
}

ExprAst ExprAst::negate(const ExprAst& operand) { return ExprAst(make(Negate{operand.root_})); }

ExprAst ExprAst::call(Function fn, std::vector<ExprAst> args) {
    if (args.size() != arity_of(fn)) {
        throw DomainError(std::string(name_of(fn)) + " takes " + std::to_string(arity_of(fn)) +
                          " argument(s)");
    }
    std::vector<NodePtr> nodes;
    nodes.reserve(args.size());
    for (const auto& a : args) nodes.push_back(a.root_);
    return ExprAst(make(Call{fn, std::move(nodes)}));
}

double ExprAst::operator()(double x) const { return eval_node(*root_, x); }

std::string ExprAst::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool operator==(const ExprAst& a, const ExprAst& b) { return equal(*a.root_, *b.root_); }

ExprAst parse(std::string_view source) {
    Parser parser(source);
    return ExprAst(parser.parse_all());
}

double eval(const ExprAst& ast, double x) { return ast(x); }

ExprAst abs_power(const ExprAst& f, double power) {
    ExprAst base = ExprAst::call(Function::abs, {f});
    if (power == 1.0) return base;
    return ExprAst::binary(BinaryOp::pow, base, ExprAst::number(power));
}

ExprAst negated(const ExprAst& f) { return ExprAst::negate(f); }

ExprAst reflected(const ExprAst& f, double lo, double hi) {
    struct Substitute {
        NodePtr replacement;
        NodePtr operator()(const NodePtr& node) const {
            return std::visit(
                [&](const auto& n) -> NodePtr {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, Variable>) {
                        return replacement;
                    } else if constexpr (std::is_same_v<T, Negate>) {
                        return make(Negate{(*this)(n.operand)});
                    } else if constexpr (std::is_same_v<T, Binary>) {
                        return make(Binary{n.op, (*this)(n.lhs), (*this)(n.rhs)});
                    } else if constexpr (std::is_same_v<T, Call>) {
                        std::vector<NodePtr> args;
                        for (const auto& a : n.args) args.push_back((*this)(a));
                        return make(Call{n.fn, std::move(args)});
                    } else {
                        return node;
                    }
                },
                node->data);
        }
    };
    const NodePtr mirror = make(Binary{BinaryOp::sub, make(Number{lo + hi}), make(Variable{})});
    return ExprAst(Substitute{mirror}(f.root_));
}

}  // namespace hhineq
