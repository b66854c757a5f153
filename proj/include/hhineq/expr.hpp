#pragma once

// Expression language for univariate test functions f(x).
//
// Grammar (`^` is right-associative and binds tighter than unary minus):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ('-')? power
//   power  := atom ('^' factor)?
//   atom   := number | 'x' | 'pi' | 'e'
//           | ident '(' expr (',' expr)? ')'
//           | '(' expr ')'
//
// Functions: exp, ln, abs, sqrt, sin, cos (unary) and max2 (binary).

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hhineq/errors.hpp"

namespace hhineq {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { exp, ln, abs, sqrt, sin, cos, max2 };
enum class Constant { pi, e };

std::string_view name_of(Function fn);
std::size_t arity_of(Function fn);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Variable {};
struct NamedConstant {
    Constant which;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Negate {
    NodePtr operand;
};
struct Call {
    Function fn;
    std::vector<NodePtr> args;
};

struct Node {
    std::variant<Number, Variable, NamedConstant, Binary, Negate, Call> data;
};

// Immutable handle to a parsed or constructed expression tree. Copies share
// the tree; nothing reachable from an ExprAst is ever mutated.
class ExprAst {
public:
    static ExprAst number(double value);  // finite, non-negative
    static ExprAst variable();
    static ExprAst constant(Constant which);
    static ExprAst binary(BinaryOp op, const ExprAst& lhs, const ExprAst& rhs);
    static ExprAst negate(const ExprAst& operand);
    static ExprAst call(Function fn, std::vector<ExprAst> args);

    [[nodiscard]] const Node& root() const noexcept { return *root_; }

    // Throws EvalError on domain violations and non-finite results.
    [[nodiscard]] double operator()(double x) const;

    // Fully parenthesized form; parse(to_string()) is structurally equal.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const ExprAst& a, const ExprAst& b);

private:
    friend ExprAst parse(std::string_view source);
    friend ExprAst reflected(const ExprAst& f, double lo, double hi);

    explicit ExprAst(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

ExprAst parse(std::string_view source);
double eval(const ExprAst& ast, double x);

// |f|^power as a new tree (abs(f) when power == 1).
ExprAst abs_power(const ExprAst& f, double power);
// -f
ExprAst negated(const ExprAst& f);
// f(lo + hi - x), the reflection of f about the midpoint of [lo, hi].
ExprAst reflected(const ExprAst& f, double lo, double hi);

}  // namespace hhineq
