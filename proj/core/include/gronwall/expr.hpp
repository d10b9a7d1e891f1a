#pragma once

// Small arithmetic expression language for coefficients and kernels.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | func '(' expr ')' | '(' expr ')'
//
// `^` is right-associative and binds tighter than unary minus, so `-x^2`
// is `-(x^2)` and `2^t^2` is `2^(t^2)`. Whitespace is ignored and `#`
// starts a comment that runs to the end of the line.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gronwall {

enum class BinaryOp : char { add = '+', sub = '-', mul = '*', div = '/', pow = '^' };

enum class Function { exp, log, sin, cos, sqrt, abs };

using NameSet = std::set<std::string, std::less<>>;

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    enum class Kind { number, variable, negate, binary, call };

    static Expr number(double value);
    static Expr variable(std::string name);
    static Expr negate(Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr call(Function fn, Expr argument);

    Kind kind() const noexcept;

    double value() const;               ///< number
    const std::string& name() const;    ///< variable
    BinaryOp op() const;                ///< binary
    Function function() const;          ///< call
    const Expr& operand() const;        ///< negate, call
    const Expr& lhs() const;            ///< binary
    const Expr& rhs() const;            ///< binary

    /// True for the literal `0` (or `-0`).
    bool is_literal_zero() const noexcept;

    /// Structural equality. Number literals compare bitwise.
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Variable bindings for tree evaluation.
class EvalContext {
public:
    EvalContext() = default;
    EvalContext(std::initializer_list<std::pair<const std::string, double>> bindings)
        : bindings_(bindings) {}

    void bind(std::string name, double value) { bindings_[std::move(name)] = value; }
    const double* find(std::string_view name) const;

private:
    std::map<std::string, double, std::less<>> bindings_;
};

/// Parses `source`, accepting only identifiers in `allowed_vars`.
/// Throws ParseError (syntax), UnknownVariableError, UnknownFunctionError.
Expr parse(std::string_view source, const NameSet& allowed_vars);

/// IEEE double evaluation. Non-finite results are returned as-is.
/// Throws EvalError for an unbound variable.
double eval(const Expr& e, const EvalContext& ctx);

NameSet free_variables(const Expr& e);

/// Minimal-parenthesis rendering; `parse(to_string(e))` rebuilds `e`.
std::string to_string(const Expr& e);

std::string_view function_name(Function fn) noexcept;

/// Flat postfix program with variables resolved to positional slots, for
/// the inner loops of the quadrature engines. Evaluation performs the same
/// floating-point operations in the same order as `eval`.
class CompiledExpr {
public:
    CompiledExpr() = default;

    /// `slots` maps each variable name to an index into the argument span.
    /// Throws EvalError if a free variable of `e` has no slot.
    static CompiledExpr compile(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots);

    double operator()(std::span<const double> args) const;

    std::size_t arity() const noexcept { return arity_; }

private:
    enum class Opcode : unsigned char { constant, load, negate, add, sub, mul, div, pow, call };
    struct Instr {
        Opcode code;
        unsigned char fn;
        std::size_t slot;
        double value;
    };
    void emit(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots, std::size_t depth);

    std::vector<Instr> program_;
    std::size_t max_depth_ = 0;
    std::size_t arity_ = 0;
};

}  // namespace gronwall
