#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netstab/interval.hpp"

namespace netstab {

/// A reference to node `node` read `delay` steps in the past (x_node[-delay]).
struct VarRef {
    std::string node;
    int delay = 0;

    friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

/// Node kinds of an expression tree. `Sign` never comes out of the parser; it
/// only appears in derivatives of `abs`.
enum class Op : std::uint8_t {
    Const,
    Var,
    Neg,
    Tanh,
    Sech,
    Exp,
    Sin,
    Cos,
    Abs,
    Sign,
    Add,
    Sub,
    Mul,
    Div,
};

[[nodiscard]] constexpr bool is_unary(Op op) noexcept { return op >= Op::Neg && op <= Op::Sign; }
[[nodiscard]] constexpr bool is_binary(Op op) noexcept { return op >= Op::Add; }
[[nodiscard]] std::string_view op_name(Op op) noexcept;

struct ExprNode;

// Immutable expression tree with shared subtrees. Copying is cheap. A
// default-constructed Expr is the constant 0.
class Expr {
public:
    Expr() noexcept = default;

    static Expr constant(double value);
    static Expr variable(std::string node, int delay = 0);
    static Expr unary(Op op, Expr arg);
    static Expr binary(Op op, Expr lhs, Expr rhs);

    [[nodiscard]] Op op() const noexcept;
    [[nodiscard]] double value() const;
    [[nodiscard]] const VarRef& var() const;
    [[nodiscard]] const Expr& arg() const;
    [[nodiscard]] const Expr& lhs() const;
    [[nodiscard]] const Expr& rhs() const;

    [[nodiscard]] bool is_constant() const noexcept { return op() == Op::Const; }
    [[nodiscard]] bool is_constant(double v) const noexcept;
    [[nodiscard]] std::size_t size() const noexcept;
    /// Address of the shared node; equal identities imply equal trees.
    [[nodiscard]] const ExprNode* identity() const noexcept { return node_.get(); }

    friend bool operator==(const Expr& a, const Expr& b) noexcept;
    friend std::strong_ordering operator<=>(const Expr& a, const Expr& b) noexcept;

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    Op op = Op::Const;
    double value = 0.0;
    VarRef var;
    Expr lhs;
    Expr rhs;
    std::size_t size = 1;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr tanh(const Expr& a);
Expr sech(const Expr& a);
Expr exp(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr abs(const Expr& a);

/// Parses `text` with the usual precedence (unary minus binds tighter than
/// `*` `/`, which bind tighter than `+` `-`; left-associative). A bare name
/// reads delay 0; `x[-3]` reads delay 3. When `declared` is given every
/// referenced name must be in it. A minus sign directly in front of a number
/// literal folds into a negative constant.
Expr parse_expression(std::string_view text, const std::set<std::string>* declared = nullptr);
Expr parse_expression(std::string_view text, const std::set<std::string>& declared);

/// Prints in the grammar accepted by parse_expression; parse(print(e)) == e
/// for every tree built from the closed vocabulary.
std::string to_string(const Expr& e);

/// Exact symbolic partial derivative with respect to `wrt`, normalized.
Expr differentiate(const Expr& e, const VarRef& wrt);

/// Canonical form: constant folding, like-term collection in sums, sorted
/// factors in products. Idempotent.
Expr normalize(const Expr& e);

std::set<VarRef> variables(const Expr& e);
[[nodiscard]] bool references(const Expr& e, const VarRef& v);

/// Replaces every variable for which `fn` returns a value.
Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const VarRef&)>& fn);
Expr rename(const Expr& e, const std::function<VarRef(const VarRef&)>& fn);

double eval_point(const Expr& e, const std::function<double(const VarRef&)>& lookup);
double eval_point(const Expr& e, const std::map<VarRef, double>& assignment);

/// Sound enclosure of e over the box. Bounded primitives stay bounded over
/// unbounded boxes. Throws EvalError for a denominator that may vanish.
Interval eval_interval(const Expr& e, const std::function<Interval(const VarRef&)>& box);
Interval eval_interval(const Expr& e, const std::map<VarRef, Interval>& box);

/// Flat postfix form of an expression over numbered slots, for the inner
/// loops of orbit simulation.
class Program {
public:
    Program() = default;
    Program(const Expr& e, const std::function<std::size_t(const VarRef&)>& slot_of);

    [[nodiscard]] double operator()(std::span<const double> slots) const;

private:
    struct Instr {
        Op op;
        double value;
        std::size_t slot;
    };
    std::vector<Instr> code_;
    std::size_t max_depth_ = 0;
};

} // namespace netstab
