#include "netstab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace netstab {

std::string_view op_name(Op op) noexcept {
    switch (op) {
        case Op::Const: return "const";
        case Op::Var: return "var";
        case Op::Neg: return "neg";
        case Op::Tanh: return "tanh";
        case Op::Sech: return "sech";
        case Op::Exp: return "exp";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Abs: return "abs";
        case Op::Sign: return "sign";
        case Op::Add: return "add";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::Div: return "div";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Construction and structural comparison

Expr Expr::constant(double value) {
    if (!std::isfinite(value)) {
        throw DomainError("expression constants must be finite");
    }
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = value == 0.0 ? 0.0 : value; // no negative zero
    return Expr(std::move(n));
}

Expr Expr::variable(std::string node, int delay) {
    if (delay < 0) {
        throw DomainError("negative delay for " + node);
    }
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Var;
    n->var = VarRef{std::move(node), delay};
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
    if (!is_unary(op)) {
        throw DomainError("not a unary operator: " + std::string(op_name(op)));
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->size = 1 + arg.size();
    n->lhs = std::move(arg);
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (!is_binary(op)) {
        throw DomainError("not a binary operator: " + std::string(op_name(op)));
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->size = 1 + lhs.size() + rhs.size();
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_ ? node_->op : Op::Const; }

double Expr::value() const {
    if (op() != Op::Const) {
        throw DomainError("value() on a non-constant expression");
    }
    return node_ ? node_->value : 0.0;
}

const VarRef& Expr::var() const {
    if (op() != Op::Var) {
        throw DomainError("var() on a non-variable expression");
    }
    return node_->var;
}

const Expr& Expr::arg() const {
    if (!is_unary(op())) {
        throw DomainError("arg() on a non-unary expression");
    }
    return node_->lhs;
}

const Expr& Expr::lhs() const {
    if (!is_binary(op())) {
        throw DomainError("lhs() on a non-binary expression");
    }
    return node_->lhs;
}

const Expr& Expr::rhs() const {
    if (!is_binary(op())) {
        throw DomainError("rhs() on a non-binary expression");
    }
    return node_->rhs;
}

bool Expr::is_constant(double v) const noexcept { return op() == Op::Const && (node_ ? node_->value : 0.0) == v; }

std::size_t Expr::size() const noexcept { return node_ ? node_->size : 1; }

std::strong_ordering operator<=>(const Expr& a, const Expr& b) noexcept {
    if (a.identity() == b.identity() && a.identity() != nullptr) {
        return std::strong_ordering::equal;
    }
    if (auto c = a.op() <=> b.op(); c != 0) {
        return c;
    }
    switch (a.op()) {
        case Op::Const: {
            const double x = a.value();
            const double y = b.value();
            if (x < y) return std::strong_ordering::less;
            if (x > y) return std::strong_ordering::greater;
            return std::strong_ordering::equal;
        }
        case Op::Var: return a.var() <=> b.var();
        default: break;
    }
    if (is_unary(a.op())) {
        return a.arg() <=> b.arg();
    }
    if (auto c = a.lhs() <=> b.lhs(); c != 0) {
        return c;
    }
    return a.rhs() <=> b.rhs();
}

bool operator==(const Expr& a, const Expr& b) noexcept { return (a <=> b) == 0; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }
Expr tanh(const Expr& a) { return Expr::unary(Op::Tanh, a); }
Expr sech(const Expr& a) { return Expr::unary(Op::Sech, a); }
Expr exp(const Expr& a) { return Expr::unary(Op::Exp, a); }
Expr sin(const Expr& a) { return Expr::unary(Op::Sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Op::Cos, a); }
Expr abs(const Expr& a) { return Expr::unary(Op::Abs, a); }

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::optional<Op> function_op(std::string_view name) {
    if (name == "tanh") return Op::Tanh;
    if (name == "sech") return Op::Sech;
    if (name == "exp") return Op::Exp;
    if (name == "sin") return Op::Sin;
    if (name == "cos") return Op::Cos;
    if (name == "abs") return Op::Abs;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>* declared) : text_(text), declared_(declared) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error at position " + std::to_string(pos_) + ": " + msg, pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    [[nodiscard]] bool at_number() {
        skip_ws();
        return pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    }

    Expr expr() {
        Expr acc = term();
        for (;;) {
            if (accept('+')) {
                acc = acc + term();
            } else if (accept('-')) {
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    Expr term() {
        Expr acc = factor();
        for (;;) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                acc = acc / factor();
            } else {
                return acc;
            }
        }
    }

    Expr factor() {
        if (accept('-')) {
            if (at_number()) {
                return Expr::constant(-number());
            }
            return -atom();
        }
        return atom();
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) {
                ++p;
            }
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        if (!std::isfinite(v)) {
            pos_ = start;
            fail("number out of range");
        }
        return v;
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) {
            fail("expected a number, name or '('");
        }
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Expr atom() {
        if (at_number()) {
            return Expr::constant(number());
        }
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        const std::size_t name_pos = pos_;
        const std::string name = ident();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            const auto fn = function_op(name);
            if (!fn) {
                pos_ = name_pos;
                fail("unknown function '" + name + "'");
            }
            ++pos_;
            Expr e = expr();
            expect(')');
            return Expr::unary(*fn, std::move(e));
        }
        int delay = 0;
        if (accept('[')) {
            skip_ws();
            const bool minus = accept('-');
            skip_ws();
            const std::size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (digits == pos_) {
                fail("expected an integer delay");
            }
            long long d = 0;
            std::from_chars(text_.data() + digits, text_.data() + pos_, d);
            if (!minus && d != 0) {
                pos_ = digits;
                fail("negative delay literal: '" + name + "[" + std::to_string(d) +
                     "]' reads the future; write " + name + "[-" + std::to_string(d) + "]");
            }
            if (d > 1000000) {
                fail("delay too large");
            }
            delay = static_cast<int>(d);
            expect(']');
        }
        if (declared_ != nullptr && declared_->count(name) == 0) {
            throw ParseError("undeclared identifier '" + name + "' at position " + std::to_string(name_pos),
                             name_pos);
        }
        return Expr::variable(name, delay);
    }

    std::string_view text_;
    const std::set<std::string>* declared_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expression(std::string_view text, const std::set<std::string>* declared) {
    return Parser(text, declared).parse();
}

Expr parse_expression(std::string_view text, const std::set<std::string>& declared) {
    return Parser(text, &declared).parse();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Const: return e.value() < 0.0 ? 4 : 5;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[40];
    // Shortest representation that round-trips.
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        double back = 0.0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        if (back == v) {
            break;
        }
    }
    return buf;
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const Expr& e, std::string& out) {
    switch (e.op()) {
        case Op::Const:
            if (e.value() < 0.0) {
                out += "(-" + format_number(-e.value()) + ")";
            } else {
                out += format_number(e.value());
            }
            return;
        case Op::Var:
            out += e.var().node;
            if (e.var().delay > 0) {
                out += "[-" + std::to_string(e.var().delay) + "]";
            }
            return;
        case Op::Neg: {
            out += '-';
            // The grammar only admits an atom after unary minus; a bare
            // positive literal would fold into a constant.
            const Expr& a = e.arg();
            const bool wrap = precedence(a) < 5 || a.op() == Op::Const;
            print_wrapped(a, wrap, out);
            return;
        }
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const int p = precedence(e);
            print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
            switch (e.op()) {
                case Op::Add: out += " + "; break;
                case Op::Sub: out += " - "; break;
                case Op::Mul: out += " * "; break;
                default: out += " / "; break;
            }
            print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
            return;
        }
        default:
            out += op_name(e.op());
            out += '(';
            print(e.arg(), out);
            out += ')';
            return;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

std::optional<double> fold_unary(Op op, double x) {
    double r = 0.0;
    switch (op) {
        case Op::Neg: r = -x; break;
        case Op::Tanh: r = std::tanh(x); break;
        case Op::Sech: r = 1.0 / std::cosh(x); break;
        case Op::Exp: r = std::exp(x); break;
        case Op::Sin: r = std::sin(x); break;
        case Op::Cos: r = std::cos(x); break;
        case Op::Abs: r = std::fabs(x); break;
        case Op::Sign: r = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); break;
        default: return std::nullopt;
    }
    if (!std::isfinite(r)) {
        return std::nullopt;
    }
    return r;
}

// Bottom-up rewriting that never restructures a non-constant subtree: fold
// constants, drop neutral operands, and order the operands of + and *. A
// normalized subexpression therefore reappears verbatim inside any
// normalized expression built around it.
class Normalizer {
public:
    Expr run(const Expr& e) {
        if (e.identity() == nullptr) {
            return e;
        }
        if (auto it = memo_.find(e.identity()); it != memo_.end()) {
            return it->second;
        }
        Expr r = compute(e);
        memo_.emplace(e.identity(), r);
        return r;
    }

private:
    static std::optional<Expr> folded(double v) {
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
        return Expr::constant(v);
    }

    static Expr negate(const Expr& a) {
        if (a.is_constant()) {
            return Expr::constant(-a.value());
        }
        if (a.op() == Op::Neg) {
            return a.arg();
        }
        return -a;
    }

    static Expr ordered(Op op, Expr a, Expr b) {
        if ((b <=> a) < 0) {
            std::swap(a, b);
        }
        return Expr::binary(op, std::move(a), std::move(b));
    }

    static Expr sum(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) {
            if (auto v = folded(a.value() + b.value())) {
                return *v;
            }
        }
        if (a.is_constant(0.0)) {
            return b;
        }
        if (b.is_constant(0.0)) {
            return a;
        }
        // c1 + (c2 + t) folds the two constants.
        for (const auto& [c, t] : {std::pair{a, b}, std::pair{b, a}}) {
            if (c.is_constant() && t.op() == Op::Add && t.lhs().is_constant()) {
                if (auto v = folded(c.value() + t.lhs().value())) {
                    return sum(*v, t.rhs());
                }
            }
        }
        return ordered(Op::Add, a, b);
    }

    static Expr difference(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) {
            if (auto v = folded(a.value() - b.value())) {
                return *v;
            }
        }
        if (b.is_constant(0.0)) {
            return a;
        }
        if (a.is_constant(0.0)) {
            return negate(b);
        }
        // Exact cancellation: t - t and (s + t) - t.
        if (a == b) {
            return Expr::constant(0.0);
        }
        if (a.op() == Op::Add && a.rhs() == b) {
            return a.lhs();
        }
        if (a.op() == Op::Add && a.lhs() == b) {
            return a.rhs();
        }
        if (b.is_constant()) {
            return sum(Expr::constant(-b.value()), a);
        }
        return a - b;
    }

    static Expr product(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) {
            if (auto v = folded(a.value() * b.value())) {
                return *v;
            }
        }
        if (a.is_constant(0.0) || b.is_constant(0.0)) {
            return Expr::constant(0.0);
        }
        if (a.is_constant(1.0)) {
            return b;
        }
        if (b.is_constant(1.0)) {
            return a;
        }
        if (a.is_constant(-1.0)) {
            return negate(b);
        }
        if (b.is_constant(-1.0)) {
            return negate(a);
        }
        for (const auto& [c, t] : {std::pair{a, b}, std::pair{b, a}}) {
            if (c.is_constant() && t.op() == Op::Mul && t.lhs().is_constant()) {
                if (auto v = folded(c.value() * t.lhs().value())) {
                    return product(*v, t.rhs());
                }
            }
            if (c.is_constant() && t.op() == Op::Neg) {
                return product(Expr::constant(-c.value()), t.arg());
            }
        }
        return ordered(Op::Mul, a, b);
    }

    Expr compute(const Expr& e) {
        const Op op = e.op();
        if (op == Op::Const || op == Op::Var) {
            return e;
        }
        if (is_unary(op)) {
            Expr a = run(e.arg());
            if (a.is_constant()) {
                if (auto v = fold_unary(op, a.value())) {
                    return Expr::constant(*v);
                }
            }
            if (op == Op::Neg) {
                return negate(a);
            }
            if (op == Op::Abs && a.op() == Op::Abs) {
                return a;
            }
            return Expr::unary(op, a);
        }
        Expr a = run(e.lhs());
        Expr b = run(e.rhs());
        switch (op) {
            case Op::Add: return sum(a, b);
            case Op::Sub: return difference(a, b);
            case Op::Mul: return product(a, b);
            case Op::Div: {
                if (b.is_constant(1.0)) {
                    return a;
                }
                if (a.is_constant(0.0) && !b.is_constant(0.0)) {
                    return Expr::constant(0.0);
                }
                if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
                    if (auto v = folded(a.value() / b.value())) {
                        return *v;
                    }
                }
                return a / b;
            }
            default: return e;
        }
    }

    std::unordered_map<const ExprNode*, Expr> memo_;
};

} // namespace

Expr normalize(const Expr& e) { return Normalizer().run(e); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr smart_mul(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) {
        return Expr::constant(0.0);
    }
    if (a.is_constant(1.0)) {
        return b;
    }
    if (b.is_constant(1.0)) {
        return a;
    }
    return a * b;
}

Expr smart_add(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) {
        return b;
    }
    if (b.is_constant(0.0)) {
        return a;
    }
    return a + b;
}

Expr smart_neg(const Expr& a) { return a.is_constant(0.0) ? a : -a; }

class Differentiator {
public:
    explicit Differentiator(VarRef wrt) : wrt_(std::move(wrt)) {}

    Expr run(const Expr& e) {
        if (e.identity() == nullptr) {
            return Expr::constant(0.0);
        }
        if (auto it = memo_.find(e.identity()); it != memo_.end()) {
            return it->second;
        }
        Expr r = compute(e);
        memo_.emplace(e.identity(), r);
        return r;
    }

private:
    Expr compute(const Expr& e) {
        switch (e.op()) {
            case Op::Const: return Expr::constant(0.0);
            case Op::Var: return Expr::constant(e.var() == wrt_ ? 1.0 : 0.0);
            case Op::Neg: return smart_neg(run(e.arg()));
            case Op::Add: return smart_add(run(e.lhs()), run(e.rhs()));
            case Op::Sub: {
                Expr da = run(e.lhs());
                Expr db = run(e.rhs());
                if (db.is_constant(0.0)) {
                    return da;
                }
                return da.is_constant(0.0) ? -db : da - db;
            }
            case Op::Mul:
                return smart_add(smart_mul(run(e.lhs()), e.rhs()), smart_mul(e.lhs(), run(e.rhs())));
            case Op::Div: {
                const Expr& u = e.lhs();
                const Expr& v = e.rhs();
                Expr du = run(u);
                Expr dv = run(v);
                Expr first = du.is_constant(0.0) ? du : du / v;
                if (dv.is_constant(0.0)) {
                    return first;
                }
                Expr second = smart_mul(u, dv) / (v * v);
                return first.is_constant(0.0) ? -second : first - second;
            }
            default: break;
        }
        const Expr& u = e.arg();
        Expr du = run(u);
        if (du.is_constant(0.0)) {
            return du;
        }
        switch (e.op()) {
            case Op::Tanh: return smart_mul(sech(u) * sech(u), du);
            case Op::Sech: return smart_mul(-(sech(u) * tanh(u)), du);
            case Op::Exp: return smart_mul(exp(u), du);
            case Op::Sin: return smart_mul(cos(u), du);
            case Op::Cos: return smart_mul(-sin(u), du);
            case Op::Abs: return smart_mul(Expr::unary(Op::Sign, u), du);
            case Op::Sign: return Expr::constant(0.0);
            default: break;
        }
        return Expr::constant(0.0);
    }

    VarRef wrt_;
    std::unordered_map<const ExprNode*, Expr> memo_;
};

} // namespace

Expr differentiate(const Expr& e, const VarRef& wrt) { return normalize(Differentiator(wrt).run(e)); }

// ---------------------------------------------------------------------------
// Traversal helpers

namespace {

void collect_vars(const Expr& e, std::set<VarRef>& out, std::set<const ExprNode*>& seen) {
    if (e.identity() == nullptr || !seen.insert(e.identity()).second) {
        return;
    }
    if (e.op() == Op::Var) {
        out.insert(e.var());
    } else if (is_unary(e.op())) {
        collect_vars(e.arg(), out, seen);
    } else if (is_binary(e.op())) {
        collect_vars(e.lhs(), out, seen);
        collect_vars(e.rhs(), out, seen);
    }
}

} // namespace

std::set<VarRef> variables(const Expr& e) {
    std::set<VarRef> out;
    std::set<const ExprNode*> seen;
    collect_vars(e, out, seen);
    return out;
}

bool references(const Expr& e, const VarRef& v) { return variables(e).count(v) != 0; }

Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const VarRef&)>& fn) {
    std::unordered_map<const ExprNode*, Expr> memo;
    std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
        if (x.identity() == nullptr) {
            return x;
        }
        if (auto it = memo.find(x.identity()); it != memo.end()) {
            return it->second;
        }
        Expr r;
        switch (x.op()) {
            case Op::Const: r = x; break;
            case Op::Var: {
                auto rep = fn(x.var());
                r = rep ? *rep : x;
                break;
            }
            default:
                if (is_unary(x.op())) {
                    Expr a = go(x.arg());
                    r = a.identity() == x.arg().identity() ? x : Expr::unary(x.op(), a);
                } else {
                    Expr a = go(x.lhs());
                    Expr b = go(x.rhs());
                    r = (a.identity() == x.lhs().identity() && b.identity() == x.rhs().identity())
                            ? x
                            : Expr::binary(x.op(), a, b);
                }
        }
        memo.emplace(x.identity(), r);
        return r;
    };
    return go(e);
}

Expr rename(const Expr& e, const std::function<VarRef(const VarRef&)>& fn) {
    return substitute(e, [&](const VarRef& v) -> std::optional<Expr> {
        VarRef w = fn(v);
        if (w == v) {
            return std::nullopt;
        }
        return Expr::variable(std::move(w.node), w.delay);
    });
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double apply_unary(Op op, double x) {
    switch (op) {
        case Op::Neg: return -x;
        case Op::Tanh: return std::tanh(x);
        case Op::Sech: return 1.0 / std::cosh(x);
        case Op::Exp: return std::exp(x);
        case Op::Sin: return std::sin(x);
        case Op::Cos: return std::cos(x);
        case Op::Abs: return std::fabs(x);
        case Op::Sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        default: return x;
    }
}

double apply_binary(Op op, double x, double y) {
    switch (op) {
        case Op::Add: return x + y;
        case Op::Sub: return x - y;
        case Op::Mul: return x * y;
        case Op::Div: return x / y;
        default: return x;
    }
}

double eval_rec(const Expr& e, const std::function<double(const VarRef&)>& lookup) {
    switch (e.op()) {
        case Op::Const: return e.value();
        case Op::Var: return lookup(e.var());
        default: break;
    }
    if (is_unary(e.op())) {
        return apply_unary(e.op(), eval_rec(e.arg(), lookup));
    }
    const double x = eval_rec(e.lhs(), lookup);
    const double y = eval_rec(e.rhs(), lookup);
    if (e.op() == Op::Div && y == 0.0) {
        throw EvalError("division by zero in " + to_string(e));
    }
    return apply_binary(e.op(), x, y);
}

Interval interval_unary(Op op, const Interval& a) {
    switch (op) {
        case Op::Neg: return -a;
        case Op::Tanh: return tanh(a);
        case Op::Sech: return sech(a);
        case Op::Exp: return exp(a);
        case Op::Sin: return sin(a);
        case Op::Cos: return cos(a);
        case Op::Abs: return abs(a);
        case Op::Sign: return sign(a);
        default: return a;
    }
}

} // namespace

double eval_point(const Expr& e, const std::function<double(const VarRef&)>& lookup) { return eval_rec(e, lookup); }

double eval_point(const Expr& e, const std::map<VarRef, double>& assignment) {
    return eval_rec(e, [&](const VarRef& v) {
        auto it = assignment.find(v);
        if (it == assignment.end()) {
            throw EvalError("no value assigned to " + v.node + "[-" + std::to_string(v.delay) + "]");
        }
        return it->second;
    });
}

Interval eval_interval(const Expr& e, const std::function<Interval(const VarRef&)>& box) {
    std::unordered_map<const ExprNode*, Interval> memo;
    std::function<Interval(const Expr&)> go = [&](const Expr& x) -> Interval {
        if (x.op() == Op::Const) {
            return Interval(x.value());
        }
        if (auto it = memo.find(x.identity()); it != memo.end()) {
            return it->second;
        }
        Interval r;
        if (x.op() == Op::Var) {
            r = box(x.var());
        } else if (is_unary(x.op())) {
            r = interval_unary(x.op(), go(x.arg()));
        } else {
            const Interval a = go(x.lhs());
            // x * x is a square: never negative.
            if (x.op() == Op::Mul && x.lhs() == x.rhs()) {
                const Interval m = abs(a);
                r = m * m;
            } else {
                const Interval b = go(x.rhs());
                switch (x.op()) {
                    case Op::Add: r = a + b; break;
                    case Op::Sub: r = a - b; break;
                    case Op::Mul: r = a * b; break;
                    default:
                        if (b.contains_zero()) {
                            throw EvalError("denominator of " + to_string(x) + " may vanish over the domain");
                        }
                        r = a / b;
                        break;
                }
            }
        }
        memo.emplace(x.identity(), r);
        return r;
    };
    return go(e);
}

Interval eval_interval(const Expr& e, const std::map<VarRef, Interval>& box) {
    return eval_interval(e, [&](const VarRef& v) {
        auto it = box.find(v);
        if (it == box.end()) {
            throw EvalError("no interval assigned to " + v.node + "[-" + std::to_string(v.delay) + "]");
        }
        return it->second;
    });
}

// ---------------------------------------------------------------------------
// Program

Program::Program(const Expr& e, const std::function<std::size_t(const VarRef&)>& slot_of) {
    std::size_t depth = 0;
    std::function<void(const Expr&)> emit = [&](const Expr& x) {
        switch (x.op()) {
            case Op::Const:
                code_.push_back({Op::Const, x.value(), 0});
                ++depth;
                break;
            case Op::Var:
                code_.push_back({Op::Var, 0.0, slot_of(x.var())});
                ++depth;
                break;
            default:
                if (is_unary(x.op())) {
                    emit(x.arg());
                    code_.push_back({x.op(), 0.0, 0});
                } else {
                    emit(x.lhs());
                    emit(x.rhs());
                    code_.push_back({x.op(), 0.0, 0});
                    --depth;
                }
        }
        max_depth_ = std::max(max_depth_, depth);
    };
    emit(e);
}

double Program::operator()(std::span<const double> slots) const {
    double small[64];
    std::vector<double> big;
    double* stack = small;
    if (max_depth_ > 64) {
        big.resize(max_depth_);
        stack = big.data();
    }
    std::size_t top = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: stack[top++] = in.value; break;
            case Op::Var: stack[top++] = slots[in.slot]; break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: {
                const double y = stack[--top];
                stack[top - 1] = apply_binary(in.op, stack[top - 1], y);
                break;
            }
            default: stack[top - 1] = apply_unary(in.op, stack[top - 1]); break;
        }
    }
    return top == 0 ? 0.0 : stack[0];
}

} // namespace netstab
