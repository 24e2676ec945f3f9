#include "osclab/phase_expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace osclab {

namespace {

using Node = PhaseExpr::Node;
using NodePtr = PhaseExpr::NodePtr;
using Kind = PhaseExpr::Kind;

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr make_const(const Rational& v) {
    Node n{Kind::Constant};
    n.value = v;
    return make_node(std::move(n));
}

NodePtr make_var(int var) {
    Node n{Kind::Variable};
    n.var = var;
    return make_node(std::move(n));
}

std::optional<Rational> constant_of(const NodePtr& n) {
    if (n->kind == Kind::Constant) return n->value;
    return std::nullopt;
}

NodePtr make_sum(const NodePtr& a, const NodePtr& b) {
    auto ca = constant_of(a), cb = constant_of(b);
    if (ca && cb) return make_const(*ca + *cb);
    if (ca && ca->is_zero()) return b;
    if (cb && cb->is_zero()) return a;
    Node n{Kind::Sum};
    for (const NodePtr& x : {a, b}) {
        if (x->kind == Kind::Sum) n.kids.insert(n.kids.end(), x->kids.begin(), x->kids.end());
        else n.kids.push_back(x);
    }
    return make_node(std::move(n));
}

NodePtr make_neg(const NodePtr& a) {
    if (auto c = constant_of(a)) return make_const(-*c);
    if (a->kind == Kind::Negate) return a->kids.front();
    Node n{Kind::Negate};
    n.kids.push_back(a);
    return make_node(std::move(n));
}

NodePtr make_product(const NodePtr& a, const NodePtr& b) {
    auto ca = constant_of(a), cb = constant_of(b);
    if (ca && cb) return make_const(*ca * *cb);
    if ((ca && ca->is_zero()) || (cb && cb->is_zero())) return make_const(Rational(0));
    if (ca && *ca == Rational(1)) return b;
    if (cb && *cb == Rational(1)) return a;
    Node n{Kind::Product};
    for (const NodePtr& x : {a, b}) {
        if (x->kind == Kind::Product) n.kids.insert(n.kids.end(), x->kids.begin(), x->kids.end());
        else n.kids.push_back(x);
    }
    return make_node(std::move(n));
}

NodePtr make_power(const NodePtr& base, unsigned e) {
    if (auto c = constant_of(base)) return make_const(pow(*c, e));
    if (e == 0) return make_const(Rational(1));
    if (e == 1) return base;
    Node n{Kind::Power};
    n.exponent = e;
    n.kids.push_back(base);
    return make_node(std::move(n));
}

NodePtr make_unary(Kind kind, const NodePtr& a) {
    if (kind == Kind::Abs)
        if (auto c = constant_of(a)) return make_const(c->abs());
    if (kind == Kind::Exp)
        if (auto c = constant_of(a); c && c->is_zero()) return make_const(Rational(1));
    Node n{kind};
    n.kids.push_back(a);
    return make_node(std::move(n));
}

NodePtr make_flat(int var, const Rational& alpha) {
    Node n{Kind::Flat};
    n.var = var;
    n.value = alpha;
    return make_node(std::move(n));
}

// ---------------------------------------------------------------------------------------
// Parser

struct Item {
    enum class Special { None, AbsPower, Reciprocal };
    NodePtr node;  // null when the item only exists as part of a flat pattern
    Special special = Special::None;
    int var = 0;
    Rational alpha{1};
    Rational scale{1};
    std::size_t pos = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    PhaseExpr run() {
        Item it = expr();
        skip_ws();
        if (i_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[i_]) + "'", i_);
        return PhaseExpr(plain(it));
    }

private:
    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(char c) {
        skip_ws();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", i_);
    }

    NodePtr plain(const Item& it) const {
        if (it.special == Item::Special::Reciprocal || !it.node)
            throw ParseError("division by a non-constant expression is only supported as exp(-1/abs(x)^alpha)",
                             it.pos);
        return it.node;
    }

    static Item wrap(NodePtr n, std::size_t pos) {
        Item it;
        it.node = std::move(n);
        it.pos = pos;
        return it;
    }

    Item expr() {
        Item acc = term();
        for (;;) {
            skip_ws();
            const std::size_t pos = i_;
            if (accept('+')) acc = wrap(make_sum(plain(acc), plain(term())), pos);
            else if (accept('-')) acc = wrap(make_sum(plain(acc), make_neg(plain(term()))), pos);
            else return acc;
        }
    }

    Item term() {
        Item acc = unary();
        for (;;) {
            skip_ws();
            const std::size_t pos = i_;
            if (accept('*')) {
                Item rhs = unary();
                auto ca = acc.node ? constant_of(acc.node) : std::nullopt;
                auto cb = rhs.node ? constant_of(rhs.node) : std::nullopt;
                if (rhs.special == Item::Special::Reciprocal && ca) {
                    rhs.scale = rhs.scale * *ca;
                    acc = rhs;
                } else if (acc.special == Item::Special::Reciprocal && cb) {
                    acc.scale = acc.scale * *cb;
                } else {
                    acc = wrap(make_product(plain(acc), plain(rhs)), pos);
                }
            } else if (accept('/')) {
                Item rhs = unary();
                auto cb = rhs.node ? constant_of(rhs.node) : std::nullopt;
                if (cb) {
                    if (cb->is_zero()) throw ParseError("division by zero", pos);
                    if (acc.special == Item::Special::Reciprocal) acc.scale = acc.scale / *cb;
                    else acc = wrap(make_product(plain(acc), make_const(cb->inverse())), pos);
                    continue;
                }
                auto ca = acc.node ? constant_of(acc.node) : std::nullopt;
                if (rhs.special != Item::Special::AbsPower || !ca)
                    throw ParseError(
                        "division by a non-constant expression is only supported as exp(-1/abs(x)^alpha)", pos);
                Item r;
                r.special = Item::Special::Reciprocal;
                r.var = rhs.var;
                r.alpha = rhs.alpha;
                r.scale = *ca;
                r.pos = pos;
                acc = r;
            } else {
                return acc;
            }
        }
    }

    Item unary() {
        skip_ws();
        const std::size_t pos = i_;
        if (accept('-')) {
            Item it = unary();
            if (it.special == Item::Special::Reciprocal) {
                it.scale = -it.scale;
                return it;
            }
            return wrap(make_neg(plain(it)), pos);
        }
        if (accept('+')) return unary();
        return power();
    }

    Rational exponent_value() {
        skip_ws();
        const std::size_t pos = i_;
        Item e;
        if (accept('(')) {
            e = expr();
            expect(')');
        } else if (accept('-')) {
            e = wrap(make_neg(plain(primary())), pos);
        } else {
            e = primary();
        }
        auto c = e.node ? constant_of(e.node) : std::nullopt;
        if (!c) throw ParseError("exponent must be a rational constant", pos);
        return *c;
    }

    Item power() {
        Item base = primary();
        skip_ws();
        const std::size_t pos = i_;
        if (!accept('^')) return base;
        const Rational e = exponent_value();
        if (base.special == Item::Special::AbsPower) {
            if (e.sign() <= 0) throw ParseError("exponent of abs() must be positive", pos);
            Item out = base;
            out.alpha = base.alpha * e;
            out.node = (e.is_integer() && base.node) ? make_power(base.node, static_cast<unsigned>(e.num().get_ui()))
                                                      : nullptr;
            out.pos = pos;
            return out;
        }
        if (!e.is_integer() || e.sign() < 0)
            throw ParseError("only non-negative integer exponents are supported here", pos);
        if (e.num() > 4096) throw ParseError("exponent too large", pos);
        return wrap(make_power(plain(base), static_cast<unsigned>(e.num().get_ui())), pos);
    }

    Item primary() {
        skip_ws();
        const std::size_t pos = i_;
        if (i_ >= s_.size()) throw ParseError("unexpected end of input", pos);
        const char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return wrap(make_const(number()), pos);
        if (accept('(')) {
            Item inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id;
            while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) id += s_[i_++];
            if (id == "x1" || id == "x2") return wrap(make_var(id == "x1" ? 1 : 2), pos);
            if (id == "abs" || id == "exp") {
                expect('(');
                Item arg = expr();
                expect(')');
                if (id == "abs") {
                    NodePtr n = make_unary(Kind::Abs, plain(arg));
                    Item out = wrap(n, pos);
                    if (arg.node->kind == Kind::Variable) {
                        out.special = Item::Special::AbsPower;
                        out.var = arg.node->var;
                    }
                    return out;
                }
                if (arg.special == Item::Special::Reciprocal) {
                    if (arg.scale != Rational(-1))
                        throw ParseError("only exp(-1/abs(x)^alpha) is supported as a flat atom", pos);
                    return wrap(make_flat(arg.var, arg.alpha), pos);
                }
                return wrap(make_unary(Kind::Exp, plain(arg)), pos);
            }
            throw ParseError("unknown identifier '" + id + "'", pos);
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos);
    }

    Rational number() {
        const std::size_t start = i_;
        std::string digits, frac;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) digits += s_[i_++];
        if (i_ < s_.size() && s_[i_] == '.') {
            ++i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) frac += s_[i_++];
        }
        if (digits.empty() && frac.empty()) throw ParseError("malformed number", start);
        mpz_class num(digits.empty() ? "0" : digits);
        mpz_class den = 1;
        for (char f : frac) {
            num = num * 10 + (f - '0');
            den *= 10;
        }
        return Rational(num, den);
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------------------
// Numeric evaluation

struct Dual2 {
    double v, d1, d2;
};

inline Dual2 operator+(Dual2 a, Dual2 b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Dual2 operator*(Dual2 a, Dual2 b) { return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + a.v * b.d2}; }
inline Dual2 operator-(Dual2 a) { return {-a.v, -a.d1, -a.d2}; }
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }

inline double scalar_of(double x) { return x; }
inline double scalar_of(Dual2 x) { return x.v; }
inline double scalar_of(Dual x) { return x.v; }

// f(x) with derivative fp(x) applied by the chain rule.
inline double lift(double x, double f, double) { (void)x; return f; }
inline Dual2 lift(Dual2 x, double f, double fp) { return {f, fp * x.d1, fp * x.d2}; }
inline Dual lift(Dual x, double f, double fp) { return {f, fp * x.d}; }

template <class T>
T constant_as(double c) {
    if constexpr (std::is_same_v<T, double>) return c;
    else if constexpr (std::is_same_v<T, Dual2>) return Dual2{c, 0.0, 0.0};
    else return Dual{c, 0.0};
}

// exp(-1/|x|^alpha) and its derivative alpha |x|^(-alpha-1) sign(x) exp(-1/|x|^alpha).
inline std::pair<double, double> flat_value(double x, double alpha) {
    if (x == 0.0) return {0.0, 0.0};
    const double ax = std::fabs(x);
    const double t = std::pow(ax, alpha);
    const double f = std::exp(-1.0 / t);
    if (f == 0.0) return {0.0, 0.0};
    const double fp = f * alpha * t / (ax * t * t) * (x > 0 ? 1.0 : -1.0);
    return {f, fp};
}

template <class T>
T eval_node(const Node& n, const T& x1, const T& x2) {
    switch (n.kind) {
        case Kind::Variable: return n.var == 1 ? x1 : x2;
        case Kind::Constant: return constant_as<T>(n.value.to_double());
        case Kind::Sum: {
            T acc = constant_as<T>(0.0);
            for (const auto& k : n.kids) acc = acc + eval_node(*k, x1, x2);
            return acc;
        }
        case Kind::Product: {
            T acc = constant_as<T>(1.0);
            for (const auto& k : n.kids) acc = acc * eval_node(*k, x1, x2);
            return acc;
        }
        case Kind::Power: {
            const T b = eval_node(*n.kids[0], x1, x2);
            T acc = constant_as<T>(1.0);
            T base = b;
            unsigned e = n.exponent;
            while (e) {
                if (e & 1U) acc = acc * base;
                e >>= 1U;
                if (e) base = base * base;
            }
            return acc;
        }
        case Kind::Negate: return -eval_node(*n.kids[0], x1, x2);
        case Kind::Abs: {
            const T a = eval_node(*n.kids[0], x1, x2);
            const double v = scalar_of(a);
            return lift(a, std::fabs(v), v >= 0 ? 1.0 : -1.0);
        }
        case Kind::Exp: {
            const T a = eval_node(*n.kids[0], x1, x2);
            const double f = std::exp(scalar_of(a));
            return lift(a, f, f);
        }
        case Kind::Flat: {
            const T& x = n.var == 1 ? x1 : x2;
            auto [f, fp] = flat_value(scalar_of(x), n.value.to_double());
            return lift(x, f, fp);
        }
    }
    throw std::logic_error("unreachable");
}

bool mentions(const Node& n, int var) {
    if ((n.kind == Kind::Variable || n.kind == Kind::Flat) && n.var == var) return true;
    for (const auto& k : n.kids)
        if (mentions(*k, var)) return true;
    return false;
}

bool polynomial_in_rec(const Node& n, int var) {
    switch (n.kind) {
        case Kind::Abs:
        case Kind::Exp: return !mentions(*n.kids[0], var);
        case Kind::Flat: return n.var != var;
        default:
            for (const auto& k : n.kids)
                if (!polynomial_in_rec(*k, var)) return false;
            return true;
    }
}

using DualPoly = std::vector<Dual>;

DualPoly poly_add(DualPoly a, const DualPoly& b) {
    if (b.size() > a.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] + b[i];
    return a;
}

DualPoly poly_mul(const DualPoly& a, const DualPoly& b) {
    DualPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

DualPoly coeffs_rec(const Node& n, int var, double other) {
    switch (n.kind) {
        case Kind::Variable:
            if (n.var == var) return {Dual{0.0, 0.0}, Dual{1.0, 0.0}};
            return {Dual{other, 1.0}};
        case Kind::Constant: return {Dual{n.value.to_double(), 0.0}};
        case Kind::Sum: {
            DualPoly acc{Dual{}};
            for (const auto& k : n.kids) acc = poly_add(std::move(acc), coeffs_rec(*k, var, other));
            return acc;
        }
        case Kind::Product: {
            DualPoly acc{Dual{1.0, 0.0}};
            for (const auto& k : n.kids) acc = poly_mul(acc, coeffs_rec(*k, var, other));
            return acc;
        }
        case Kind::Power: {
            const DualPoly b = coeffs_rec(*n.kids[0], var, other);
            DualPoly acc{Dual{1.0, 0.0}};
            for (unsigned i = 0; i < n.exponent; ++i) acc = poly_mul(acc, b);
            return acc;
        }
        case Kind::Negate: {
            DualPoly a = coeffs_rec(*n.kids[0], var, other);
            for (auto& c : a) c = -c;
            return a;
        }
        case Kind::Abs:
        case Kind::Exp:
        case Kind::Flat: {
            const Dual o{other, 1.0};
            const Dual dummy{0.0, 0.0};
            const Dual v = var == 1 ? eval_node<Dual>(n, dummy, o) : eval_node<Dual>(n, o, dummy);
            return {v};
        }
    }
    throw std::logic_error("unreachable");
}

struct TaylorPart {
    BivarPoly poly;
    bool flat = false;
};

TaylorPart taylor_rec(const Node& n) {
    switch (n.kind) {
        case Kind::Variable: return {n.var == 1 ? BivarPoly::x1() : BivarPoly::x2(), false};
        case Kind::Constant: return {BivarPoly::constant(n.value), false};
        case Kind::Sum: {
            TaylorPart acc;
            for (const auto& k : n.kids) {
                TaylorPart t = taylor_rec(*k);
                acc.poly += t.poly;
                acc.flat = acc.flat || t.flat;
            }
            return acc;
        }
        case Kind::Product: {
            TaylorPart acc{BivarPoly::constant(Rational(1)), false};
            for (const auto& k : n.kids) {
                TaylorPart t = taylor_rec(*k);
                acc.poly = acc.poly * t.poly;
                acc.flat = acc.flat || t.flat;
            }
            return acc;
        }
        case Kind::Power: {
            TaylorPart b = taylor_rec(*n.kids[0]);
            return {b.poly.pow(n.exponent), b.flat};
        }
        case Kind::Negate: {
            TaylorPart a = taylor_rec(*n.kids[0]);
            return {-a.poly, a.flat};
        }
        case Kind::Exp: {
            TaylorPart a = taylor_rec(*n.kids[0]);
            if (!a.poly.is_zero())
                throw NotPolynomialError("exp() of a non-flat expression has no finite Taylor expansion");
            return {BivarPoly::constant(Rational(1)), a.flat};
        }
        case Kind::Abs: {
            TaylorPart a = taylor_rec(*n.kids[0]);
            if (!a.poly.is_zero())
                throw NotPolynomialError("abs() of a non-flat expression has no polynomial Taylor expansion");
            return {BivarPoly{}, a.flat};
        }
        case Kind::Flat: return {BivarPoly{}, true};
    }
    throw std::logic_error("unreachable");
}

void flats_rec(const Node& n, std::vector<FlatAtom>& out) {
    if (n.kind == Kind::Flat) out.push_back({n.var, n.value});
    for (const auto& k : n.kids) flats_rec(*k, out);
}

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Sum: return 1;
        case Kind::Negate: return 2;
        case Kind::Product: return 3;
        case Kind::Power: return 4;
        case Kind::Constant: return n.value.is_integer() && n.value.sign() >= 0 ? 5 : 3;
        default: return 5;
    }
}

std::string print(const Node& n);

std::string print_at(const Node& n, int min_prec) {
    std::string s = print(n);
    return precedence(n) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Node& n) {
    switch (n.kind) {
        case Kind::Variable: return n.var == 1 ? "x1" : "x2";
        case Kind::Constant: return n.value.str();
        case Kind::Sum: {
            std::string out;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                const Node& k = *n.kids[i];
                if (i == 0) {
                    out += print_at(k, 2);
                } else if (k.kind == Kind::Negate) {
                    out += " - " + print_at(*k.kids[0], 2);
                } else {
                    out += " + " + print_at(k, 2);
                }
            }
            return out;
        }
        case Kind::Negate: return "-" + print_at(*n.kids[0], 3);
        case Kind::Product: {
            std::string out;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += "*";
                out += print_at(*n.kids[i], 4);
            }
            return out;
        }
        case Kind::Power: return print_at(*n.kids[0], 5) + "^" + std::to_string(n.exponent);
        case Kind::Abs: return "abs(" + print(*n.kids[0]) + ")";
        case Kind::Exp: return "exp(" + print(*n.kids[0]) + ")";
        case Kind::Flat: {
            std::string out = std::string("exp(-1/abs(x") + (n.var == 1 ? "1" : "2") + ")";
            if (n.value != Rational(1)) {
                out += n.value.is_integer() ? "^" + n.value.str() : "^(" + n.value.str() + ")";
            }
            return out + ")";
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

PhaseExpr::PhaseExpr(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw std::invalid_argument("empty expression");
}

PhaseExpr PhaseExpr::from_polynomial(const BivarPoly& p) {
    NodePtr acc = make_const(Rational(0));
    for (const auto& [e, c] : p.terms()) {
        NodePtr term = make_const(c);
        if (e.j) term = make_product(term, make_power(make_var(1), static_cast<unsigned>(e.j)));
        if (e.k) term = make_product(term, make_power(make_var(2), static_cast<unsigned>(e.k)));
        acc = make_sum(acc, term);
    }
    return PhaseExpr(acc);
}

std::string PhaseExpr::str() const { return print(*root_); }

double PhaseExpr::eval(double x1, double x2) const {
    const double v = eval_node<double>(*root_, x1, x2);
    if (!std::isfinite(v)) throw EvaluationError("phase is not finite at (" + std::to_string(x1) + ", " +
                                                 std::to_string(x2) + ")");
    return v;
}

ValueGradient PhaseExpr::eval_with_gradient(double x1, double x2) const {
    const Dual2 r = eval_node<Dual2>(*root_, Dual2{x1, 1.0, 0.0}, Dual2{x2, 0.0, 1.0});
    if (!std::isfinite(r.v) || !std::isfinite(r.d1) || !std::isfinite(r.d2))
        throw EvaluationError("phase gradient is not finite");
    return {r.v, r.d1, r.d2};
}

bool PhaseExpr::polynomial_in(int var) const { return polynomial_in_rec(*root_, var); }

std::vector<Dual> PhaseExpr::coefficients_in(int var, double other) const {
    DualPoly c = coeffs_rec(*root_, var, other);
    while (c.size() > 1 && c.back().v == 0.0 && c.back().d == 0.0) c.pop_back();
    return c;
}

std::vector<FlatAtom> PhaseExpr::flat_atoms() const {
    std::vector<FlatAtom> out;
    flats_rec(*root_, out);
    return out;
}

PhaseExpr::Taylor PhaseExpr::taylor() const {
    TaylorPart t = taylor_rec(*root_);
    return {std::move(t.poly), t.flat};
}

PhaseExpr parse_phase(const std::string& src) { return Parser(src).run(); }

}  // namespace osclab
