#include "osclab/phase_program.hpp"

#include <cmath>

namespace osclab {

namespace {

using C = std::complex<double>;

double sgn_re(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }
double sgn_re(const C& z) { return sgn_re(z.real()); }

// f, f', f'' of a scalar function
template <class S>
struct F3 {
    S f, d1, d2;
};

template <class S>
F3<S> exp3(const S& x) {
    const S e = std::exp(x);
    return {e, e, e};
}

template <class S>
F3<S> abs3(const S& x) {
    const double s = sgn_re(x);
    return {x * s, S(s), S(0)};
}

// exp(-1/|x|^alpha) continued from the side of Re(x).
template <class S>
F3<S> flat3(const S& x, double alpha) {
    const double s = sgn_re(x);
    if (s == 0) return {S(0), S(0), S(0)};
    const S u = x * s;
    const S ua = std::pow(u, alpha);
    const S f = std::exp(-1.0 / ua);
    if (std::abs(f) == 0.0) return {S(0), S(0), S(0)};
    const S t = alpha / (ua * u);  // alpha u^(-alpha-1)
    const S d1 = s * t * f;
    const S d2 = f * (t * t - (alpha + 1.0) * t / u);
    return {f, d1, d2};
}

template <class S>
S ipow(S b, unsigned e) {
    S acc(1);
    while (e) {
        if (e & 1U) acc *= b;
        e >>= 1U;
        if (e) b *= b;
    }
    return acc;
}

template <class S>
F3<S> pow3(const S& x, unsigned n) {
    if (n == 0) return {S(1), S(0), S(0)};
    if (n == 1) return {x, S(1), S(0)};
    const S xm2 = ipow(x, n - 2);
    return {xm2 * x * x, double(n) * xm2 * x, double(n) * double(n - 1) * xm2};
}

// Scalar arithmetic
template <class S>
struct Scalar {
    using T = S;
    static T var(const T& x) { return x; }
    static T constant(double c) { return T(c); }
    static T add(const T& a, const T& b) { return a + b; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T neg(const T& a) { return -a; }
    static T apply(const T& x, const F3<S>& f) {
        (void)x;
        return f.f;
    }
    static S val(const T& x) { return x; }
};

template <class S>
struct JetOps {
    using T = Jet<S>;
    static T constant(double c) { return T{S(c), S(0), S(0), S(0), S(0), S(0)}; }
    static T add(const T& a, const T& b) {
        return {a.v + b.v, a.g1 + b.g1, a.g2 + b.g2, a.h11 + b.h11, a.h12 + b.h12, a.h22 + b.h22};
    }
    static T mul(const T& a, const T& b) {
        return {a.v * b.v,
                a.g1 * b.v + a.v * b.g1,
                a.g2 * b.v + a.v * b.g2,
                a.h11 * b.v + 2.0 * a.g1 * b.g1 + a.v * b.h11,
                a.h12 * b.v + a.g1 * b.g2 + a.g2 * b.g1 + a.v * b.h12,
                a.h22 * b.v + 2.0 * a.g2 * b.g2 + a.v * b.h22};
    }
    static T neg(const T& a) { return {-a.v, -a.g1, -a.g2, -a.h11, -a.h12, -a.h22}; }
    static T apply(const T& x, const F3<S>& f) {
        return {f.f,
                f.d1 * x.g1,
                f.d1 * x.g2,
                f.d2 * x.g1 * x.g1 + f.d1 * x.h11,
                f.d2 * x.g1 * x.g2 + f.d1 * x.h12,
                f.d2 * x.g2 * x.g2 + f.d1 * x.h22};
    }
    static S val(const T& x) { return x.v; }
};

template <class Ops, class S>
typename Ops::T execute(const std::vector<PhaseProgram::Instr>& code, const typename Ops::T& x1,
                        const typename Ops::T& x2) {
    using T = typename Ops::T;
    using Op = PhaseProgram::Op;
    std::vector<T> st;
    st.reserve(16);
    for (const auto& in : code) {
        switch (in.op) {
            case Op::Var: st.push_back(in.var == 1 ? x1 : x2); break;
            case Op::Const: st.push_back(Ops::constant(in.c)); break;
            case Op::Add:
            case Op::Mul: {
                const std::size_t base = st.size() - in.n;
                T acc = st[base];
                for (std::size_t i = base + 1; i < st.size(); ++i)
                    acc = in.op == Op::Add ? Ops::add(acc, st[i]) : Ops::mul(acc, st[i]);
                st.resize(base);
                st.push_back(acc);
                break;
            }
            case Op::Pow: st.back() = Ops::apply(st.back(), pow3(Ops::val(st.back()), in.n)); break;
            case Op::Neg: st.back() = Ops::neg(st.back()); break;
            case Op::Abs: st.back() = Ops::apply(st.back(), abs3(Ops::val(st.back()))); break;
            case Op::Exp: st.back() = Ops::apply(st.back(), exp3(Ops::val(st.back()))); break;
            case Op::Flat: {
                const T& x = in.var == 1 ? x1 : x2;
                st.push_back(Ops::apply(x, flat3(Ops::val(x), in.c)));
                break;
            }
        }
    }
    return st.back();
}

void compile(const PhaseExpr::Node& n, std::vector<PhaseProgram::Instr>& code, bool& analytic, bool& f1,
             bool& f2) {
    using K = PhaseExpr::Kind;
    using Op = PhaseProgram::Op;
    for (const auto& k : n.kids) compile(*k, code, analytic, f1, f2);
    switch (n.kind) {
        case K::Variable: code.push_back({Op::Var, n.var, 0, 0.0}); break;
        case K::Constant: code.push_back({Op::Const, 0, 0, n.value.to_double()}); break;
        case K::Sum: code.push_back({Op::Add, 0, static_cast<unsigned>(n.kids.size()), 0.0}); break;
        case K::Product: code.push_back({Op::Mul, 0, static_cast<unsigned>(n.kids.size()), 0.0}); break;
        case K::Power: code.push_back({Op::Pow, 0, n.exponent, 0.0}); break;
        case K::Negate: code.push_back({Op::Neg, 0, 0, 0.0}); break;
        case K::Abs:
            analytic = false;
            code.push_back({Op::Abs, 0, 0, 0.0});
            break;
        case K::Exp: code.push_back({Op::Exp, 0, 0, 0.0}); break;
        case K::Flat:
            (n.var == 1 ? f1 : f2) = true;
            code.push_back({Op::Flat, n.var, 0, n.value.to_double()});
            break;
    }
}

}  // namespace

PhaseProgram::PhaseProgram(const PhaseExpr& e) {
    if (!e.root()) throw std::invalid_argument("empty phase");
    compile(*e.root(), code_, analytic_, flat1_, flat2_);
}

double PhaseProgram::value(double x1, double x2) const { return execute<Scalar<double>, double>(code_, x1, x2); }

C PhaseProgram::value(C z1, C z2) const { return execute<Scalar<C>, C>(code_, z1, z2); }

Jet<double> PhaseProgram::jet(double x1, double x2) const {
    return execute<JetOps<double>, double>(code_, Jet<double>{x1, 1, 0, 0, 0, 0}, Jet<double>{x2, 0, 1, 0, 0, 0});
}

Jet<C> PhaseProgram::jet(C z1, C z2) const {
    return execute<JetOps<C>, C>(code_, Jet<C>{z1, 1.0, 0.0, 0.0, 0.0, 0.0}, Jet<C>{z2, 0.0, 1.0, 0.0, 0.0, 0.0});
}

}  // namespace osclab
