#pragma once

#include "osclab/algebraic.hpp"
#include "osclab/rational.hpp"
#include "osclab/upoly.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace osclab {

/// Exponent pair (j, k) of the monomial x1^j x2^k.
struct Exponent {
    int j = 0;
    int k = 0;
    friend auto operator<=>(const Exponent&, const Exponent&) = default;
};

/// Graded lexicographic order by (j + k, j); fixes the printing order.
struct GradedLex {
    bool operator()(const Exponent& a, const Exponent& b) const {
        if (a.j + a.k != b.j + b.k) return a.j + a.k < b.j + b.k;
        return a.j < b.j;
    }
};

using Support = std::set<Exponent, GradedLex>;

/// Sparse bivariate polynomial in x1, x2 over an exact real field K. Zero coefficients are
/// never stored; the zero polynomial is the empty map.
template <class K>
class Poly2 {
public:
    using Terms = std::map<Exponent, K, GradedLex>;

    Poly2() = default;
    static Poly2 monomial(const K& c, int j, int k) {
        Poly2 p;
        p.add_term(c, j, k);
        return p;
    }
    static Poly2 constant(const K& c) { return monomial(c, 0, 0); }
    static Poly2 x1() { return monomial(K(1), 1, 0); }
    static Poly2 x2() { return monomial(K(1), 0, 1); }

    void add_term(const K& c, int j, int k) {
        if (j < 0 || k < 0) throw std::invalid_argument("negative exponent");
        auto [it, inserted] = terms_.try_emplace(Exponent{j, k}, c);
        if (!inserted) it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    K coeff(int j, int k) const {
        auto it = terms_.find(Exponent{j, k});
        return it == terms_.end() ? K(0) : it->second;
    }
    Support support() const {
        Support s;
        for (const auto& [e, c] : terms_) s.insert(e);
        return s;
    }
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e.j + e.k);
        return d;
    }
    int degree_x1() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e.j);
        return d;
    }
    int degree_x2() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e.k);
        return d;
    }

    Poly2& operator+=(const Poly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(c, e.j, e.k);
        return *this;
    }
    Poly2& operator-=(const Poly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(-c, e.j, e.k);
        return *this;
    }
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator-(const Poly2& a) { return a * K(-1); }
    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ca * cb, ea.j + eb.j, ea.k + eb.k);
        return out;
    }
    friend Poly2 operator*(const Poly2& a, const K& s) {
        Poly2 out;
        if (s.is_zero()) return out;
        for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, c * s);
        return out;
    }
    friend bool operator==(const Poly2& a, const Poly2& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ib = b.terms_.begin();
        for (auto ia = a.terms_.begin(); ia != a.terms_.end(); ++ia, ++ib)
            if (!(ia->first == ib->first) || !(ia->second - ib->second).is_zero()) return false;
        return true;
    }

    Poly2 pow(unsigned e) const {
        Poly2 result = constant(K(1)), base = *this;
        while (e) {
            if (e & 1U) result = result * base;
            e >>= 1U;
            if (e) base = base * base;
        }
        return result;
    }

    /// p(x2, x1)
    Poly2 transposed() const {
        Poly2 out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(Exponent{e.k, e.j}, c);
        return out;
    }

    /// p(y1, y2 + c*y1^m), computed exactly by binomial expansion.
    Poly2 shear(const K& c, int m) const {
        if (m < 1) throw std::invalid_argument("shear exponent must be >= 1");
        if (c.is_zero()) return *this;
        Poly2 out;
        for (const auto& [e, coef] : terms_) {
            K binom(1);
            K cpow(1);
            for (int i = 0; i <= e.k; ++i) {
                // C(k, i) c^i y1^(j + m i) y2^(k - i)
                out.add_term(coef * binom * cpow, e.j + m * i, e.k - i);
                binom = binom * K(Rational(e.k - i)) * K(Rational(1) / Rational(i + 1));
                cpow = cpow * c;
            }
        }
        return out;
    }

    /// Terms whose exponent satisfies pred.
    template <class Pred>
    Poly2 filtered(Pred pred) const {
        Poly2 out;
        for (const auto& [e, c] : terms_)
            if (pred(e)) out.terms_.emplace(e, c);
        return out;
    }

    /// p(s1, t) as a polynomial in t, for s1 in {+1, -1}.
    UPolyT<K> restrict_x1(int s1) const {
        std::vector<K> c(static_cast<std::size_t>(std::max(0, degree_x2() + 1)), K(0));
        for (const auto& [e, coef] : terms_) {
            const bool neg = s1 < 0 && (e.j % 2 == 1);
            c[static_cast<std::size_t>(e.k)] = c[static_cast<std::size_t>(e.k)] + (neg ? -coef : coef);
        }
        return UPolyT<K>(std::move(c));
    }
    /// p(t, s2) as a polynomial in t, for s2 in {+1, -1}.
    UPolyT<K> restrict_x2(int s2) const { return transposed().restrict_x1(s2); }

    template <class X>
    X eval(const X& x1v, const X& x2v) const {
        X acc(0);
        for (const auto& [e, c] : terms_) {
            X term(c);
            for (int i = 0; i < e.j; ++i) term = term * x1v;
            for (int i = 0; i < e.k; ++i) term = term * x2v;
            acc = acc + term;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            std::string cs = coefficient_text(c);
            const bool negative = c.sign() < 0;
            if (negative && cs.front() == '-') cs.erase(0, 1);
            if (first) {
                if (negative) os << "-";
            } else {
                os << (negative ? " - " : " + ");
            }
            first = false;
            const bool unit = cs == "1";
            const bool bare = e.j == 0 && e.k == 0;
            if (!unit || bare) os << cs;
            bool need_star = !unit && !bare;
            auto var = [&](const char* name, int p) {
                if (p == 0) return;
                if (need_star) os << "*";
                os << name;
                if (p > 1) os << "^" << p;
                need_star = true;
            };
            var("x1", e.j);
            var("x2", e.k);
        }
        return os.str();
    }

private:
    static std::string coefficient_text(const K& c) {
        std::string s = c.str();
        if (s.find_first_of("/ ") != std::string::npos || s.find('*') != std::string::npos) {
            // Keep rational literals parseable: "3/2*x1" reads as (3/2)*x1 in the grammar.
            if (s.find(' ') != std::string::npos) return "(" + s + ")";
        }
        return s;
    }

    Terms terms_;
};

using BivarPoly = Poly2<Rational>;
using AlgPoly = Poly2<AlgebraicNumber>;

/// Exact set of exponent pairs with nonzero coefficient.
template <class K>
Support taylor_support(const Poly2<K>& p) {
    return p.support();
}

/// p(y1, y2 + c*y1^m).
template <class K>
Poly2<K> shear_substitute(const Poly2<K>& p, const K& c, int m) {
    return p.shear(c, m);
}

AlgPoly to_algebraic(const BivarPoly& p);
/// Throws std::logic_error if a coefficient is irrational.
BivarPoly to_rational(const AlgPoly& p);
bool all_rational(const AlgPoly& p);

}  // namespace osclab
