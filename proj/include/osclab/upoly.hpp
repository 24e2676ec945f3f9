#pragma once

#include "osclab/rational.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace osclab {

/// Univariate polynomial over an exact real field K (Rational or AlgebraicNumber).
/// Coefficients are stored from degree 0 upwards; the leading coefficient is never zero.
template <class K>
class UPolyT {
public:
    UPolyT() = default;
    explicit UPolyT(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UPolyT constant(const K& c) { return UPolyT(std::vector<K>{c}); }
    /// t - root
    static UPolyT linear_root(const K& root) { return UPolyT(std::vector<K>{-root, K(1)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return K(0);
        return c_[static_cast<std::size_t>(i)];
    }
    const K& leading() const { return c_.back(); }

    template <class X>
    X eval(const X& x) const {
        X acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
        return acc;
    }
    K operator()(const Rational& x) const {
        K acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * K(x) + *it;
        return acc;
    }
    int sign_at(const Rational& x) const { return (*this)(x).sign(); }

    UPolyT derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<K> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * K(static_cast<long>(i));
        return UPolyT(std::move(d));
    }
    UPolyT monic() const {
        if (is_zero()) return {};
        const K inv = leading().inverse();
        UPolyT out = *this;
        for (auto& c : out.c_) c = c * inv;
        return out;
    }
    /// q(t) = p(-t)
    UPolyT reflected() const {
        UPolyT out = *this;
        for (std::size_t i = 1; i < out.c_.size(); i += 2) out.c_[i] = -out.c_[i];
        return out;
    }
    /// Multiplicity of the root t = 0 (0 for the zero polynomial).
    int zero_order() const {
        int k = 0;
        while (k < static_cast<int>(c_.size()) && c_[static_cast<std::size_t>(k)].is_zero()) ++k;
        return k;
    }

    UPolyT& operator+=(const UPolyT& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
        trim();
        return *this;
    }
    UPolyT& operator-=(const UPolyT& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
        trim();
        return *this;
    }
    friend UPolyT operator+(UPolyT a, const UPolyT& b) { return a += b; }
    friend UPolyT operator-(UPolyT a, const UPolyT& b) { return a -= b; }
    friend UPolyT operator*(const UPolyT& a, const UPolyT& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<K> out(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
        return UPolyT(std::move(out));
    }
    friend UPolyT operator*(UPolyT a, const K& s) {
        for (auto& c : a.c_) c = c * s;
        a.trim();
        return a;
    }
    friend bool operator==(const UPolyT& a, const UPolyT& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] - b.c_[i]).is_zero()) return false;
        return true;
    }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const K& c = c_[static_cast<std::size_t>(i)];
            if (c.is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            if (i >= 1) os << "*" << var;
            if (i >= 2) os << "^" << i;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

using UPoly = UPolyT<Rational>;

/// Quotient and remainder of Euclidean division; the divisor must be nonzero.
template <class K>
std::pair<UPolyT<K>, UPolyT<K>> divmod(const UPolyT<K>& a, const UPolyT<K>& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<K> rem = a.coeffs();
    const int db = b.degree();
    const int dq = a.degree() - db;
    if (dq < 0) return {UPolyT<K>(), a};
    std::vector<K> quot(static_cast<std::size_t>(dq + 1), K(0));
    const K inv = b.leading().inverse();
    for (int k = dq; k >= 0; --k) {
        const K q = rem[static_cast<std::size_t>(k + db)] * inv;
        quot[static_cast<std::size_t>(k)] = q;
        if (q.is_zero()) continue;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k + j)] =
                rem[static_cast<std::size_t>(k + j)] - q * b.coeffs()[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(db), K(0));
    return {UPolyT<K>(std::move(quot)), UPolyT<K>(std::move(rem))};
}

/// Monic greatest common divisor (zero iff both inputs are zero).
template <class K>
UPolyT<K> gcd(const UPolyT<K>& a, const UPolyT<K>& b) {
    UPolyT<K> x = a, y = b;
    while (!y.is_zero()) {
        UPolyT<K> r = divmod(x, y).second;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

/// Returns (g, s) with g = gcd(a, b) monic and s*a = g (mod b).
template <class K>
std::pair<UPolyT<K>, UPolyT<K>> gcd_with_cofactor(const UPolyT<K>& a, const UPolyT<K>& b) {
    UPolyT<K> r0 = a, r1 = b;
    UPolyT<K> s0 = UPolyT<K>::constant(K(1)), s1;
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        UPolyT<K> s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.is_zero()) return {r0, s0};
    const K inv = r0.leading().inverse();
    return {r0 * inv, s0 * inv};
}

template <class K>
struct SquareFreeFactorT {
    UPolyT<K> factor;  ///< monic, square-free, coprime with the other factors
    int multiplicity;
};
using SquareFreeFactor = SquareFreeFactorT<Rational>;

/// Yun's algorithm: p = lc * prod factor_i^{multiplicity_i} (characteristic zero).
template <class K>
std::vector<SquareFreeFactorT<K>> square_free_decomposition(const UPolyT<K>& p) {
    if (p.is_zero()) throw std::domain_error("square-free decomposition of the zero polynomial");
    std::vector<SquareFreeFactorT<K>> out;
    if (p.degree() == 0) return out;
    const UPolyT<K> dp = p.derivative();
    const UPolyT<K> a0 = gcd(p, dp);
    UPolyT<K> b = divmod(p, a0).first;
    UPolyT<K> d = divmod(dp, a0).first - b.derivative();
    for (int i = 1; b.degree() > 0; ++i) {
        const UPolyT<K> a = gcd(b, d);
        b = divmod(b, a).first;
        d = divmod(d, a).first - b.derivative();
        if (a.degree() > 0) out.push_back({a.monic(), i});
    }
    return out;
}

/// Sturm chain of a square-free polynomial.
template <class K>
std::vector<UPolyT<K>> sturm_chain(const UPolyT<K>& p) {
    std::vector<UPolyT<K>> chain{p, p.derivative()};
    while (!chain.back().is_zero()) {
        UPolyT<K> r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(r * K(-1));
    }
    if (chain.back().is_zero()) chain.pop_back();
    return chain;
}

/// Number of distinct real roots in the half-open interval (lo, hi].
template <class K>
int count_roots(const std::vector<UPolyT<K>>& chain, const Rational& lo, const Rational& hi) {
    auto variations = [&](const Rational& x) {
        int count = 0, prev = 0;
        for (const auto& q : chain) {
            const int s = q.sign_at(x);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    };
    return variations(lo) - variations(hi);
}

/// Cauchy bound: every complex root z satisfies |z| < bound.
template <class K>
Rational root_bound(const UPolyT<K>& p) {
    if (p.degree() < 1) return Rational(1);
    Rational m(0);
    for (int i = 0; i < p.degree(); ++i) {
        Rational r = (p.coeff(i) * p.leading().inverse()).abs_upper_bound();
        if (r > m) m = r;
    }
    return m + Rational(1);
}

/// Integer-coefficient primitive multiple with positive leading coefficient.
UPoly primitive_part(const UPoly& p);

}  // namespace osclab
