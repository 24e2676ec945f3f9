#pragma once

#include "osclab/bivar_poly.hpp"
#include "osclab/rational.hpp"

#include <stdexcept>

namespace osclab {

/// Weight kappa = (k1, k2) with k1, k2 > 0, inducing the dilations
/// (x1, x2) -> (r^k1 x1, r^k2 x2).
struct Weight {
    Rational k1;
    Rational k2;
    /// True when the coordinates were exchanged to achieve k1 <= k2.
    bool swapped = false;

    Weight(Rational a, Rational b, bool was_swapped = false)
        : k1(std::move(a)), k2(std::move(b)), swapped(was_swapped) {
        if (k1.sign() <= 0 || k2.sign() <= 0) throw std::invalid_argument("weight components must be positive");
    }

    Rational degree_of(const Exponent& e) const { return k1 * Rational(e.j) + k2 * Rational(e.k); }
    Rational norm() const { return k1 + k2; }
    /// k2 / k1, the exponent of the curves x2 ~ x1^ratio preserved by the dilations.
    Rational ratio() const { return k2 / k1; }
    Weight oriented() const { return k1 <= k2 ? *this : Weight(k2, k1, !swapped); }
    friend bool operator==(const Weight& a, const Weight& b) { return a.k1 == b.k1 && a.k2 == b.k2; }
};

/// Sum of the terms of minimal kappa-degree (all of them when several tie).
/// Throws std::invalid_argument for the zero polynomial.
template <class K>
Poly2<K> kappa_principal_part(const Poly2<K>& p, const Weight& w) {
    if (p.is_zero()) throw std::invalid_argument("kappa principal part of the zero polynomial");
    Rational best = w.degree_of(p.terms().begin()->first);
    for (const auto& [e, c] : p.terms()) {
        Rational d = w.degree_of(e);
        if (d < best) best = d;
    }
    return p.filtered([&](const Exponent& e) { return w.degree_of(e) == best; });
}

/// Minimal kappa-degree over the support.
template <class K>
Rational kappa_order(const Poly2<K>& p, const Weight& w) {
    if (p.is_zero()) throw std::invalid_argument("kappa order of the zero polynomial");
    Rational best = w.degree_of(p.terms().begin()->first);
    for (const auto& [e, c] : p.terms()) {
        Rational d = w.degree_of(e);
        if (d < best) best = d;
    }
    return best;
}

}  // namespace osclab
