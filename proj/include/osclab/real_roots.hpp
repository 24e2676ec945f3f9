#pragma once

#include "osclab/upoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace osclab {

/// A real algebraic number: a square-free defining polynomial with rational coefficients
/// and an isolating interval (lo, hi) holding exactly one of its roots. Rational roots
/// carry the exact value and a degenerate interval.
class RealRoot {
public:
    /// Precondition: defining has opposite nonzero signs at lo and hi and a single root between.
    RealRoot(UPoly defining, Rational lo, Rational hi);
    static RealRoot exact_value(const Rational& v);

    bool is_rational() const { return exact_.has_value(); }
    const std::optional<Rational>& exact() const { return exact_; }
    const UPoly& defining() const { return def_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    /// Shrinks the isolating interval to width <= w (no-op for rational roots).
    void refine(const Rational& w);
    double approx() const;
    /// Sign of (root - x).
    int compare(const Rational& x) const;
    std::string str() const;

private:
    UPoly def_;
    Rational lo_, hi_;
    std::optional<Rational> exact_;
};

struct RootWithMultiplicity {
    RealRoot root;
    int multiplicity;
};

/// Distinct real roots of a square-free polynomial, sorted increasingly; rational roots are
/// reported exactly.
std::vector<RealRoot> isolate_real_roots(const UPoly& squarefree);

/// All real roots with exact multiplicities (square-free decomposition followed by Sturm
/// isolation), sorted by decreasing multiplicity and then increasing value.
/// Throws std::domain_error for the zero polynomial.
std::vector<RootWithMultiplicity> real_roots_with_multiplicity(const UPoly& q);

}  // namespace osclab
