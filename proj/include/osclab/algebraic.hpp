#pragma once

#include "osclab/real_roots.hpp"

#include <memory>
#include <string>

namespace osclab {

/// Q(alpha) for a real algebraic alpha. The modulus is the square-free polynomial alpha was
/// isolated from; it need not be irreducible. Zero tests and inverses go through gcds with
/// the modulus and are decided at alpha itself, so every element behaves as its real value.
class NumberField {
public:
    explicit NumberField(RealRoot alpha);

    const UPoly& modulus() const { return modulus_; }
    const RealRoot& generator() const { return alpha_; }
    /// True iff p(alpha) = 0.
    bool vanishes_at_generator(const UPoly& p) const;
    UPoly reduce(const UPoly& p) const { return divmod(p, modulus_).second; }
    std::string describe() const;

private:
    RealRoot alpha_;
    UPoly modulus_;
};

/// Element of a real number field, or a plain rational when no field is attached.
/// Mixing elements from two distinct fields throws std::logic_error.
class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    AlgebraicNumber(long v) : value_(UPoly::constant(Rational(v))) {}  // NOLINT
    AlgebraicNumber(int v) : value_(UPoly::constant(Rational(v))) {}   // NOLINT
    AlgebraicNumber(const Rational& r) : value_(UPoly::constant(r)) {}  // NOLINT
    AlgebraicNumber(std::shared_ptr<const NumberField> field, const UPoly& value);
    /// The generator alpha of the field.
    static AlgebraicNumber generator(std::shared_ptr<const NumberField> field);

    bool is_rational() const { return value_.degree() <= 0; }
    /// Only valid when is_rational().
    Rational rational() const;
    const std::shared_ptr<const NumberField>& field() const { return field_; }
    const UPoly& representative() const { return value_; }

    bool is_zero() const;
    int sign() const;
    double to_double() const;
    Rational abs_upper_bound() const;
    AlgebraicNumber inverse() const;
    std::string str() const;

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator-(const AlgebraicNumber& a);
    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return (a - b).is_zero();
    }

private:
    static std::shared_ptr<const NumberField> common(const AlgebraicNumber& a,
                                                     const AlgebraicNumber& b);
    std::shared_ptr<const NumberField> field_;
    UPoly value_;
};

}  // namespace osclab
