#include "osclab/algebraic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace osclab {

NumberField::NumberField(RealRoot alpha) : alpha_(std::move(alpha)), modulus_(alpha_.defining().monic()) {
    if (alpha_.is_rational()) modulus_ = UPoly::linear_root(*alpha_.exact());
}

bool NumberField::vanishes_at_generator(const UPoly& p) const {
    if (p.is_zero()) return true;
    const UPoly g = gcd(p, modulus_);
    if (g.degree() < 1) return false;
    if (alpha_.is_rational()) return g(*alpha_.exact()).is_zero();
    // Roots of g are roots of the modulus, and (lo, hi) isolates alpha among those.
    return count_roots(sturm_chain(g), alpha_.lo(), alpha_.hi()) == 1;
}

std::string NumberField::describe() const { return alpha_.str(); }

AlgebraicNumber::AlgebraicNumber(std::shared_ptr<const NumberField> field, const UPoly& value)
    : field_(std::move(field)), value_(field_ ? field_->reduce(value) : value) {
    if (value_.degree() <= 0) field_.reset();
}

AlgebraicNumber AlgebraicNumber::generator(std::shared_ptr<const NumberField> field) {
    return AlgebraicNumber(std::move(field), UPoly(std::vector<Rational>{Rational(0), Rational(1)}));
}

Rational AlgebraicNumber::rational() const {
    if (!is_rational()) throw std::logic_error("algebraic number is not rational");
    return value_.coeff(0);
}

std::shared_ptr<const NumberField> AlgebraicNumber::common(const AlgebraicNumber& a,
                                                           const AlgebraicNumber& b) {
    if (!a.field_) return b.field_;
    if (!b.field_ || a.field_ == b.field_) return a.field_;
    throw std::logic_error("arithmetic between elements of different number fields");
}

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return AlgebraicNumber(AlgebraicNumber::common(a, b), a.value_ + b.value_);
}

AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return AlgebraicNumber(AlgebraicNumber::common(a, b), a.value_ - b.value_);
}

AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return AlgebraicNumber(AlgebraicNumber::common(a, b), a.value_ * b.value_);
}

AlgebraicNumber operator-(const AlgebraicNumber& a) {
    return AlgebraicNumber(a.field_, a.value_ * Rational(-1));
}

bool AlgebraicNumber::is_zero() const {
    if (!field_) return value_.is_zero();
    return field_->vanishes_at_generator(value_);
}

int AlgebraicNumber::sign() const {
    if (!field_) return value_.is_zero() ? 0 : value_.leading().sign();
    if (is_zero()) return 0;
    // Shrink the generator's interval until the representative has no root across it.
    RealRoot alpha = field_->generator();
    const UPoly sq = gcd(value_, value_.derivative()).degree() > 0
                         ? divmod(value_, gcd(value_, value_.derivative())).first
                         : value_;
    const auto chain = sturm_chain(sq);
    Rational width = (alpha.hi() - alpha.lo()) / Rational(2);
    for (;;) {
        if (alpha.is_rational()) return value_(*alpha.exact()).sign();
        if (count_roots(chain, alpha.lo(), alpha.hi()) == 0) {
            const int s = value_.sign_at(alpha.hi());
            if (s != 0) return s;
        }
        alpha.refine(width);
        width = width / Rational(2);
    }
}

double AlgebraicNumber::to_double() const {
    if (!field_) return value_.is_zero() ? 0.0 : value_.coeff(0).to_double();
    RealRoot alpha = field_->generator();
    alpha.refine(Rational(mpz_class(1), mpz_class(1) << 80));
    // Evaluate at the (rational) midpoint exactly, then round once.
    const Rational mid = alpha.is_rational() ? *alpha.exact() : (alpha.lo() + alpha.hi()) / Rational(2);
    return value_(mid).to_double();
}

Rational AlgebraicNumber::abs_upper_bound() const {
    if (!field_) return value_.is_zero() ? Rational(0) : value_.coeff(0).abs();
    const double v = std::fabs(to_double());
    return Rational(mpz_class(static_cast<long>(std::ceil(v * 1024.0)) + 1), mpz_class(1024));
}

AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (!field_) return AlgebraicNumber(value_.coeff(0).inverse());
    // alpha is not a root of g = gcd(value, modulus), so it remains a root of modulus / g,
    // and value is invertible modulo that factor.
    const UPoly g = gcd(value_, field_->modulus());
    const UPoly reduced_mod = divmod(field_->modulus(), g).first;
    auto [one, s] = gcd_with_cofactor(value_, reduced_mod);
    if (one.degree() != 0) throw std::logic_error("algebraic inverse: unexpected common factor");
    return AlgebraicNumber(field_, s);
}

std::string AlgebraicNumber::str() const {
    if (!field_) return rational().str();
    std::ostringstream os;
    os << value_.str("a") << " where a = " << field_->describe();
    return os.str();
}

}  // namespace osclab
