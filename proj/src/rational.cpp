#include "osclab/rational.hpp"

#include <stdexcept>

namespace osclab {

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(mpz_class(s), mpz_class(1));
        return Rational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    }
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(v_.get_den(), v_.get_num());
}

mpz_class Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

Rational pow(const Rational& r, unsigned e) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), r.raw().get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), r.raw().get_den_mpz_t(), e);
    return Rational(n, d);
}

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

namespace {

// Stern-Brocot descent on continued fractions; both bounds non-negative.
Rational simplest_nonneg(const Rational& lo, const Rational& hi) {
    const mpz_class fl = lo.floor();
    if (Rational(fl, 1) == lo) return lo;
    if (Rational(fl + 1, 1) <= hi) return Rational(fl + 1, 1);
    // lo and hi share the integer part fl; recurse on reciprocals of the fractional parts.
    const Rational frac_lo = lo - Rational(fl, 1);
    const Rational frac_hi = hi - Rational(fl, 1);
    const Rational inner = simplest_nonneg(frac_hi.inverse(), frac_lo.inverse());
    return Rational(fl, 1) + inner.inverse();
}

}  // namespace

Rational simplest_between(const Rational& lo, const Rational& hi) {
    if (hi < lo) throw std::invalid_argument("simplest_between: empty interval");
    if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
    if (hi.sign() < 0) return -simplest_nonneg(-hi, -lo);
    return simplest_nonneg(lo, hi);
}

}  // namespace osclab
