#pragma once

#include "osclab/adapt.hpp"
#include "osclab/rational.hpp"

#include <complex>
#include <optional>
#include <string>

namespace osclab {

/// Gamma(x) for real x (Lanczos, g = 7, 9 terms; reflection below 1/2).
double lanczos_gamma(double x);

/// C_d = Gamma(1/d)/d * exp(i pi / (2d)).
std::complex<double> c_d_constant(int d);

struct DecayPrediction {
    Rational exponent;  ///< 1/h
    int log_power;      ///< nu
    std::string statement;
};

DecayPrediction predict_decay(const Rational& h, int nu);

struct RestrictionExponent {
    Rational p_c_dual;  ///< 2h + 2
    Rational p_c;       ///< (2h + 2) / (2h + 1)
};

RestrictionExponent restriction_exponent(const Rational& h);

struct LimitConstant {
    enum class Kind { ClosedForm, NumericOnly, NotApplicable };
    Kind kind = Kind::NotApplicable;
    std::complex<double> value;      ///< c_+ from the closed form as stated with the formula
    std::complex<double> corrected;  ///< c_+ with the dyadic-length factor 4 C_d (b-a)/(d (1+a)(1+b))
    int d = 0;
    std::complex<double> c_d;
    std::optional<Rational> a;  ///< ratio of the edge above the bisectrix (absent: unbounded)
    std::optional<Rational> b;  ///< ratio of the edge below the bisectrix (absent: unbounded)
    double f = 0.0;             ///< factor used with the stated formula
    double f_corrected = 0.0;   ///< (b-a)/((1+a)(1+b)), limits taken for unbounded edges
    bool conjugated = false;    ///< vertex coefficient negative: c_+ and c_- exchanged
    double scale = 1.0;         ///< |vertex coefficient|^(-1/d) folded into value
    std::string parity;
    std::string formula;
    std::string note;
    std::complex<double> minus() const { return std::conj(value); }
};

std::string limit_kind_name(LimitConstant::Kind k);

/// Closed-form lambda^{1/h}/(log lambda)^nu J_+(lambda) limit for eta(0) = 1.
/// `super_adapted` must be adapted coordinates (normally super_adapt(adapted.phi_a).phi).
LimitConstant limit_constant(const AdaptedResult& adapted, const AlgPoly& super_adapted);

/// Convenience: runs super_adapt when the adapted face is a vertex.
LimitConstant limit_constant(const AdaptedResult& adapted);

}  // namespace osclab
