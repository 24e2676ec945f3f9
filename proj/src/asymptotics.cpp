#include "osclab/asymptotics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace osclab {

double lanczos_gamma(double x) {
    static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double pi = std::numbers::pi;
    if (x < 0.5) return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double a = c[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += c[static_cast<std::size_t>(i)] / (x + i);
    return std::sqrt(2 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

std::complex<double> c_d_constant(int d) {
    if (d < 1) throw std::invalid_argument("C_d needs d >= 1");
    return lanczos_gamma(1.0 / d) / d * std::polar(1.0, std::numbers::pi / (2.0 * d));
}

DecayPrediction predict_decay(const Rational& h, int nu) {
    if (h < Rational(1)) throw std::invalid_argument("height must be >= 1");
    DecayPrediction p{h.inverse(), nu, {}};
    std::ostringstream os;
    os << "|J(xi)| <= C";
    if (nu) os << " (log(2+|xi|))";
    os << " (1+|xi|)^(-" << p.exponent << ")";
    p.statement = os.str();
    return p;
}

RestrictionExponent restriction_exponent(const Rational& h) {
    const Rational dual = Rational(2) * h + Rational(2);
    return {dual, dual / (dual - Rational(1))};
}

std::string limit_kind_name(LimitConstant::Kind k) {
    switch (k) {
        case LimitConstant::Kind::ClosedForm: return "closed-form";
        case LimitConstant::Kind::NumericOnly: return "numeric-only";
        case LimitConstant::Kind::NotApplicable: return "not-applicable";
    }
    return "?";
}

LimitConstant limit_constant(const AdaptedResult& adapted, const AlgPoly& super_adapted) {
    LimitConstant lc;
    if (!adapted.principal.face.is_compact()) {
        lc.kind = LimitConstant::Kind::NotApplicable;
        lc.note = "principal face of the adapted phase is unbounded: the compactness hypothesis fails "
                  "(decay may carry extra non-power factors, e.g. x2^2+exp(-1/|x1|))";
        return lc;
    }
    if (adapted.principal.face.kind == FaceKind::CompactEdge) {
        lc.kind = LimitConstant::Kind::NumericOnly;
        lc.note = "compact-edge principal face: limit exists and depends only on the principal part; "
                  "no closed form, estimate with limit_ratio_series";
        return lc;
    }

    const NewtonPolyhedron np = build_polyhedron(super_adapted.support());
    const PrincipalData pd = newton_distance_and_face(np);
    if (pd.face.kind != FaceKind::Vertex) throw std::logic_error("super-adapted phase lost its vertex");
    const auto i = static_cast<std::size_t>(pd.face.index);
    const Exponent v = np.vertices[i];
    lc.kind = LimitConstant::Kind::ClosedForm;
    lc.d = v.j;
    lc.c_d = c_d_constant(lc.d);
    if (i > 0) lc.a = np.edges[i - 1].ratio();
    if (i < np.edges.size()) lc.b = np.edges[i].ratio();

    // Stated factor: (b-a)/(1+b); b unbounded -> 1; only a unbounded -> transpose, giving 1.
    if (lc.a && lc.b) lc.f = ((*lc.b - *lc.a) / (Rational(1) + *lc.b)).to_double();
    else lc.f = 1.0;
    // Length of the stretch of dyadic scales on which the vertex monomial dominates.
    const double a = lc.a ? lc.a->to_double() : 0.0;
    if (lc.b) lc.f_corrected = (lc.b->to_double() - a) / ((1 + a) * (1 + lc.b->to_double()));
    else lc.f_corrected = 1.0 / (1 + a);

    const bool even = lc.d % 2 == 0;
    lc.parity = even ? "even" : "odd";
    const std::complex<double> base = even ? 4.0 * lc.c_d : 2.0 * (lc.c_d + std::conj(lc.c_d));
    lc.formula = even ? "c_+ = 4 f C_d" : "c_+ = 2 f (C_d + conj(C_d))";

    const AlgebraicNumber coef = super_adapted.coeff(v.j, v.k);
    lc.conjugated = coef.sign() < 0;
    lc.scale = std::pow(std::abs(coef.to_double()), -1.0 / lc.d);
    std::complex<double> value = lc.f * base * lc.scale;
    std::complex<double> corrected = lc.f_corrected * base / static_cast<double>(lc.d) * lc.scale;
    if (lc.conjugated) {
        value = std::conj(value);
        corrected = std::conj(corrected);
    }
    lc.value = value;
    lc.corrected = corrected;
    return lc;
}

LimitConstant limit_constant(const AdaptedResult& adapted) {
    if (adapted.principal.face.kind != FaceKind::Vertex) return limit_constant(adapted, adapted.phi_a);
    return limit_constant(adapted, super_adapt(adapted.phi_a).phi);
}

}  // namespace osclab
