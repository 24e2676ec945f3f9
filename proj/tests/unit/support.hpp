#pragma once

#include "osclab/bivar_poly.hpp"
#include "osclab/phase_expr.hpp"

#include <random>

namespace testutil {

inline osclab::BivarPoly poly(const std::string& s) { return osclab::parse_phase(s).taylor().polynomial; }

inline osclab::Rational q(long n, long d = 1) { return osclab::Rational(n) / osclab::Rational(d); }

// Random polynomial with total degree <= deg and integer coefficients in [-9, 9].
inline osclab::BivarPoly random_poly(std::mt19937_64& rng, int deg, int terms, int min_order = 0) {
    std::uniform_int_distribution<int> coef(-9, 9), ex(0, deg);
    osclab::BivarPoly p;
    for (int t = 0; t < terms; ++t) {
        int j = ex(rng), k = ex(rng);
        if (j + k > deg || j + k < min_order) continue;
        p.add_term(osclab::Rational(coef(rng)), j, k);
    }
    return p;
}

}  // namespace testutil
