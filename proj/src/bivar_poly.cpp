#include "osclab/bivar_poly.hpp"

namespace osclab {

AlgPoly to_algebraic(const BivarPoly& p) {
    AlgPoly out;
    for (const auto& [e, c] : p.terms()) out.add_term(AlgebraicNumber(c), e.j, e.k);
    return out;
}

bool all_rational(const AlgPoly& p) {
    for (const auto& [e, c] : p.terms())
        if (!c.is_rational()) return false;
    return true;
}

BivarPoly to_rational(const AlgPoly& p) {
    BivarPoly out;
    for (const auto& [e, c] : p.terms()) out.add_term(c.rational(), e.j, e.k);
    return out;
}

}  // namespace osclab
