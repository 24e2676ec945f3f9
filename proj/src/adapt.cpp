#include "osclab/adapt.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace osclab {

namespace {

using AUPoly = UPolyT<AlgebraicNumber>;

bool rational_coefficients(const AUPoly& q) {
    for (int i = 0; i <= q.degree(); ++i)
        if (!q.coeff(i).is_rational()) return false;
    return true;
}

UPoly to_rational(const AUPoly& q) {
    std::vector<Rational> c;
    for (int i = 0; i <= q.degree(); ++i) c.push_back(q.coeff(i).rational());
    return UPoly(std::move(c));
}

bool has_real_root(const AUPoly& squarefree) {
    const Rational b = root_bound(squarefree);
    return count_roots(sturm_chain(squarefree), -b, b) > 0;
}

int max_real_multiplicity(const AUPoly& q) {
    if (q.is_zero()) throw std::logic_error("restriction vanishes identically");
    if (rational_coefficients(q)) {
        auto roots = real_roots_with_multiplicity(to_rational(q));
        return roots.empty() ? 0 : roots.front().multiplicity;
    }
    auto factors = square_free_decomposition(q);
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return a.multiplicity > b.multiplicity; });
    for (const auto& f : factors)
        if (has_real_root(f.factor)) return f.multiplicity;
    return 0;
}

// Negative, zero or positive as a < b, a == b, a > b.
int compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.is_rational() && b.is_rational()) {
        const Rational x = a.rational(), y = b.rational();
        return x < y ? -1 : (y < x ? 1 : 0);
    }
    if (!a.field() || !b.field() || a.field() == b.field()) return (a - b).sign();
    const double x = a.to_double(), y = b.to_double();
    return x < y ? -1 : (y < x ? 1 : 0);
}

AlgebraicNumber abs_of(const AlgebraicNumber& a) { return a.sign() < 0 ? -a : a; }

void check_homogeneous(const AlgPoly& p) {
    if (p.is_zero()) throw PreconditionError("zero polynomial");
    const auto& t = p.terms();
    if (t.size() == 1) return;
    // Collinear support on a line of negative slope.
    Exponent lo = t.begin()->first, hi = lo;
    for (const auto& [e, c] : t) {
        if (e.j < lo.j) lo = e;
        if (e.j > hi.j) hi = e;
    }
    const long dA = hi.j - lo.j, dB = lo.k - hi.k;
    if (dA <= 0 || dB <= 0) throw PreconditionError("polynomial is not quasi-homogeneous");
    for (const auto& [e, c] : t)
        if (static_cast<long>(e.j - lo.j) * dB != static_cast<long>(lo.k - e.k) * dA)
            throw PreconditionError("polynomial is not quasi-homogeneous");
}

void check_singular_at_origin(const AlgPoly& p) {
    if (p.is_zero()) throw FiniteTypeError("zero phase: Taylor support is empty");
    if (!p.coeff(0, 0).is_zero()) throw PreconditionError("phase does not vanish at the origin");
    if (!p.coeff(1, 0).is_zero() || !p.coeff(0, 1).is_zero())
        throw PreconditionError("gradient of the phase does not vanish at the origin");
}

int as_int(const Rational& r, const char* what) {
    if (!r.is_integer() || r.num() > 1000000) throw std::logic_error(std::string(what) + " is not a small integer");
    return static_cast<int>(r.num().get_si());
}

struct Geometry {
    NewtonPolyhedron np;
    PrincipalData pd;
};

Geometry geometry(const AlgPoly& p) {
    Geometry g{build_polyhedron(p.support()), {}};
    g.pd = newton_distance_and_face(g.np);
    return g;
}

// p(y1 + c*y2^m, y2)
AlgPoly shear_x1(const AlgPoly& p, const AlgebraicNumber& c, int m) { return p.transposed().shear(c, m).transposed(); }

}  // namespace

std::vector<AlgebraicRoot> real_roots_at_least(const AUPoly& q, int min_mult) {
    std::vector<AlgebraicRoot> out;
    if (rational_coefficients(q)) {
        for (const auto& r : real_roots_with_multiplicity(to_rational(q))) {
            if (r.multiplicity < min_mult) continue;
            if (r.root.is_rational()) out.push_back({AlgebraicNumber(*r.root.exact()), r.multiplicity});
            else out.push_back({AlgebraicNumber::generator(std::make_shared<NumberField>(r.root)), r.multiplicity});
        }
    } else {
        for (const auto& f : square_free_decomposition(q)) {
            if (f.multiplicity < min_mult) continue;
            if (f.factor.degree() == 1) {
                out.push_back({-f.factor.coeff(0), f.multiplicity});
            } else if (has_real_root(f.factor)) {
                throw std::domain_error("multiple real root of degree > 1 over an algebraic extension");
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const AlgebraicRoot& a, const AlgebraicRoot& b) {
        if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
        const int byabs = compare(abs_of(a.value), abs_of(b.value));
        if (byabs != 0) return byabs < 0;
        return compare(a.value, b.value) < 0;
    });
    return out;
}

int circle_order(const AlgPoly& p) {
    check_homogeneous(p);
    int m = 0;
    for (int s : {1, -1}) {
        m = std::max(m, max_real_multiplicity(p.restrict_x1(s)));
        m = std::max(m, p.restrict_x2(s).zero_order());
    }
    return m;
}

int circle_order(const BivarPoly& p) { return circle_order(to_algebraic(p)); }

std::string AdaptednessVerdict::describe() const {
    std::ostringstream os;
    switch (condition) {
        case 'a':
            os << "adapted: condition (a), principal face is a compact edge with m(phi_pr)=" << *circle_order
               << " <= d=" << principal.distance;
            break;
        case 'b': os << "adapted: condition (b), principal face is a vertex"; break;
        case 'c': os << "adapted: condition (c), principal face is an unbounded edge"; break;
        default:
            os << "not adapted: m(phi_pr)=" << *circle_order << " > d=" << principal.distance
               << ", m1=kappa2/kappa1=" << *m1;
    }
    return os.str();
}

AdaptednessVerdict is_adapted(const AlgPoly& p) {
    check_singular_at_origin(p);
    const Geometry g = geometry(p);
    AdaptednessVerdict v{true, 0, g.pd, std::nullopt, std::nullopt};
    switch (g.pd.face.kind) {
        case FaceKind::Vertex: v.condition = 'b'; return v;
        case FaceKind::UnboundedVertical:
        case FaceKind::UnboundedHorizontal: v.condition = 'c'; return v;
        case FaceKind::CompactEdge: break;
    }
    const int m = circle_order(face_part(p, g.np, g.pd.face));
    v.circle_order = m;
    if (Rational(m) <= g.pd.distance) {
        v.condition = 'a';
        return v;
    }
    v.adapted = false;
    v.m1 = g.pd.weight->ratio();
    return v;
}

AdaptednessVerdict is_adapted(const BivarPoly& p) { return is_adapted(to_algebraic(p)); }

int shear_iteration_cap(int total_degree) { return 4 * std::max(1, total_degree) * std::max(1, total_degree); }

std::pair<AlgPoly, ShearStep> normalize_vertex(const AlgPoly& p) {
    const AdaptednessVerdict v = is_adapted(p);
    if (!v.adapted || v.principal.face.kind != FaceKind::CompactEdge)
        throw PreconditionError("normalize_vertex needs an adapted phase with a compact-edge principal face");
    if (Rational(*v.circle_order) != v.principal.distance)
        throw PreconditionError("normalize_vertex needs m(phi_pr) = d");
    const Geometry g0 = geometry(p);
    const Weight& raw = g0.np.edges[static_cast<std::size_t>(g0.pd.face.index)].kappa;
    const bool tr = raw.k2 < raw.k1;
    const AlgPoly q = tr ? p.transposed() : p;
    const Geometry g = tr ? geometry(q) : g0;
    const Rational ratio = g.np.edges[static_cast<std::size_t>(g.pd.face.index)].kappa.ratio();
    if (!ratio.is_integer()) throw PreconditionError("kappa2/kappa1 is not an integer");
    const int m = as_int(ratio, "kappa2/kappa1");
    const int d = as_int(g.pd.distance, "Newton distance");
    const auto roots = real_roots_at_least(face_part(q, g.np, g.pd.face).restrict_x1(1), d);
    if (roots.empty()) throw PreconditionError("no real root of multiplicity d on the principal edge");
    const AlgebraicNumber& c = roots.front().value;
    AlgPoly out = q.shear(c, m);
    if (tr) out = out.transposed();
    return {out, ShearStep{c, m, tr}};
}

AdaptedResult varchenko_run(const BivarPoly& p) {
    AdaptedResult r;
    AlgPoly q = to_algebraic(p);
    const int cap = shear_iteration_cap(p.total_degree());
    AdaptednessVerdict v = is_adapted(q);
    r.distance_trace.push_back(v.principal.distance);
    while (!v.adapted) {
        if (r.steps >= cap) throw IterationCapError("possibly non-terminating jet: shear cap exceeded");
        const Geometry g = geometry(q);
        const Weight& raw = g.np.edges[static_cast<std::size_t>(g.pd.face.index)].kappa;
        if (raw.k2 < raw.k1) {
            if (r.steps > 0 || r.transposed) throw std::logic_error("principal edge flipped orientation mid-run");
            q = q.transposed();
            r.transposed = true;
            v = is_adapted(q);
            continue;
        }
        const int m = as_int(raw.ratio(), "kappa2/kappa1");
        const auto roots = real_roots_at_least(face_part(q, g.np, g.pd.face).restrict_x1(1), 1);
        if (roots.empty() || Rational(roots.front().multiplicity) <= g.pd.distance)
            throw std::logic_error("maximal root multiplicity is not attained by a real root");
        const AlgebraicNumber c = roots.front().value;
        q = q.shear(c, m);
        const ShearStep step{c, m, false};
        if (m == 1) r.linear_step = step;
        else r.psi_jet.push_back(step);
        ++r.steps;
        v = is_adapted(q);
        if (!(r.distance_trace.back() < v.principal.distance))
            throw std::logic_error("Newton distance did not increase under a Varchenko step");
        r.distance_trace.push_back(v.principal.distance);
    }
    r.phi_adapted = q;
    r.height = v.principal.distance;
    const FaceKind kind = v.principal.face.kind;
    const bool edge_m_equals_d =
        kind == FaceKind::CompactEdge && Rational(*v.circle_order) == v.principal.distance;
    r.nu = (r.height >= Rational(2) && (kind == FaceKind::Vertex || edge_m_equals_d)) ? 1 : 0;
    r.phi_a = q;
    if (edge_m_equals_d) {
        auto [out, step] = normalize_vertex(q);
        r.phi_a = out;
        r.normalized_vertex = true;
        if (step.m == 1 && !step.transposed) r.linear_step = step;
        else r.psi_jet.push_back(step);
    }
    const Geometry g = geometry(r.phi_a);
    r.polyhedron = g.np;
    r.principal = g.pd;
    return r;
}

SuperAdaptResult super_adapt(const AlgPoly& p) {
    Geometry g = geometry(p);
    if (g.pd.face.kind != FaceKind::Vertex) throw PreconditionError("super_adapt needs a vertex principal face");
    const Exponent vertex = g.np.vertices[static_cast<std::size_t>(g.pd.face.index)];
    const int d = vertex.j;
    const int cap = shear_iteration_cap(p.total_degree());
    SuperAdaptResult r{p, {}, false};
    for (int step = 0;; ++step) {
        if (step > cap) throw IterationCapError("possibly non-terminating super-adaptation");
        const auto i = static_cast<std::size_t>(g.pd.face.index);
        bool changed = false;
        if (i < g.np.edges.size()) {
            // Edge below the bisectrix: roots of p_b(1, x2), curves x2 = c*x1^b.
            const Rational b = g.np.edges[i].ratio();
            const auto roots =
                real_roots_at_least(face_part(r.phi, g.np, Face{FaceKind::CompactEdge, static_cast<int>(i)}).restrict_x1(1), d);
            if (!roots.empty()) {
                if (!b.is_integer()) throw std::domain_error("multiple edge root with non-integer edge ratio");
                const int m = as_int(b, "edge ratio");
                r.phi = r.phi.shear(roots.front().value, m);
                r.shears.push_back({roots.front().value, m, false});
                changed = true;
            }
        }
        if (!changed && i > 0) {
            // Edge above the bisectrix: roots of p_a(x1, 1), curves x1 = c*x2^(1/a).
            const Rational inv_a = g.np.edges[i - 1].ratio().inverse();
            const auto roots = real_roots_at_least(
                face_part(r.phi, g.np, Face{FaceKind::CompactEdge, static_cast<int>(i - 1)}).restrict_x2(1), d);
            if (!roots.empty()) {
                if (!inv_a.is_integer()) throw std::domain_error("multiple edge root with non-integer edge ratio");
                const int m = as_int(inv_a, "edge ratio");
                r.phi = shear_x1(r.phi, roots.front().value, m);
                r.shears.push_back({roots.front().value, m, true});
                changed = true;
            }
        }
        if (!changed) return r;
        g = geometry(r.phi);
        if (g.pd.face.kind != FaceKind::Vertex || !(g.np.vertices[static_cast<std::size_t>(g.pd.face.index)] == vertex))
            throw std::logic_error("super-adapting shear moved the principal vertex");
    }
}

HeightAnalysis compute_height_nu(const BivarPoly& p) {
    HeightAnalysis a{build_polyhedron(p.support()), {}, is_adapted(p), varchenko_run(p), {}, {}, 0};
    a.principal = newton_distance_and_face(a.polyhedron);
    a.d = a.principal.distance;
    a.h = a.adapted.height;
    a.nu = a.adapted.nu;
    return a;
}

}  // namespace osclab
