#include "doctest.h"
#include "support.hpp"

#include "osclab/adapt.hpp"

using namespace osclab;
using testutil::poly;
using testutil::q;

namespace {

AlgPoly apoly(const std::string& s) { return to_algebraic(poly(s)); }

}  // namespace

TEST_CASE("circle_order examples") {
    CHECK(circle_order(poly("(x2-2*x1^2)^2*(x2-x1^2)")) == 2);
    CHECK(circle_order(poly("x1^2+x2^2")) == 0);
    CHECK(circle_order(poly("x1^2*x2^2")) == 2);
    CHECK(circle_order(poly("x1^3*x2")) == 3);
    CHECK_THROWS_AS(circle_order(poly("x1^2+x2^3+x1*x2")), PreconditionError);
}

TEST_CASE("is_adapted examples") {
    auto a = is_adapted(poly("(x2-2*x1^2)^2*(x2-x1^2)"));
    CHECK(a.adapted);
    CHECK(a.condition == 'a');
    CHECK(*a.circle_order == 2);
    CHECK(a.principal.distance == q(2));

    auto b = is_adapted(poly("(x2-x1^2)^2"));
    CHECK(!b.adapted);
    CHECK(*b.circle_order == 2);
    CHECK(b.principal.distance == q(4, 3));
    CHECK(*b.m1 == q(2));

    auto c = is_adapted(poly("x1^2*x2^2"));
    CHECK(c.adapted);
    CHECK(c.condition == 'b');
    CHECK(is_adapted(poly("x2^2")).condition == 'c');

    CHECK_THROWS_AS(is_adapted(poly("1+x1^2")), PreconditionError);
    CHECK_THROWS_AS(is_adapted(poly("x1+x2^2")), PreconditionError);
    CHECK_THROWS_AS(is_adapted(poly("0")), FiniteTypeError);
}

TEST_CASE("varchenko_run examples") {
    auto r = varchenko_run(poly("(x2-x1^2)^2"));
    CHECK(r.steps == 1);
    REQUIRE(r.psi_jet.size() == 1);
    CHECK(r.psi_jet[0].c == AlgebraicNumber(q(1)));
    CHECK(r.psi_jet[0].m == 2);
    CHECK(to_rational(r.phi_a) == poly("x2^2"));
    CHECK(r.height == q(2));
    CHECK(r.nu == 0);
    CHECK(r.distance_trace == std::vector<Rational>{q(4, 3), q(2)});
    CHECK(r.principal.face.kind == FaceKind::UnboundedHorizontal);

    auto s = varchenko_run(poly("(x2-2*x1^2)^2*(x2-x1^2)"));
    CHECK(s.steps == 0);
    CHECK(s.normalized_vertex);
    REQUIRE(s.psi_jet.size() == 1);
    CHECK(s.psi_jet[0].c == AlgebraicNumber(q(2)));
    CHECK(s.psi_jet[0].m == 2);
    CHECK(to_rational(s.phi_a) == poly("x2^3+x1^2*x2^2"));
    CHECK(s.height == q(2));
    CHECK(s.nu == 1);
    CHECK(s.principal.face.kind == FaceKind::Vertex);

    auto t = varchenko_run(poly("x1^2+x2^2"));
    CHECK(t.steps == 0);
    CHECK(t.height == q(1));
    CHECK(t.nu == 0);
}

TEST_CASE("linear first step and transposed orientation") {
    auto r = varchenko_run(poly("(x2-x1)^2*(x2+x1)"));
    REQUIRE(r.linear_step);
    CHECK(r.linear_step->m == 1);
    CHECK(r.psi_jet.empty());
    CHECK(to_rational(r.phi_a) == poly("x2^3+2*x1*x2^2"));
    CHECK(r.height == q(2));
    CHECK(r.nu == 0);
    CHECK(r.principal.face.kind == FaceKind::UnboundedHorizontal);

    auto t = varchenko_run(poly("(x1-x2^2)^2"));
    CHECK(t.transposed);
    CHECK(t.height == q(2));
}

TEST_CASE("normalize_vertex") {
    auto [out, step] = normalize_vertex(apoly("(x2-2*x1^2)^2*(x2-x1^2)"));
    CHECK(to_rational(out) == poly("x2^3+x1^2*x2^2"));
    CHECK(step.m == 2);
    CHECK_THROWS_AS(normalize_vertex(apoly("(x2-x1)^2*(x2+x1)")), PreconditionError);
    CHECK_THROWS_AS(normalize_vertex(apoly("x1^2*x2^2")), PreconditionError);
    // m = d attained only through complex roots: (x2^2+x1^2)^2 has m = 0 < d
    CHECK_THROWS_AS(normalize_vertex(apoly("(x2^2+x1^2)^2")), PreconditionError);
}

TEST_CASE("irrational normalization and tie-independence") {
    // Roots +-sqrt(2) both of multiplicity d = 2.
    auto p = apoly("(x2^2-2*x1^2)^2");
    auto [out, step] = normalize_vertex(p);
    CHECK(!step.c.is_rational());
    CHECK(step.c.to_double() == doctest::Approx(-std::sqrt(2.0)));
    auto pd = newton_distance_and_face(build_polyhedron(out.support()));
    CHECK(pd.face.kind == FaceKind::Vertex);
    CHECK(pd.distance == q(2));
    // the other root gives the same face
    auto other = p.shear(-step.c, 1);
    auto pd2 = newton_distance_and_face(build_polyhedron(other.support()));
    CHECK(pd2.face.kind == FaceKind::Vertex);
    CHECK(pd2.distance == q(2));

    auto r = varchenko_run(poly("(x2^2-2*x1^2)^2"));
    CHECK(r.height == q(2));
    CHECK(r.nu == 1);
    CHECK(r.normalized_vertex);
    CHECK(!all_rational(r.phi_a));
}

TEST_CASE("super_adapt") {
    auto a = super_adapt(apoly("x2^4+x1^2*x2^2+x1^8"));
    CHECK(a.shears.empty());
    CHECK(to_rational(a.phi) == poly("x2^4+x1^2*x2^2+x1^8"));
    CHECK(super_adapt(apoly("x1^2*x2^2")).shears.empty());

    auto b = super_adapt(apoly("x1^2*(x2-x1^2)^2"));
    REQUIRE(b.shears.size() == 1);
    CHECK(b.shears[0].m == 2);
    CHECK(to_rational(b.phi) == poly("x1^2*x2^2"));

    auto c = super_adapt(apoly("x2^2*(x1-x2^3)^2"));
    REQUIRE(c.shears.size() == 1);
    CHECK(c.shears[0].transposed);
    CHECK(to_rational(c.phi) == poly("x1^2*x2^2"));

    CHECK_THROWS_AS(super_adapt(apoly("x2^2*(x2-x1^2)^2+x1^9")), PreconditionError);
}

TEST_CASE("compute_height_nu examples") {
    auto a = compute_height_nu(poly("x1^2*x2^2+x1^7"));
    CHECK(a.d == q(2));
    CHECK(a.h == q(2));
    CHECK(a.nu == 1);
    CHECK(a.verdict.condition == 'b');

    auto b = compute_height_nu(poly("x1^4+x2^2"));
    CHECK(b.d == q(4, 3));
    CHECK(b.h == q(4, 3));
    CHECK(b.nu == 0);
    CHECK(*b.verdict.circle_order == 0);

    auto flat = parse_phase("x2^2+exp(-1/abs(x1))").taylor();
    auto c = compute_height_nu(flat.polynomial);
    CHECK(c.d == q(2));
    CHECK(c.h == q(2));
    CHECK(c.nu == 0);
    CHECK(c.verdict.condition == 'c');
    CHECK(taylor_support(flat.polynomial) == Support{{0, 2}});
}

TEST_CASE("property: transposition invariance and monotone shears on 200 polynomials") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> cd(-3, 3), md(1, 3);
    int nonadapted = 0;
    for (int i = 0; i < 200; ++i) {
        BivarPoly p;
        while (p.is_zero()) p = testutil::random_poly(rng, 8, 6, 2);
        if (i % 2 == 1) {
            // hide adapted coordinates behind a shear so the algorithm has work to do
            int m = md(rng);
            p = testutil::random_poly(rng, 8 / (m + 1) + 1, 4, 2);
            p.add_term(q(1), 0, 2 + i % 2);
            p = shear_substitute(p, q(cd(rng) == 0 ? 1 : cd(rng)), m);
        }
        if (p.coeff(1, 0) != q(0) || p.coeff(0, 1) != q(0) || p.coeff(0, 0) != q(0) || p.is_zero()) continue;
        auto a = compute_height_nu(p);
        auto b = compute_height_nu(p.transposed());
        CHECK(a.d == b.d);
        CHECK(a.h == b.h);
        CHECK(a.nu == b.nu);
        CHECK(a.h >= a.d);
        CHECK((a.h == a.d) == a.verdict.adapted);
        if (!a.verdict.adapted) ++nonadapted;
        for (std::size_t s = 1; s < a.adapted.distance_trace.size(); ++s)
            CHECK(a.adapted.distance_trace[s - 1] < a.adapted.distance_trace[s]);
        for (std::size_t s = 1; s < a.adapted.psi_jet.size(); ++s)
            CHECK(a.adapted.psi_jet[s - 1].m < a.adapted.psi_jet[s].m);
        if (a.nu == 1) {
            CHECK(a.h >= q(2));
            CHECK(a.h.is_integer());
        }
        auto v = is_adapted(a.adapted.phi_adapted);
        CHECK(v.adapted);
        if (v.principal.face.kind == FaceKind::CompactEdge) CHECK(Rational(*v.circle_order) <= v.principal.distance);
    }
    CHECK(nonadapted > 20);
}

TEST_CASE("property: steeper shears leave d unchanged") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 60; ++i) {
        BivarPoly p = testutil::random_poly(rng, 7, 6, 2);
        if (p.is_zero()) continue;
        auto r = varchenko_run(p);
        if (!all_rational(r.phi_a) || !r.principal.face.is_compact()) continue;
        const AlgPoly& pa = r.phi_a;
        int steepest = 1;
        for (const auto& e : r.polyhedron.edges) steepest = std::max(steepest, static_cast<int>(e.ratio().floor().get_si()) + 1);
        auto sheared = pa.shear(AlgebraicNumber(q(3)), steepest + 1);
        CHECK(newton_distance_and_face(build_polyhedron(sheared.support())).distance == r.height);
    }
}
