#include "doctest.h"
#include "support.hpp"

#include "osclab/real_roots.hpp"
#include "osclab/weight.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <cmath>

using namespace osclab;
using testutil::poly;
using testutil::q;

TEST_CASE("rational arithmetic stays canonical") {
    Rational a = Rational::parse("6/-4");
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK((a + Rational(3) / Rational(2)).is_zero());
    CHECK(simplest_between(q(1, 3), q(1, 2)) == q(1, 2));
    CHECK(simplest_between(q(3, 10), q(4, 10)) == q(1, 3));
    CHECK(simplest_between(q(11, 30), q(23, 60)) == q(3, 8));
    CHECK(pow(q(2, 3), 3) == q(8, 27));
}

TEST_CASE("parse_phase examples") {
    auto p = poly("(x2-2*x1^2)^2*(x2-x1^2)");
    BivarPoly expected;
    expected.add_term(q(1), 0, 3);
    expected.add_term(q(-5), 2, 2);
    expected.add_term(q(8), 4, 1);
    expected.add_term(q(-4), 6, 0);
    CHECK(p == expected);
    CHECK(taylor_support(p) == Support{{0, 3}, {2, 2}, {4, 1}, {6, 0}});
    CHECK(p.str() == "x2^3 - 5*x1^2*x2^2 + 8*x1^4*x2 - 4*x1^6");

    CHECK(poly("0").is_zero());
    CHECK(poly("0").terms().empty());

    auto flat = parse_phase("x2^2+exp(-1/abs(x1))");
    auto t = flat.taylor();
    CHECK(t.has_flat_part);
    CHECK(taylor_support(t.polynomial) == Support{{0, 2}});
    REQUIRE(flat.flat_atoms().size() == 1);
    CHECK(flat.flat_atoms()[0].var == 1);
    CHECK(flat.flat_atoms()[0].alpha == q(1));

    auto flat2 = parse_phase("x2^2 + exp(-1/abs(x1)^(3/2))");
    CHECK(flat2.flat_atoms()[0].alpha == q(3, 2));
    CHECK(parse_phase(flat2.str()).flat_atoms()[0].alpha == q(3, 2));
}

TEST_CASE("parse errors carry positions") {
    auto position_of = [](const std::string& s) -> long {
        try {
            parse_phase(s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(position_of("x1 + y") == 5);
    CHECK(position_of("x1 +* x2") == 4);
    CHECK(position_of("(x1 + x2") == 8);
    CHECK(position_of("x1/x2") == 2);
    CHECK(position_of("x1^x2") >= 0);
    CHECK(position_of("x1^(1/2)") >= 0);
    CHECK_THROWS_AS(parse_phase("exp(x1)").taylor(), NotPolynomialError);
    CHECK_THROWS_AS(parse_phase("abs(x1)").taylor(), NotPolynomialError);
}

TEST_CASE("shear_substitute") {
    CHECK(shear_substitute(poly("(x2-x1^2)^2"), q(1), 2) == poly("x2^2"));
    auto p = poly("(x2-2*x1^2)^2*(x2-x1^2)");
    CHECK(shear_substitute(p, q(0), 3) == p);
    CHECK(shear_substitute(p, q(2), 2) == poly("x2^3+x1^2*x2^2"));
}

TEST_CASE("kappa_principal_part") {
    CHECK(kappa_principal_part(poly("x1^2*x2^2+x1^7"), Weight(q(1, 7), q(5, 14))) == poly("x1^2*x2^2+x1^7"));
    auto p = poly("x2^3-5*x1^2*x2^2+8*x1^4*x2-4*x1^6");
    CHECK(kappa_principal_part(p, Weight(q(1, 6), q(1, 3))) == p);
    CHECK(kappa_principal_part(poly("x1^2+x2^2+x1^5"), Weight(q(1, 2), q(1, 2))) == poly("x1^2+x2^2"));
    CHECK_THROWS(kappa_principal_part(BivarPoly{}, Weight(q(1), q(1))));
}

TEST_CASE("real_roots_with_multiplicity") {
    auto roots = real_roots_with_multiplicity(UPoly({q(-4), q(8), q(-5), q(1)}));  // (t-2)^2 (t-1)
    REQUIRE(roots.size() == 2);
    CHECK(*roots[0].root.exact() == q(2));
    CHECK(roots[0].multiplicity == 2);
    CHECK(*roots[1].root.exact() == q(1));
    CHECK(roots[1].multiplicity == 1);
    CHECK(real_roots_with_multiplicity(UPoly({q(1), q(0), q(1)})).empty());
    auto cube = real_roots_with_multiplicity(UPoly({q(0), q(0), q(0), q(1)}));
    REQUIRE(cube.size() == 1);
    CHECK(cube[0].root.exact()->is_zero());
    CHECK(cube[0].multiplicity == 3);
    auto sqrt2 = real_roots_with_multiplicity(UPoly({q(-2), q(0), q(1)}));
    REQUIRE(sqrt2.size() == 2);
    CHECK(!sqrt2[0].root.is_rational());
    CHECK(std::abs(sqrt2[1].root.approx() - std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS_AS(real_roots_with_multiplicity(UPoly{}), std::domain_error);
}

TEST_CASE("eval_phase") {
    CHECK(eval_phase(parse_phase("x1^2*x2^2"), 2, 3) == doctest::Approx(36));
    CHECK(eval_phase(parse_phase("exp(-1/abs(x1))"), 0, 5) == 0.0);
    CHECK(eval_phase(parse_phase("(x2-2*x1^2)^2*(x2-x1^2)"), 1, 2) == 0.0);
    auto g = parse_phase("x1^2*x2 + exp(-1/abs(x2))").eval_with_gradient(0.5, 0.25);
    CHECK(g.d1 == doctest::Approx(0.25));
    CHECK(g.d2 == doctest::Approx(0.25 + std::exp(-4.0) * 16.0));
}

TEST_CASE("coefficients_in matches evaluation") {
    auto e = parse_phase("(x2-2*x1^2)^2*(x2-x1^2) + 3*x1*x2");
    REQUIRE(e.polynomial_in(2));
    auto c = e.coefficients_in(2, 0.7);
    double t = 0.3, v = 0, pw = 1;
    for (auto& d : c) {
        v += d.v * pw;
        pw *= t;
    }
    CHECK(v == doctest::Approx(e.eval(0.7, t)).epsilon(1e-14));
    CHECK(!parse_phase("x2^2+exp(-1/abs(x1))").polynomial_in(1));
    CHECK(parse_phase("x2^2+exp(-1/abs(x1))").polynomial_in(2));
}

TEST_CASE("property: print/parse round trip on 1000 random polynomials") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        auto p = testutil::random_poly(rng, 8, 10);
        auto back = poly(p.str());
        REQUIRE_MESSAGE(back == p, p.str());
        REQUIRE(parse_phase(p.str()).taylor().polynomial == PhaseExpr::from_polynomial(p).taylor().polynomial);
    }
}

TEST_CASE("property: shear inverse") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> cd(-5, 5), md(1, 4);
    for (int i = 0; i < 200; ++i) {
        auto p = testutil::random_poly(rng, 6, 8);
        Rational c = q(cd(rng), 1 + (i % 3));
        int m = md(rng);
        CHECK(shear_substitute(shear_substitute(p, c, m), -c, m) == p);
    }
}

TEST_CASE("property: kappa principal part is quasi-homogeneous") {
    std::mt19937_64 rng(3);
    const Weight w(q(1, 6), q(1, 3));  // lcm of denominators 6
    for (int i = 0; i < 100; ++i) {
        auto p = testutil::random_poly(rng, 8, 10);
        if (p.is_zero()) continue;
        auto pk = kappa_principal_part(p, w);
        Rational deg = kappa_order(p, w);
        for (Rational r : {q(1, 2), q(2), q(3)}) {
            // p_k(r^(6 k1) x1, r^(6 k2) x2) = r^(6 deg) p_k(x1, x2)
            Rational x1 = q(3, 7), x2 = q(-5, 2);
            Rational lhs = pk.eval(x1 * pow(r, 1), x2 * pow(r, 2));
            Rational rhs = pow(r, static_cast<unsigned>((deg * Rational(6)).num().get_ui())) * pk.eval(x1, x2);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("property: root multiplicities against a numeric oracle") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> rootd(-6, 6), mult(1, 3), count(1, 4), cplx(0, 2);
    for (int i = 0; i < 200; ++i) {
        // Build q from known rational roots, multiplicities and an irreducible quadratic.
        UPoly qp = UPoly::constant(q(1 + i % 3));
        std::map<int, int> expected;
        for (int r = count(rng); r > 0; --r) {
            int root = rootd(rng), m = mult(rng);
            expected[root] += m;
            for (int k = 0; k < m; ++k) qp = qp * UPoly::linear_root(q(root, 2));
        }
        int complex_pairs = cplx(rng);
        for (int k = 0; k < complex_pairs; ++k) qp = qp * UPoly({q(k + 1), q(1), q(1)});
        auto roots = real_roots_with_multiplicity(qp);
        int total = 0;
        for (auto& r : roots) {
            REQUIRE(r.root.is_rational());
            int key = static_cast<int>((*r.root.exact() * q(2)).num().get_si());
            CHECK(expected[key] == r.multiplicity);
            total += r.multiplicity;
        }
        CHECK(total + 2 * complex_pairs == qp.degree());
        CHECK(roots.size() == expected.size());
    }
    // Irrational square-free inputs: compare isolated roots with Eigen's companion solver.
    for (int i = 0; i < 50; ++i) {
        std::uniform_int_distribution<int> cd(-9, 9);
        std::vector<Rational> c;
        int deg = 2 + i % 9;
        for (int k = 0; k < deg; ++k) c.push_back(q(cd(rng)));
        c.push_back(q(1 + i % 5));
        UPoly qp(c);
        auto roots = real_roots_with_multiplicity(qp);
        Eigen::VectorXd coeffs(deg + 1);
        for (int k = 0; k <= deg; ++k) coeffs[k] = qp.coeff(k).to_double();
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        std::vector<double> oracle;
        solver.realRoots(oracle, 1e-7);
        int total = 0;
        for (auto& r : roots) {
            total += r.multiplicity;
            double best = 1e9;
            for (double o : oracle) best = std::min(best, std::abs(o - r.root.approx()));
            CHECK(best < 1e-6);
        }
        CHECK(total <= static_cast<int>(oracle.size()));
    }
}
