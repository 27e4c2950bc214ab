#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heightlab/dynamics.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/generic.hpp"
#include "heightlab/parse.hpp"
#include "heightlab/polynomial.hpp"

using namespace heightlab;

namespace {

RatPoly random_poly(std::mt19937_64& rng, long max_deg, long bound,
                    bool nonzero) {
    for (;;) {
        std::vector<Rat> c;
        long deg = static_cast<long>(rng() % (max_deg + 1));
        for (long i = 0; i <= deg; ++i)
            c.emplace_back(static_cast<long>(rng() % (2 * bound + 1)) - bound);
        RatPoly p(std::move(c));
        if (!nonzero || !p.is_zero()) return p;
    }
}

} // namespace

TEST_CASE("polynomial arithmetic basics") {
    RatPoly t = RatPoly::t();
    RatPoly p = t * t + RatPoly(Rat(1)); // t^2 + 1
    CHECK(p.degree() == 2);
    CHECK(p.eval(Rat(3)) == 10);
    CHECK((p - p).is_zero());
    CHECK((p * p).degree() == 4);
    CHECK(p.pow(3).degree() == 6);
    CHECK((RatPoly(Rat(0))).is_zero());
    CHECK(t.mul_t().div_t_exact() == t);
    CHECK_THROWS_AS(p.div_t_exact(), std::logic_error);
}

TEST_CASE("division and gcd") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 60; ++i) {
        RatPoly a = random_poly(rng, 5, 4, false);
        RatPoly b = random_poly(rng, 3, 4, true);
        auto [q, r] = poly_divmod(a, b);
        CHECK(q * b + r == a);
        CHECK(r.degree() < b.degree());
    }
    for (int i = 0; i < 40; ++i) {
        RatPoly a = random_poly(rng, 3, 3, true);
        RatPoly b = random_poly(rng, 3, 3, true);
        RatPoly g = random_poly(rng, 2, 3, true);
        RatPoly d = poly_gcd(a * g, b * g);
        // gcd contains g up to the gcd of a and b
        CHECK(poly_divmod(d, poly_gcd(g, d)).second.is_zero());
        CHECK(d.degree() >= g.degree());
        CHECK(poly_divmod(a * g, d).second.is_zero());
        CHECK(poly_divmod(b * g, d).second.is_zero());
    }
}

TEST_CASE("resultant examples") {
    RatPoly t = RatPoly::t();
    CHECK(poly_resultant(t, t + RatPoly(Rat(1))) == 1);
    CHECK(poly_resultant(t * t + RatPoly(Rat(1)), t) == 1);
    // constant convention: Res(P, q) = q^deg(P)
    CHECK(poly_resultant(Rat(2) * t + RatPoly(Rat(1)), RatPoly(Rat(3))) == 3);
    CHECK(poly_resultant(RatPoly(Rat(5)), RatPoly(Rat(7))) == 1);
    CHECK_THROWS_AS(poly_resultant(t, RatPoly()), std::domain_error);
}

TEST_CASE("resultant properties") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 40; ++i) {
        RatPoly p = random_poly(rng, 3, 3, true);
        RatPoly q = random_poly(rng, 3, 3, true);
        RatPoly r = random_poly(rng, 2, 3, true);
        // multiplicativity in the second argument
        CHECK(poly_resultant(p, q * r) ==
              poly_resultant(p, q) * poly_resultant(p, r));
        // swap symmetry up to (-1)^(deg p * deg q)
        Rat swapped = poly_resultant(q, p);
        long mn = p.degree() * q.degree();
        CHECK(poly_resultant(p, q) == (mn % 2 == 0 ? swapped : Rat(-swapped)));
        // vanishes exactly on a shared root
        RatPoly root = RatPoly::t() - RatPoly(Rat(2));
        CHECK(poly_resultant(p * root, q * root) == 0);
    }
}

TEST_CASE("map normalization divides out common factors with a warning") {
    RatPoly t = RatPoly::t();
    std::string warning;
    RationalMap1D c = RationalMap1D::normalized(
        t * (t + RatPoly(Rat(1))), (t + RatPoly(Rat(1))) * RatPoly(Rat(3)),
        &warning);
    CHECK(c.A == t);
    CHECK(c.B == RatPoly(Rat(3)));
    CHECK(warning.find("t + 1") != std::string::npos);
    CHECK(c.c0_zero);

    warning.clear();
    RationalMap1D clean = RationalMap1D::normalized(t * t + RatPoly(Rat(1)),
                                                    RatPoly(Rat(1)), &warning);
    CHECK(warning.empty());
    CHECK_FALSE(clean.c0_zero);
}

TEST_CASE("map normalization clears content and pins signs") {
    RatPoly t = RatPoly::t();
    RationalMap1D c = RationalMap1D::normalized(
        Rat(1, 2) * t, RatPoly(Rat(-3, 2))); // (t/2) / (-3/2)
    CHECK(c.B.leading() > 0);
    CHECK(c.A.leading() < 0);
    CHECK(c.A == Rat(-1) * t);
    CHECK(c.B == RatPoly(Rat(3)));
}

TEST_CASE("map parser") {
    CHECK(parse_rational_map("t").A == RatPoly::t());
    CHECK(parse_rational_map("5").A == RatPoly(Rat(5)));
    CHECK(parse_rational_map("5").B == RatPoly(Rat(1)));
    RationalMap1D c = parse_rational_map("(t^2+1)/(2t-3)");
    CHECK(c.A == RatPoly::t() * RatPoly::t() + RatPoly(Rat(1)));
    CHECK(c.B == Rat(2) * RatPoly::t() - RatPoly(Rat(3)));
    CHECK(parse_rational_map("t/(t+1)").B == RatPoly::t() + RatPoly(Rat(1)));
    // rational coefficients ride on the same '/' as the fraction bar
    RationalMap1D half = parse_rational_map("t/2 + 1/2");
    CHECK(half.A == RatPoly::t() + RatPoly(Rat(1)));
    CHECK(half.B == RatPoly(Rat(2)));
    CHECK(parse_rational_map("-t^2").A.leading() < 0);
    CHECK_THROWS_AS(parse_rational_map("t +"), ParseError);
    CHECK_THROWS_AS(parse_rational_map("x + 1"), ParseError);
    CHECK_THROWS_AS(parse_rational_map("(t"), ParseError);
    CHECK_THROWS_AS(parse_rational_map("1/0"), ParseError);
}

TEST_CASE("rational and point parsing") {
    CHECK(parse_rational("29/10") == Rat(29, 10));
    CHECK(parse_rational("-3/7") == Rat(-3, 7));
    CHECK(parse_rational(" 12 ") == 12);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("a"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
    CHECK(parse_point("inf") == ProjPoint::infinity());
    CHECK(parse_point("-6/4") == ProjPoint(-3, 2));
}

TEST_CASE("generic-fiber heights are exact degree ratios") {
    for (int d = 2; d <= 7; ++d) {
        Rat h = generic_height(parse_rational_map("5"), d);
        CHECK(h == Rat(1, d));
        CHECK(generic_height(parse_rational_map("-3/7"), d) == Rat(1, d));
    }
    CHECK(generic_height(parse_rational_map("t"), 2) == Rat(1, 2));
    CHECK(generic_height(parse_rational_map("t"), 3) == Rat(2, 3));
    CHECK(generic_height(parse_rational_map("t^2+1"), 2) == Rat(2));
    CHECK(generic_height(parse_rational_map("t/(t+1)"), 2) == 1);
    // c identically 0 or infinity is preperiodic: height 0
    RationalMap1D zero = RationalMap1D::normalized(RatPoly(), RatPoly(Rat(1)));
    CHECK(generic_height(zero, 2) == 0);
}

TEST_CASE("coprime iterates") {
    CHECK(verify_coprime_iterates(parse_rational_map("t/(t+1)"), 2, 3));
    CHECK(verify_coprime_iterates(parse_rational_map("t"), 3, 3));
    CHECK(verify_coprime_iterates(parse_rational_map("9/4"), 5, 3));
}

TEST_CASE("degree law and denominator-degree gap") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 25; ++i) {
        RatPoly a = random_poly(rng, 2, 4, true);
        RatPoly b = random_poly(rng, 2, 4, true);
        RationalMap1D c = RationalMap1D::normalized(a, b);
        int d = 2 + static_cast<int>(rng() % 2);
        PolyPair p1 = iterate_poly_pair(c, d, 1);
        long deg1 = std::max(p1.A.degree(), p1.B.degree());
        for (int n = 2; n <= 4; ++n) {
            PolyPair pn = iterate_poly_pair(c, d, n);
            long degn = std::max(pn.A.degree(), pn.B.degree());
            long expect = deg1;
            for (int k = 1; k < n; ++k) expect *= d;
            CHECK(degn == expect);
        }
        if (!c.is_constant()) CHECK(deg1 - p1.B.degree() >= 1);
    }
}
