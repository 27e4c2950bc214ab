#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heightlab/cocycle.hpp"
#include "heightlab/dynamics.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/parse.hpp"

using namespace heightlab;

namespace {

Rat rr(std::mt19937_64& rng, long bound, bool nonzero) {
    for (;;) {
        Rat r(static_cast<long>(rng() % (2 * bound + 1)) - bound,
              static_cast<long>(rng() % bound) + 1);
        r.canonicalize();
        if (!nonzero || r != 0) return r;
    }
}

double log_max_abs(const Place& v, const Rat& A, const Rat& B) {
    if (A == 0) return log_abs_value(v, B);
    if (B == 0) return log_abs_value(v, A);
    return std::max(log_abs_value(v, A), log_abs_value(v, B));
}

bool has_prime(const PlaceSet& s, long p) {
    return s.contains(Place::finite(Int(p)));
}

} // namespace

TEST_CASE("sufficient places from exact first-iterate data") {
    // d=2, lambda=1, x=1: (A1, B1) = (2, 1)
    PlaceSet s = sufficient_places(FamilyParams(2, Rat(1)), ProjPoint(1, 1));
    REQUIRE(s.size() == 2);
    CHECK(s.entries[0].place == Place::archimedean());
    CHECK(s.entries[0].reason == PlaceReason::archimedean);
    CHECK(s.entries[1].place == Place::finite(Int(2)));
    CHECK(s.entries[1].reason == PlaceReason::divides_first_iterate);

    // d=2, lambda=3/5, x=2: (A1, B1) = (23/5, 2)
    PlaceSet t = sufficient_places(FamilyParams(2, Rat(3, 5)), ProjPoint(2, 1));
    CHECK(t.size() == 5);
    CHECK(has_prime(t, 2));
    CHECK(has_prime(t, 3));
    CHECK(has_prime(t, 5));
    CHECK(has_prime(t, 23));
    CHECK_FALSE(has_prime(t, 7));
}

TEST_CASE("good place shortcut conditions") {
    RationalMap1D c = parse_rational_map("t/(t+1)");
    CHECK(good_place_shortcut(c, Place::finite(Int(5))));
    CHECK_THROWS_AS(Place::finite(Int(1)), std::domain_error);

    RationalMap1D c2 = parse_rational_map("(2t+1)/3");
    CHECK_FALSE(good_place_shortcut(c2, Place::finite(Int(3)))); // lead of B
    CHECK(good_place_shortcut(c2, Place::finite(Int(5))));

    // (iii): constant coefficient of A must be a unit when nonzero
    RationalMap1D c3 = parse_rational_map("(t+7)/(t+1)");
    CHECK_FALSE(good_place_shortcut(c3, Place::finite(Int(7))));

    // (i): a denominator in the coefficients fails integrality
    RationalMap1D c4 = RationalMap1D{parse_rational_map("t").A,
                                     parse_rational_map("t").B, true};
    c4.A = Rat(1, 5) * RatPoly::t(); // bypass normalization on purpose
    CHECK_FALSE(good_place_shortcut(c4, Place::finite(Int(5))));
}

TEST_CASE("good place equality: one exact step replaces the limit") {
    RationalMap1D c = parse_rational_map("t/(t+1)");
    Place v = Place::finite(Int(5));
    REQUIRE(good_place_shortcut(c, v));
    std::mt19937_64 rng(41);
    // |lambda|_5 > 1, = 1, < 1
    for (Rat lambda : {Rat(7, 25), Rat(3, 2), Rat(50, 3)}) {
        for (int rep = 0; rep < 3; ++rep) {
            FamilyParams p(2, lambda);
            Rat a0 = c.A.eval(lambda), b0 = c.B.eval(lambda);
            REQUIRE(b0 != 0);
            HomogeneousPair pair{a0, b0, 0};
            std::vector<double> vals;
            for (int n = 1; n <= 6; ++n) {
                pair = step_homogeneous(p, pair);
                vals.push_back(log_max_abs(v, pair.A, pair.B) /
                               std::pow(2.0, n));
            }
            for (double x : vals)
                CHECK(x == doctest::Approx(vals[0]).epsilon(1e-12));
            lambda += rr(rng, 3, true) * Rat(25); // keep |.|_5 regime
        }
    }
}

TEST_CASE("local heights: short circuits") {
    FamilyParams p(2, Rat(1));
    // infinity: value 0, error 0, at every place
    CertifiedValue inf_arch = local_canonical_height(
        p, ProjPoint::infinity(), Place::archimedean(), 1e-6);
    CHECK(inf_arch.value == 0.0);
    CHECK(inf_arch.error == 0.0);
    CertifiedValue inf_2 = local_canonical_height(p, ProjPoint::infinity(),
                                                  Place::finite(Int(2)), 1e-6);
    CHECK(inf_2.value == 0.0);
    CHECK(inf_2.error == 0.0);

    // good-reduction place: exactly 0 with error 0
    CertifiedValue good = local_canonical_height(p, ProjPoint(1, 1),
                                                 Place::finite(Int(7)), 1e-6);
    CHECK(good.value == 0.0);
    CHECK(good.error == 0.0);
}

TEST_CASE("local height at the archimedean place matches the exact limit") {
    FamilyParams p(2, Rat(1));
    CertifiedValue lv = local_canonical_height(p, ProjPoint(1, 1),
                                               Place::archimedean(), 1e-4);
    HomogeneousPair pair{Rat(1), Rat(1), 0};
    for (int n = 0; n < 12; ++n) pair = step_homogeneous(p, pair);
    double exact12 = log_max_abs(Place::archimedean(), pair.A, pair.B) /
                     std::pow(2.0, 12);
    double tail12 = cocycle_tail_bound(2, 0.0, 12);
    CHECK(std::fabs(lv.value - exact12) <= lv.error + tail12);
    CHECK(lv.error <= 1e-4 + 1e-10);
}

TEST_CASE("local height of the zero point is log|lambda|_v / d") {
    FamilyParams p(2, Rat(6));
    CertifiedValue arch = local_canonical_height(p, ProjPoint(0, 1),
                                                 Place::archimedean(), 1e-9);
    CHECK(arch.value == doctest::Approx(std::log(6.0) / 2).epsilon(1e-12));
    CertifiedValue at2 =
        local_canonical_height(p, ProjPoint(0, 1), Place::finite(Int(2)), 1e-9);
    CHECK(at2.value == doctest::Approx(-std::log(2.0) / 2).epsilon(1e-12));
    CHECK(at2.error <= 1e-15);
}

TEST_CASE("preperiodic-through-zero orbits take the exact chain") {
    FamilyParams p(2, Rat(-1)); // 1 -> 0 -> inf
    CertifiedValue arch =
        local_canonical_height(p, ProjPoint(1, 1), Place::archimedean(), 1e-9);
    CHECK(arch.value == doctest::Approx(0.0).epsilon(1e-12));
    CertifiedValue g = global_canonical_height(p, ProjPoint(1, 1), 1e-9);
    CHECK(std::fabs(g.value) <= 1e-9);
}

TEST_CASE("global canonical height: examples") {
    // x = 0 is preperiodic for every lambda: exactly 0
    CertifiedValue zero =
        global_canonical_height(FamilyParams(2, Rat(7, 3)), ProjPoint(0, 1), 1e-6);
    CHECK(zero.value == 0.0);
    CHECK(zero.error == 0.0);

    // 2-cycle 1 <-> -1 at lambda = -2
    CertifiedValue cyc =
        global_canonical_height(FamilyParams(2, Rat(-2)), ProjPoint(1, 1), 1e-6);
    CHECK(std::fabs(cyc.value) <= 1e-6);

    // wandering point, cross-checked against the naive limit
    FamilyParams p(2, Rat(1));
    CertifiedValue g = global_canonical_height(p, ProjPoint(1, 1), 1e-3);
    double oracle = naive_height_oracle(p, ProjPoint(1, 1), 12);
    double tails = 0;
    for (const auto& e : sufficient_places(p, ProjPoint(1, 1)).entries)
        tails += cocycle_tail_bound(2, log_abs_value(e.place, p.lambda), 12);
    CHECK(std::fabs(g.value - oracle) <= 1e-3 + tails);
    CHECK(g.value > 0.3); // far from preperiodic
}

TEST_CASE("naive height oracle") {
    FamilyParams p(2, Rat(1));
    CHECK(naive_height_oracle(p, ProjPoint(1, 1), 3) ==
          doctest::Approx(std::log(29.0) / 8));
    CHECK(naive_height_oracle(p, ProjPoint::infinity(), 7) == 0.0);
    CHECK(naive_height_oracle(FamilyParams(2, Rat(-2)), ProjPoint(1, 1), 9) ==
          0.0);
}

TEST_CASE("oracle sandwich over random instances") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 25; ++i) {
        int d = 2 + static_cast<int>(rng() % 2);
        FamilyParams p(d, rr(rng, 20, true));
        ProjPoint x = ProjPoint::from_rational(rr(rng, 20, false));
        double eps = 1e-4;
        CertifiedValue g = global_canonical_height(p, x, eps);
        long n = 9;
        double oracle = naive_height_oracle(p, x, n);
        double tails = 0;
        for (const auto& e : sufficient_places(p, x).entries)
            tails += cocycle_tail_bound(d, log_abs_value(e.place, p.lambda), n);
        CHECK(std::fabs(g.value - oracle) <= eps + tails);
    }
}

TEST_CASE("omitted places have exactly zero local data") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 20; ++i) {
        int d = 2 + static_cast<int>(rng() % 2);
        FamilyParams p(d, rr(rng, 9, true));
        ProjPoint x = ProjPoint::from_rational(rr(rng, 9, true));
        PlaceSet s = sufficient_places(p, x);
        HomogeneousPair pair{Rat(x.a()), Rat(x.b()), 0};
        std::vector<HomogeneousPair> pairs{pair};
        for (int n = 1; n <= 6; ++n) {
            pair = step_homogeneous(p, pair);
            pairs.push_back(pair);
        }
        int found = 0;
        for (Int q(2); found < 8; q = q + 1) {
            if (!is_prime(q) || s.contains(Place::finite(q))) continue;
            ++found;
            for (const auto& pr : pairs) {
                long va = pr.A == 0 ? 0 : padic_valuation(q, pr.A);
                long vb = pr.B == 0 ? 0 : padic_valuation(q, pr.B);
                CHECK(va >= 0);
                CHECK(vb >= 0);
                if (pr.A != 0 && pr.B != 0) CHECK(std::min(va, vb) == 0);
                if (pr.A == 0) CHECK(vb == 0);
                if (pr.B == 0) CHECK(va == 0);
            }
        }
    }
}

TEST_CASE("global height is lift invariant") {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 12; ++i) {
        int d = 2 + static_cast<int>(rng() % 2);
        FamilyParams p(d, rr(rng, 12, true));
        ProjPoint x = ProjPoint::from_rational(rr(rng, 12, true));
        double eps = 1e-5;
        CertifiedValue base =
            global_canonical_height_lift(p, Rat(x.a()), Rat(x.b()), eps);
        Rat c = rr(rng, 30, true);
        CertifiedValue scaled = global_canonical_height_lift(
            p, Rat(c * x.a()), Rat(c * x.b()), eps);
        CHECK(std::fabs(base.value - scaled.value) <= 2 * eps);
    }
}

TEST_CASE("tail bound holds on exact sequences") {
    std::mt19937_64 rng(45);
    const int ds[3] = {2, 3, 5};
    for (int i = 0; i < 30; ++i) {
        int d = ds[rng() % 3];
        long nmax = d == 5 ? 7 : 9;
        FamilyParams p(d, rr(rng, 6, true));
        ProjPoint x = ProjPoint::from_rational(rr(rng, 6, false));
        std::vector<Place> places{Place::archimedean()};
        for (const Int& q : prime_support(p.lambda))
            places.push_back(Place::finite(q));
        HomogeneousPair pair{Rat(x.a()), Rat(x.b()), 0};
        std::vector<HomogeneousPair> pairs{pair};
        for (long n = 1; n <= nmax; ++n) {
            pair = step_homogeneous(p, pair);
            pairs.push_back(pair);
        }
        for (const Place& v : places) {
            double lam = log_abs_value(v, p.lambda);
            for (long n0 = 1; n0 <= nmax; ++n0)
                for (long n = n0; n <= nmax; ++n) {
                    double a = log_max_abs(v, pairs[n].A, pairs[n].B) /
                               std::pow(d, static_cast<double>(n));
                    double b = log_max_abs(v, pairs[n0].A, pairs[n0].B) /
                               std::pow(d, static_cast<double>(n0));
                    CHECK(std::fabs(a - b) <=
                          cocycle_tail_bound(d, lam, n0) + 1e-9);
                }
        }
    }
}

TEST_CASE("fundamental inequality engine on synthetic sequences") {
    std::mt19937_64 rng(46);
    for (int i = 0; i < 50; ++i) {
        int d = 2 + static_cast<int>(rng() % 3);
        double m = 0.1 + 0.5 * (rng() % 1000) / 1000.0;
        double M = 1.5 + 2.0 * (rng() % 1000) / 1000.0;
        // N_(k+1) = r_k N_k^d with r_k in [m, M]
        std::vector<double> logs{0.3 + (rng() % 100) / 50.0};
        for (int k = 0; k < 18; ++k) {
            double r = m + (M - m) * (rng() % 1024) / 1023.0;
            logs.push_back(std::log(r) + d * logs.back());
        }
        double limit = logs.back() / std::pow(d, static_cast<double>(logs.size() - 1));
        for (long k0 = 0; k0 + 1 < static_cast<long>(logs.size()); ++k0) {
            double at = logs[k0] / std::pow(d, static_cast<double>(k0));
            CHECK(std::fabs(limit - at) <=
                  fundamental_tail_bound(m, M, d, k0) + 1e-9);
        }
    }
}

TEST_CASE("wide valuation gaps stay cheap in the p-adic kernel") {
    // |lambda|_2 = 2^-12: the two tie terms drift d^k valuations apart
    FamilyParams p(2, Rat(4096, 3));
    CertifiedValue v = global_canonical_height(p, ProjPoint(7, 5), 1e-6);
    double oracle = naive_height_oracle(p, ProjPoint(7, 5), 11);
    double tails = 0;
    for (const auto& e : sufficient_places(p, ProjPoint(7, 5)).entries)
        tails += cocycle_tail_bound(2, log_abs_value(e.place, p.lambda), 11);
    CHECK(std::fabs(v.value - oracle) <= 1e-6 + tails);
}

TEST_CASE("precision doubling is transparent to callers") {
    // v_2(1 + lambda) = 40: the first tie is invisible at 32 base-2 digits,
    // so the kernel restarts itself with more
    FamilyParams p(2, Rat(pow_int(Int(2), 40) - 1));
    Place v2 = Place::finite(Int(2));
    CertifiedValue lv = local_canonical_height(p, ProjPoint(1, 1), v2, 1e-6);
    HomogeneousPair pair{Rat(1), Rat(1), 0};
    for (int n = 0; n < 12; ++n) pair = step_homogeneous(p, pair);
    double exact = log_max_abs(v2, pair.A, pair.B) / std::pow(2.0, 12);
    double tail = cocycle_tail_bound(2, 0.0, 12);
    CHECK(std::fabs(lv.value - exact) <= lv.error + tail);
}

TEST_CASE("error budget handling") {
    FamilyParams p(2, Rat(1));
    CHECK_THROWS_AS(
        global_canonical_height(p, ProjPoint(1, 1), -1.0), std::domain_error);
    CHECK_THROWS_AS(
        local_canonical_height(p, ProjPoint(1, 1), Place::archimedean(), 0.0),
        std::domain_error);
    HeightOptions tiny;
    tiny.max_iterations = 3;
    CHECK_THROWS_AS(
        local_canonical_height(p, ProjPoint(1, 1), Place::archimedean(), 1e-9,
                               tiny),
        CapExceeded);
}
