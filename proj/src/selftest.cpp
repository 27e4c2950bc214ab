#include "heightlab/selftest.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "heightlab/arith.hpp"
#include "heightlab/cocycle.hpp"
#include "heightlab/dynamics.hpp"
#include "heightlab/generic.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab::selftest {

namespace {

long draw(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rat random_rat(std::mt19937_64& rng, long bound, bool nonzero) {
    for (;;) {
        Rat r(draw(rng, -bound, bound), draw(rng, 1, bound));
        r.canonicalize();
        if (!nonzero || r != 0) return r;
    }
}

RatPoly random_poly(std::mt19937_64& rng, long max_deg, long bound) {
    std::vector<Rat> c;
    long deg = draw(rng, 0, max_deg);
    for (long i = 0; i <= deg; ++i) c.emplace_back(draw(rng, -bound, bound));
    return RatPoly(std::move(c));
}

RationalMap1D random_map(std::mt19937_64& rng) {
    for (;;) {
        RatPoly a = random_poly(rng, 2, 5);
        RatPoly b = random_poly(rng, 2, 5);
        if (a.is_zero() || b.is_zero()) continue;
        return RationalMap1D::normalized(std::move(a), std::move(b));
    }
}

// log max(|A|_v, |B|_v) of an exact pair, zero coordinates ignored.
double log_max_abs(const Place& v, const Rat& A, const Rat& B) {
    if (A == 0) return log_abs_value(v, B);
    if (B == 0) return log_abs_value(v, A);
    return std::max(log_abs_value(v, A), log_abs_value(v, B));
}

bool max_abs_is_one(const Int& p, const Rat& A, const Rat& B) {
    long va = A == 0 ? 0 : padic_valuation(p, A);
    long vb = B == 0 ? 0 : padic_valuation(p, B);
    if (va < 0 || vb < 0) return false;
    if (A == 0) return vb == 0;
    if (B == 0) return va == 0;
    return std::min(va, vb) == 0;
}

SuiteResult finish(SuiteResult r) {
    if (r.detail.empty())
        r.detail = std::to_string(r.checks) + " checks";
    return r;
}

} // namespace

SuiteResult conversion(long instances, std::uint64_t seed) {
    SuiteResult res{"conversion", true, 0, ""};
    std::mt19937_64 rng(seed);
    for (long i = 0; i < instances; ++i) {
        RationalMap1D c = random_map(rng);
        int d = static_cast<int>(draw(rng, 2, 3));
        int k0 = static_cast<int>(draw(rng, 0, 2));
        int n = static_cast<int>(draw(rng, 0, 3));
        Rat lambda = random_rat(rng, 6, true);
        FamilyParams params(d, lambda);
        if (iterate_poly_pair(c, d, k0).B.eval(lambda) == 0) {
            --i; // B_{c,k0}(lambda) = 0 violates the precondition; redraw
            continue;
        }
        ++res.checks;
        if (!conversion_check(c, params, k0, n)) {
            res.passed = false;
            res.detail = "conversion failed: c=" + c.to_string() +
                         " d=" + std::to_string(d) +
                         " lambda=" + to_fraction_string(lambda) +
                         " k0=" + std::to_string(k0) + " n=" + std::to_string(n);
            return res;
        }
    }
    return finish(res);
}

SuiteResult tailbound(long instances, std::uint64_t seed) {
    SuiteResult res{"tailbound", true, 0, ""};
    std::mt19937_64 rng(seed);
    const int ds[3] = {2, 3, 5};
    for (long i = 0; i < instances; ++i) {
        int d = ds[draw(rng, 0, 2)];
        long nmax = d == 5 ? 8 : 10;
        Rat lambda = random_rat(rng, 6, true);
        Rat x = random_rat(rng, 6, false);
        FamilyParams params(d, lambda);
        ProjPoint x0 = ProjPoint::from_rational(x);

        std::vector<Place> places{Place::archimedean()};
        for (const Int& p : prime_support(lambda))
            places.push_back(Place::finite(p));
        places.push_back(Place::finite(Int(7)));

        std::vector<HomogeneousPair> pairs;
        pairs.push_back({Rat(x0.a()), Rat(x0.b()), 0});
        for (long n = 1; n <= nmax; ++n)
            pairs.push_back(step_homogeneous(params, pairs.back()));

        for (const Place& v : places) {
            double log_lam = log_abs_value(v, lambda);
            std::vector<double> vals; // log M_n / d^n
            for (long n = 0; n <= nmax; ++n)
                vals.push_back(log_max_abs(v, pairs[n].A, pairs[n].B) /
                               std::pow(d, static_cast<double>(n)));
            for (long n0 = 1; n0 <= nmax; ++n0)
                for (long n = n0; n <= nmax; ++n) {
                    ++res.checks;
                    double bound = cocycle_tail_bound(d, log_lam, n0);
                    if (std::fabs(vals[n] - vals[n0]) > bound + 1e-9) {
                        res.passed = false;
                        res.detail =
                            "tail bound violated: d=" + std::to_string(d) +
                            " lambda=" + to_fraction_string(lambda) +
                            " x=" + to_fraction_string(x) + " v=" + v.to_string() +
                            " n0=" + std::to_string(n0) + " n=" + std::to_string(n);
                        return res;
                    }
                }
        }
    }
    return finish(res);
}

SuiteResult goodplace(long instances, std::uint64_t seed) {
    SuiteResult res{"goodplace", true, 0, ""};
    std::mt19937_64 rng(seed);
    const int ds[3] = {2, 3, 5};
    for (long i = 0; i < instances; ++i) {
        int d = ds[draw(rng, 0, 2)];
        Rat lambda = random_rat(rng, 9, true);
        Rat x = random_rat(rng, 9, true);
        FamilyParams params(d, lambda);
        ProjPoint x0 = ProjPoint::from_rational(x);
        PlaceSet s = sufficient_places(params, x0);

        std::vector<HomogeneousPair> pairs;
        pairs.push_back({Rat(x0.a()), Rat(x0.b()), 0});
        for (long n = 1; n <= 6; ++n)
            pairs.push_back(step_homogeneous(params, pairs.back()));

        Int p(2);
        for (int found = 0; found < 20; p = p + 1) {
            if (!is_prime(p)) continue;
            Place v = Place::finite(p);
            if (s.contains(v)) continue;
            ++found;
            for (long n = 0; n <= 6; ++n) {
                ++res.checks;
                if (!max_abs_is_one(p, pairs[n].A, pairs[n].B)) {
                    res.passed = false;
                    res.detail = "excluded place has nonzero local data: p=" +
                                 p.get_str() + " lambda=" +
                                 to_fraction_string(lambda) +
                                 " x=" + to_fraction_string(x) +
                                 " n=" + std::to_string(n);
                    return res;
                }
            }
        }
    }
    return finish(res);
}

SuiteResult coprime(long instances, std::uint64_t seed) {
    SuiteResult res{"coprime", true, 0, ""};
    std::mt19937_64 rng(seed);
    for (long i = 0; i < instances; ++i) {
        RationalMap1D c = random_map(rng);
        int d = static_cast<int>(draw(rng, 2, 3));
        ++res.checks;
        if (!verify_coprime_iterates(c, d, 4)) {
            res.passed = false;
            res.detail = "iterates not coprime: c=" + c.to_string() +
                         " d=" + std::to_string(d);
            return res;
        }
        PolyPair p1 = iterate_poly_pair(c, d, 1);
        long deg1 = std::max(p1.A.degree(), p1.B.degree());
        for (long n = 1; n <= 4; ++n) {
            PolyPair pn = iterate_poly_pair(c, d, n);
            ++res.checks;
            if (!c.c0_zero && pn.A.degree() <= pn.B.degree()) {
                res.passed = false;
                res.detail = "degree dominance failed: c=" + c.to_string();
                return res;
            }
            long degn = std::max(pn.A.degree(), pn.B.degree());
            long expect = deg1;
            for (long k = 1; k < n; ++k) expect *= d;
            ++res.checks;
            if (degn != expect) {
                res.passed = false;
                res.detail = "degree law failed: c=" + c.to_string() +
                             " d=" + std::to_string(d) + " n=" + std::to_string(n);
                return res;
            }
        }
    }
    return finish(res);
}

std::vector<SuiteResult> run_all() {
    return {conversion(), tailbound(), goodplace(), coprime()};
}

std::vector<std::string> suite_names() {
    return {"conversion", "tailbound", "goodplace", "coprime"};
}

SuiteResult run_suite(const std::string& name) {
    if (name == "conversion") return conversion();
    if (name == "tailbound") return tailbound();
    if (name == "goodplace") return goodplace();
    if (name == "coprime") return coprime();
    throw std::domain_error("unknown selftest suite '" + name + "'");
}

} // namespace heightlab::selftest
