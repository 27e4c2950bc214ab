#include "heightlab/heights.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "heightlab/errors.hpp"
#include "heightlab/generic.hpp"

namespace heightlab {

std::string to_string(PlaceReason r) {
    switch (r) {
    case PlaceReason::archimedean: return "archimedean";
    case PlaceReason::divides_lambda: return "divides lambda";
    case PlaceReason::divides_first_iterate: return "divides first-iterate data";
    }
    return "?";
}

bool PlaceSet::contains(const Place& v) const {
    for (const auto& e : entries)
        if (e.place == v) return true;
    return false;
}

namespace {

Rat make_rat(Int num, Int den) {
    Rat r(std::move(num), std::move(den));
    r.canonicalize();
    return r;
}

// First iterate of a lift: (A^d + lambda B^d, A B^(d-1)).
HomogeneousPair first_iterate(const FamilyParams& params, const Rat& A0,
                              const Rat& B0) {
    return step_homogeneous(params, HomogeneousPair{A0, B0, 0});
}

} // namespace

PlaceSet sufficient_places_lift(const FamilyParams& params, const Rat& A0,
                                const Rat& B0) {
    if (params.lambda == 0)
        throw std::domain_error("sufficient_places requires lambda != 0");
    if (A0 == 0 && B0 == 0)
        throw std::domain_error("degenerate lift (0, 0)");
    HomogeneousPair p1 = first_iterate(params, A0, B0);

    PlaceSet s;
    s.entries.push_back({Place::archimedean(), PlaceReason::archimedean});
    std::vector<Int> lam = prime_support(params.lambda);
    for (const Int& p : lam)
        s.entries.push_back({Place::finite(p), PlaceReason::divides_lambda});
    std::vector<Int> rest;
    auto absorb = [&](const Rat& x) {
        if (x == 0) return;
        for (const Int& p : prime_support(x)) rest.push_back(p);
    };
    absorb(p1.A);
    absorb(p1.B);
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    for (const Int& p : rest)
        if (std::find(lam.begin(), lam.end(), p) == lam.end())
            s.entries.push_back(
                {Place::finite(p), PlaceReason::divides_first_iterate});
    std::sort(s.entries.begin(), s.entries.end(),
              [](const auto& a, const auto& b) { return a.place < b.place; });
    return s;
}

PlaceSet sufficient_places(const FamilyParams& params, const ProjPoint& x0) {
    return sufficient_places_lift(params, Rat(x0.a()), Rat(x0.b()));
}

bool good_place_shortcut(const RationalMap1D& c, const Place& v) {
    if (v.is_archimedean())
        throw std::domain_error("good_place_shortcut needs a finite place");
    if (c.A.is_zero() || c.B.is_zero())
        throw std::domain_error("good_place_shortcut requires nonzero A, B");
    const Int& p = v.prime();
    auto integral = [&](const RatPoly& f) {
        for (long i = 0; i <= f.degree(); ++i) {
            const Rat& x = f.coeff(i);
            if (x != 0 && padic_valuation(p, x) < 0) return false;
        }
        return true;
    };
    if (!integral(c.A) || !integral(c.B)) return false;      // (i)
    if (padic_valuation(p, c.A.leading()) != 0) return false; // (ii)
    if (padic_valuation(p, c.B.leading()) != 0) return false;
    Rat res = poly_resultant(c.A, c.B);
    if (res == 0 || padic_valuation(p, res) != 0) return false;
    Rat a0 = c.A.constant_term();                             // (iii)
    if (a0 != 0 && padic_valuation(p, a0) != 0) return false;
    return true;
}

namespace {

// Shared per-point context so the global sum runs the orbit prescan once.
struct LocalContext {
    HomogeneousPair p1;   // exact first iterate of the lift
    OrbitPrescan scan;    // reduced-orbit scan from the canonical point
    Rat scale;            // lift = scale * canonical pair of x0
};

LocalContext build_context(const FamilyParams& params, const Rat& A0,
                           const Rat& B0, const HeightOptions& opts) {
    if (params.lambda == 0)
        throw std::domain_error("canonical heights require lambda != 0");
    if (A0 == 0 && B0 == 0)
        throw std::domain_error("degenerate lift (0, 0)");
    LocalContext ctx;
    ctx.p1 = first_iterate(params, A0, B0);
    ProjPoint x0 = B0 == 0 ? ProjPoint::infinity()
                           : ProjPoint::from_rational(Rat(A0 / B0));
    ctx.scan = prescan_orbit(params, x0, opts.prescan);
    if (B0 == 0)
        ctx.scale = A0; // (A0, 0) = A0 * (1, 0)
    else
        ctx.scale = B0 / Rat(x0.b());
    return ctx;
}

// max(|A1|_v, |B1|_v) = 1 and |lambda|_v = 1: an ultrametric induction
// keeps the max at 1 forever, so the local limit is exactly 0 whatever
// M_0 is.
bool vanishes_at(const FamilyParams& params, const LocalContext& ctx,
                 const Int& p) {
    if (padic_valuation(p, params.lambda) != 0) return false;
    const Rat& A1 = ctx.p1.A;
    const Rat& B1 = ctx.p1.B;
    long va = A1 == 0 ? 0 : padic_valuation(p, A1);
    long vb = B1 == 0 ? 0 : padic_valuation(p, B1);
    if (va < 0 || vb < 0) return false;
    long min_nonzero;
    if (A1 == 0)
        min_nonzero = vb;
    else if (B1 == 0)
        min_nonzero = va;
    else
        min_nonzero = std::min(va, vb);
    return min_nonzero == 0;
}

// Closed-form local value when the orbit provably reaches {0, inf}: walk the
// conversion identity one reduced step at a time down to the absorbing
// point. Exact at finite places (a rational multiple of log p).
CertifiedValue absorbed_local_finite(const FamilyParams& params,
                                     const LocalContext& ctx, const Int& p) {
    const auto& pts = ctx.scan.points;
    const long s = ctx.scan.absorbed_at;
    const Int d(params.d);
    auto coeff = [&](const Rat& x) { return Rat(-padic_valuation(p, x)); };
    Rat ell = pts[static_cast<std::size_t>(s)].is_infinity()
                  ? Rat(0)
                  : make_rat(Int(-padic_valuation(p, params.lambda)), d);
    for (long j = s - 1; j >= 0; --j) {
        const ProjPoint& xj = pts[static_cast<std::size_t>(j)];
        const ProjPoint& xn = pts[static_cast<std::size_t>(j + 1)];
        Rat inner = coeff(Rat(xj.a())) + Rat(params.d - 1) * coeff(Rat(xj.b())) -
                    coeff(Rat(xn.b())) + ell;
        ell = inner / Rat(d);
    }
    if (ctx.scale != 1) ell += coeff(ctx.scale);
    if (ell == 0) return {0.0, 0.0};
    double value = ell.get_d() * log_abs(p);
    return {value, 4 * DBL_EPSILON * std::fabs(value)};
}

CertifiedValue absorbed_local_arch(const FamilyParams& params,
                                   const LocalContext& ctx) {
    const auto& pts = ctx.scan.points;
    const long s = ctx.scan.absorbed_at;
    double ell = 0;
    long ops = 0;
    if (!pts[static_cast<std::size_t>(s)].is_infinity()) {
        ell = log_abs(params.lambda) / params.d;
        ++ops;
    }
    for (long j = s - 1; j >= 0; --j) {
        const ProjPoint& xj = pts[static_cast<std::size_t>(j)];
        const ProjPoint& xn = pts[static_cast<std::size_t>(j + 1)];
        double la = log_abs(xj.a()); // a != 0 for j < s
        double lb = log_abs(xj.b());
        double lw = log_abs(xn.b());
        ell = (la + (params.d - 1) * lb - lw + ell) / params.d;
        ++ops;
    }
    if (ctx.scale != 1) {
        ell += log_abs(ctx.scale);
        ++ops;
    }
    if (ops == 0) return {ell, 0.0}; // no floating arithmetic happened
    double err = 8 * DBL_EPSILON * (static_cast<double>(ops) + 1.0) *
                 (std::fabs(ell) + 1.0);
    return {ell, err};
}

CertifiedValue kernel_local(const FamilyParams& params, const Rat& A0,
                            const Rat& B0, const Place& v, double eps,
                            const HeightOptions& opts) {
    const double log_lam_v = log_abs_value(v, params.lambda);
    long n0 = 1;
    while (cocycle_tail_bound(params.d, log_lam_v, n0) > eps) {
        if (++n0 > opts.max_iterations)
            throw CapExceeded(
                "local height truncation index exceeds the iteration ceiling");
    }
    const double tail = cocycle_tail_bound(params.d, log_lam_v, n0);

    if (v.is_archimedean()) {
        PlaceCocycleState st = PlaceCocycleState::begin(v, params, A0, B0);
        for (long k = 0; k < n0; ++k) st.advance(params);
        return {st.partial_value(), tail + st.rounding_error()};
    }
    for (long digits = opts.start_digits; digits <= opts.max_digits;
         digits *= 2) {
        PlaceCocycleState st =
            PlaceCocycleState::begin(v, params, A0, B0, digits);
        try {
            for (long k = 0; k < n0; ++k) st.advance(params);
        } catch (const PrecisionExhausted&) {
            continue; // restart from the initial state with N doubled
        }
        return {st.partial_value(), tail + st.rounding_error()};
    }
    throw CapExceeded("p-adic working precision cap reached at place " +
                      v.to_string() +
                      " (is the point preperiodic through 0?)");
}

CertifiedValue local_with_context(const FamilyParams& params,
                                  const LocalContext& ctx, const Rat& A0,
                                  const Rat& B0, const Place& v, double eps,
                                  const HeightOptions& opts) {
    if (v.is_finite() && vanishes_at(params, ctx, v.prime()))
        return {0.0, 0.0};
    if (ctx.scan.outcome == OrbitPrescan::Outcome::absorbed) {
        if (v.is_finite()) return absorbed_local_finite(params, ctx, v.prime());
        return absorbed_local_arch(params, ctx);
    }
    return kernel_local(params, A0, B0, v, eps, opts);
}

} // namespace

CertifiedValue local_canonical_height_lift(const FamilyParams& params,
                                           const Rat& A0, const Rat& B0,
                                           const Place& v, double eps,
                                           const HeightOptions& opts) {
    if (eps <= 0) throw std::domain_error("eps must be positive");
    LocalContext ctx = build_context(params, A0, B0, opts);
    return local_with_context(params, ctx, A0, B0, v, eps, opts);
}

CertifiedValue local_canonical_height(const FamilyParams& params,
                                      const ProjPoint& x0, const Place& v,
                                      double eps, const HeightOptions& opts) {
    return local_canonical_height_lift(params, Rat(x0.a()), Rat(x0.b()), v,
                                       eps, opts);
}

CertifiedValue global_canonical_height_lift(const FamilyParams& params,
                                            const Rat& A0, const Rat& B0,
                                            double eps,
                                            const HeightOptions& opts) {
    if (eps <= 0) throw std::domain_error("eps must be positive");
    LocalContext ctx = build_context(params, A0, B0, opts);
    PlaceSet s = sufficient_places_lift(params, A0, B0);
    // 0.9: leave headroom so per-place rounding never pushes past eps
    const double per_place = 0.9 * eps / static_cast<double>(s.size());
    CertifiedValue total;
    for (const auto& e : s.entries) {
        CertifiedValue lv =
            local_with_context(params, ctx, A0, B0, e.place, per_place, opts);
        total.value += lv.value;
        total.error += lv.error;
    }
    return total;
}

CertifiedValue global_canonical_height(const FamilyParams& params,
                                       const ProjPoint& x0, double eps,
                                       const HeightOptions& opts) {
    // 0 and inf are preperiodic for every lambda (0 -> inf -> inf)
    if (x0.is_zero() || x0.is_infinity()) return {0.0, 0.0};
    return global_canonical_height_lift(params, Rat(x0.a()), Rat(x0.b()), eps,
                                        opts);
}

double naive_height_oracle(const FamilyParams& params, const ProjPoint& x0,
                           long n, const OrbitLimits& limits) {
    std::vector<ProjPoint> orbit = orbit_point(params, x0, n, limits);
    return weil_height(orbit.back()) / std::pow(params.d, static_cast<double>(n));
}

} // namespace heightlab
