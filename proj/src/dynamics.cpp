#include "heightlab/dynamics.hpp"

#include <stdexcept>
#include <unordered_map>

#include "heightlab/errors.hpp"

namespace heightlab {

FamilyParams::FamilyParams(int d_, Rat lambda_)
    : d(d_), lambda(std::move(lambda_)) {
    if (d < 2) throw std::domain_error("family degree d must be >= 2");
}

HomogeneousPair step_homogeneous(const FamilyParams& params,
                                 const HomogeneousPair& pair) {
    const unsigned long d = static_cast<unsigned long>(params.d);
    HomogeneousPair next;
    next.A = pow_rat(pair.A, d) + params.lambda * pow_rat(pair.B, d);
    next.B = pair.A * pow_rat(pair.B, d - 1);
    next.n = pair.n + 1;
    if (next.A == 0 && next.B == 0)
        throw std::domain_error("homogeneous orbit degenerated to (0, 0)");
    return next;
}

ProjPoint orbit_step(const FamilyParams& params, const ProjPoint& x,
                     const OrbitLimits& limits) {
    if (params.lambda == 0)
        throw std::domain_error("orbit operations require lambda != 0");
    if (x.is_infinity()) return x;
    const unsigned long d = static_cast<unsigned long>(params.d);
    // [a:b] -> [a^d q + p b^d : a b^(d-1) q] for lambda = p/q
    const Int& p = params.lambda.get_num();
    const Int& q = params.lambda.get_den();
    Int a = pow_int(x.a(), d) * q + p * pow_int(x.b(), d);
    Int b = x.a() * pow_int(x.b(), d - 1) * q;
    ProjPoint y(std::move(a), std::move(b));
    if (bit_length(y.a()) > limits.max_bits || bit_length(y.b()) > limits.max_bits)
        throw CapExceeded("orbit coordinate exceeded " +
                          std::to_string(limits.max_bits) + " bits");
    return y;
}

std::vector<ProjPoint> orbit_point(const FamilyParams& params,
                                   const ProjPoint& x0, long n,
                                   const OrbitLimits& limits) {
    std::vector<ProjPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    orbit.push_back(x0);
    for (long k = 0; k < n; ++k)
        orbit.push_back(orbit_step(params, orbit.back(), limits));
    return orbit;
}

OrbitPrescan prescan_orbit(const FamilyParams& params, const ProjPoint& x0,
                           const PrescanLimits& limits) {
    OrbitPrescan scan;
    std::unordered_map<ProjPoint, long> seen;
    OrbitLimits orbit_limits{limits.max_bits};
    ProjPoint x = x0;
    for (long k = 0;; ++k) {
        scan.points.push_back(x);
        if (x.is_zero() || x.is_infinity()) {
            scan.outcome = OrbitPrescan::Outcome::absorbed;
            scan.absorbed_at = k;
            return scan;
        }
        auto [it, fresh] = seen.emplace(x, k);
        if (!fresh) {
            scan.outcome = OrbitPrescan::Outcome::cycle;
            scan.tail = it->second;
            scan.period = k - it->second;
            scan.points.pop_back(); // the repeat itself carries no new point
            return scan;
        }
        if (k >= limits.max_steps) break;
        try {
            x = orbit_step(params, x, orbit_limits);
        } catch (const CapExceeded&) {
            break;
        }
    }
    scan.outcome = OrbitPrescan::Outcome::inconclusive;
    return scan;
}

PolyPair iterate_poly_pair(const RationalMap1D& c, int d, long n,
                           long max_degree) {
    if (c.A.is_zero() || c.B.is_zero())
        throw std::domain_error(
            "iterate_poly_pair requires nonzero numerator and denominator");
    const unsigned long du = static_cast<unsigned long>(d);
    PolyPair cur{c.A, c.B, 0};
    for (long k = 0; k < n; ++k) {
        long projected =
            d * std::max(cur.A.degree(), cur.B.degree()) + 1; // before work
        if (projected > max_degree)
            throw CapExceeded("polynomial iterate degree would exceed " +
                              std::to_string(max_degree));
        RatPoly a = cur.A.pow(du) + RatPoly::t() * cur.B.pow(du);
        RatPoly b = cur.A * cur.B.pow(du - 1);
        if (k == 0 && c.c0_zero) {
            // Eq. for the c(0)=0 branch: both first-iterate polynomials are
            // exactly divisible by t.
            a = a.div_t_exact();
            b = b.div_t_exact();
        }
        cur = PolyPair{std::move(a), std::move(b), k + 1};
    }
    return cur;
}

bool conversion_check(const RationalMap1D& c, const FamilyParams& params,
                      int k0, int n) {
    if (params.lambda == 0)
        throw std::domain_error("conversion_check requires lambda != 0");
    const Rat& l = params.lambda;
    PolyPair pk0 = iterate_poly_pair(c, params.d, k0);
    Rat Bk0 = pk0.B.eval(l);
    if (Bk0 == 0)
        throw std::domain_error("conversion_check requires B_{c,k0}(lambda) != 0");

    unsigned long dn = 1;
    for (int k = 0; k < n; ++k) dn *= static_cast<unsigned long>(params.d);
    const Rat factor = pow_rat(Bk0, dn); // B_{c,k0}(lambda)^(d^n)

    if (k0 == 0) {
        // point-level identity between the lifts (A(l), B(l)) and (c(l), 1)
        HomogeneousPair big{pk0.A.eval(l), Bk0, 0};
        HomogeneousPair small{big.A / big.B, Rat(1), 0};
        for (int k = 0; k < n; ++k) {
            big = step_homogeneous(params, big);
            small = step_homogeneous(params, small);
        }
        return big.A == small.A * factor && big.B == small.B * factor;
    }

    PolyPair pnk0 = iterate_poly_pair(c, params.d, k0 + n);
    Rat y = pk0.A.eval(l) / Bk0; // f^k0(c(lambda))
    HomogeneousPair pt{y, Rat(1), 0};
    for (int k = 0; k < n; ++k) pt = step_homogeneous(params, pt);
    return pnk0.A.eval(l) == factor * pt.A && pnk0.B.eval(l) == factor * pt.B;
}

} // namespace heightlab
