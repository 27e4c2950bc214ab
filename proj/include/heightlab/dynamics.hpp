#pragma once

#include <optional>
#include <vector>

#include "heightlab/arith.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

// The family f_lambda(z) = (z^d + lambda)/z. lambda = 0 is rejected by the
// orbit operations; step_homogeneous permits it (f_0(z) = z^(d-1)).
struct FamilyParams {
    FamilyParams(int d_, Rat lambda_);
    int d;
    Rat lambda;
};

// An exact lift (A, B) of a projective point at iterate n.
struct HomogeneousPair {
    Rat A, B;
    long n = 0;
};

// (A, B) -> (A^d + lambda*B^d, A*B^(d-1)), exactly. Throws std::domain_error
// if the result degenerates to (0, 0), which cannot happen for lambda != 0
// and a nondegenerate input.
HomogeneousPair step_homogeneous(const FamilyParams& params,
                                 const HomogeneousPair& pair);

struct OrbitLimits {
    long max_bits = 1L << 29; // 64 MB per reduced coordinate
};

// The exact reduced orbit x0, f(x0), ..., f^n(x0); infinity is fixed, 0 maps
// to infinity. Requires lambda != 0; throws CapExceeded past max_bits.
std::vector<ProjPoint> orbit_point(const FamilyParams& params,
                                   const ProjPoint& x0, long n,
                                   const OrbitLimits& limits = {});

// One reduced orbit step (shared by orbit_point and the incremental users).
ProjPoint orbit_step(const FamilyParams& params, const ProjPoint& x,
                     const OrbitLimits& limits = {});

// Bounded exact scan of the reduced orbit, used to certify preperiodic
// behavior before the floating/p-adic kernels run.
struct PrescanLimits {
    long max_steps = 256;
    long max_bits = 4096;
};

struct OrbitPrescan {
    enum class Outcome {
        absorbed,     // orbit reaches {0, inf}; points holds x_0..x_s with
                      // x_s the first such point
        cycle,        // exact collision: x_(tail+period) = x_tail, no 0/inf
        inconclusive, // a cap was hit first (the orbit is escaping)
    };
    Outcome outcome = Outcome::inconclusive;
    std::vector<ProjPoint> points;
    long absorbed_at = -1;
    long tail = -1, period = -1;
};

OrbitPrescan prescan_orbit(const FamilyParams& params, const ProjPoint& x0,
                           const PrescanLimits& limits = {});

// Polynomial orbit over Q[t]: A_n, B_n with f_t^n(c(t)) = [A_n(t) : B_n(t)].
struct PolyPair {
    RatPoly A, B;
    long n = 0;
};

// Builds (A_n, B_n) for f_t(z) = (z^d + t)/z. The first step divides by t
// exactly when c(0) = 0; the division is asserted exact. Throws CapExceeded
// when deg A_n would pass max_degree (degrees grow like d^n).
PolyPair iterate_poly_pair(const RationalMap1D& c, int d, long n,
                           long max_degree = 1L << 17);

// Checks the lift-conversion identities exactly: for k0 >= 1,
//   A_{c,n+k0}(l) = B_{c,k0}(l)^(d^n) * A_{l, f^k0(c(l)), n}   (and for B),
// and for k0 = 0 the point-level identity between the lifts
// (A(l), B(l)) and (c(l), 1). Requires B_{c,k0}(lambda) != 0.
bool conversion_check(const RationalMap1D& c, const FamilyParams& params,
                      int k0, int n);

} // namespace heightlab
