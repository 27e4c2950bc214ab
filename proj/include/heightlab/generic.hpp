#pragma once

#include "heightlab/arith.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

// Canonical height of c on the generic fiber of f_t(z) = (z^d + t)/z:
// max(deg A1, deg B1)/d as an exact rational, cross-validated against the
// second iterate. Returns 0 when A or B is the zero polynomial (c identically
// 0 or infinity is preperiodic).
Rat generic_height(const RationalMap1D& c, int d);

// gcd(A_n, B_n) = 1 in Q[t] for all n <= nmax.
bool verify_coprime_iterates(const RationalMap1D& c, int d, long nmax);

// Sylvester-matrix resultant, exact. Convention for a constant q != 0:
// Res(P, q) = q^deg(P) (and Res(p, Q) = p^deg(Q)). P, Q nonzero.
Rat poly_resultant(const RatPoly& P, const RatPoly& Q);

} // namespace heightlab
