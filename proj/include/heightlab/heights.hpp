#pragma once

#include <string>
#include <vector>

#include "heightlab/arith.hpp"
#include "heightlab/cocycle.hpp"
#include "heightlab/dynamics.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

// A real number with a rigorous error radius: the true quantity lies in
// [value - error, value + error].
struct CertifiedValue {
    double value = 0;
    double error = 0;
};

enum class PlaceReason { archimedean, divides_lambda, divides_first_iterate };

std::string to_string(PlaceReason r);

// The finite set of places that can carry a nonzero local height; every
// omitted place has local canonical height exactly 0.
struct PlaceSet {
    struct Entry {
        Place place;
        PlaceReason reason;
    };
    std::vector<Entry> entries;
    std::size_t size() const { return entries.size(); }
    bool contains(const Place& v) const;
};

struct HeightOptions {
    long max_iterations = 20000;  // ceiling on the truncation index n0
    long start_digits = 32;       // initial p-adic working precision
    long max_digits = 1L << 16;   // precision-doubling cap
    PrescanLimits prescan{};      // bounded exact-orbit scan
    OrbitLimits orbit{};          // caps for the exact oracle path
};

// {archimedean} + every prime at which lambda or the exact first-iterate
// pair (A1, B1) of the canonical lift is a non-unit (zero coordinates
// contribute no primes). A conservative superset of the minimal set; every
// omitted place provably has local height 0.
PlaceSet sufficient_places(const FamilyParams& params, const ProjPoint& x0);
PlaceSet sufficient_places_lift(const FamilyParams& params, const Rat& A0,
                                const Rat& B0);

// Good-reduction test for c = A/B at a finite place: (i) all coefficients
// v-integral, (ii) resultant and leading coefficients v-units, (iii) the
// constant coefficient of A, if nonzero, a v-unit. When true,
// log M_{c,n,v}(lambda)/d^n = log M_{c,1,v}(lambda)/d for every lambda != 0
// and n >= 1, so one exact step replaces the limit.
bool good_place_shortcut(const RationalMap1D& c, const Place& v);

// Local canonical height of x0 at v for the pinned lift (the canonical
// coprime-integer pair; [x:1] for field elements), certified within eps.
CertifiedValue local_canonical_height(const FamilyParams& params,
                                      const ProjPoint& x0, const Place& v,
                                      double eps,
                                      const HeightOptions& opts = {});
CertifiedValue local_canonical_height_lift(const FamilyParams& params,
                                           const Rat& A0, const Rat& B0,
                                           const Place& v, double eps,
                                           const HeightOptions& opts = {});

// Global canonical height as the certified finite sum over
// sufficient_places, per-place budget eps/|S|. Lift-invariant.
CertifiedValue global_canonical_height(const FamilyParams& params,
                                       const ProjPoint& x0, double eps,
                                       const HeightOptions& opts = {});
CertifiedValue global_canonical_height_lift(const FamilyParams& params,
                                            const Rat& A0, const Rat& B0,
                                            double eps,
                                            const HeightOptions& opts = {});

// h(f^n(x))/d^n from the exact reduced orbit; an independent code path from
// the cocycle engine, kept as the test oracle.
double naive_height_oracle(const FamilyParams& params, const ProjPoint& x0,
                           long n, const OrbitLimits& limits = {});

} // namespace heightlab
