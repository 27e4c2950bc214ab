#pragma once

#include <vector>

#include "heightlab/arith.hpp"
#include "heightlab/dynamics.hpp"
#include "heightlab/heights.hpp"

namespace heightlab {

// The decision trichotomy: hhat vanishes exactly on preperiodic points, but
// a nonzero hhat has no effective positive lower bound, so "unknown" is an
// honest outcome at coarse eps.
struct PreperiodicVerdict {
    enum class Status { preperiodic, not_preperiodic, unknown };
    Status status = Status::unknown;
    long tail = 0, cycle = 0;  // preperiodic: exact orbit collision
    double hhat_lower = 0;     // not_preperiodic: certified value - error > 0
    CertifiedValue hhat{};     // the certified height (not computed when an
                               // exact collision settles the verdict)
    bool is_preperiodic() const { return status == Status::preperiodic; }
};

// Runs the exact reduced orbit with structural-equality collision detection
// up to orbit_cap (or the bit cap); otherwise certifies hhat within eps.
PreperiodicVerdict classify(const FamilyParams& params, const ProjPoint& x,
                            double eps, long orbit_cap,
                            const HeightOptions& opts = {});

// Replays the exact orbit and confirms x_(tail+cycle) = x_tail structurally.
bool verify_preperiodic(const FamilyParams& params, const ProjPoint& x,
                        long tail, long cycle,
                        const OrbitLimits& limits = {});

// h(lambda) < 3 d^2 (1 + ell + 2 h(alpha)) for every lambda making alpha
// preperiodic; ell = |prime_support(alpha)|. Throws on alpha = 0 (every
// lambda works there).
double parameter_height_bound(const Rat& alpha, int d);

// The Theorem-2 gap bound 3 d (1 + ell + 2 h(alpha)) for constant alpha != 0.
double theorem2_bound(const Rat& alpha, int d);

// |hhat_{f_lambda}(alpha) - h(lambda)/d| certified within eps (the generic
// height of a nonzero constant is 1/d). lambda = 0 uses the degenerate
// f_0(z) = z^(d-1) convention and returns ((d-1)/d) h(alpha) exactly.
CertifiedValue theorem2_gap(const FamilyParams& params, const Rat& alpha,
                            double eps, const HeightOptions& opts = {});

// All reduced lambda = p/q != 0 with log max(|p|, |q|) <= cap, ordered by
// (max(|p|,|q|), p, q). Throws RegionTooLarge past max_candidates.
std::vector<Rat> bounded_height_rationals(double cap,
                                          long max_candidates = 2000000);

struct SearchOptions {
    long orbit_cap = 256;
    long max_candidates = 2000000;
    int jobs = 0; // 0: library default (all hardware threads); 1: serial
    HeightOptions height{};
};

struct SearchHit {
    Rat lambda;
    long tail = 0, cycle = 0;
};

struct SearchReport {
    Rat alpha;
    int d = 2;
    double bound = 0; // 3 d^2 (1 + ell + 2 h(alpha))
    double cap = 0;   // the height cap actually searched (<= bound)
    long candidates = 0;
    std::vector<SearchHit> hits; // sorted by (max(|p|,|q|), p, q)
};

// Enumerates every reduced lambda with h(lambda) <= cap, classifies each,
// and re-verifies every preperiodic hit by exact orbit replay.
SearchReport search_preperiodic_parameters(const Rat& alpha, int d, double cap,
                                           double eps,
                                           const SearchOptions& opts = {});

} // namespace heightlab
