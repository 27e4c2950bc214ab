#pragma once

#include <variant>

#include "heightlab/arith.hpp"
#include "heightlab/dynamics.hpp"

namespace heightlab {

namespace detail {

struct ArchCocycle {
    int d = 2;
    double lambda = 0;
    double a = 0, b = 0;
    double log_m0 = 0;
    double acc = 0;      // sum g_k / d^(k+1)
    double rounding = 0; // crude accumulated bound
    double last_g = 0;
    double scale = 1;    // d^(-k-1) for the next step
};

struct FiniteCocycle {
    int d = 2;
    Int p;
    long digits = 0;  // N: working precision, base-p digits
    long trusted = 0; // T <= N: digits currently certain
    Int modulus;      // p^N
    long lam_val = 0;
    Int lam_unit;     // lambda = p^lam_val * lam_unit
    double log_p = 0;
    // components; a_zero/b_zero mark exact structural zeros
    bool a_zero = false, b_zero = false;
    long va = 0, vb = 0; // min over nonzero components is 0
    Int ua, ub;
    Rat m0;   // log M_0 = m0 * log p
    Rat acc;  // series = acc * log p, exact
    long last_mu = 0;
    Int dpow;     // d^(k+1) for the next step
};

} // namespace detail

// Bounded-precision escape-rate cocycle at one place. Starting from a lift
// (A0, B0), each step advances the renormalized pair one iterate and appends
// g_k / d^(k+1) to the accumulated series, where
//   g_k = log( max{|A_(k+1)|_v, |B_(k+1)|_v} / max{|A_k|_v, |B_k|_v}^d ).
// The partial sums satisfy, exactly,
//   log M_0 + sum_{k<n} g_k/d^(k+1) = log max{|A_n|_v, |B_n|_v} / d^n.
//
// Archimedean states hold a floating pair with max(|a|,|b|) = 1 and a crude
// accumulated rounding bound (operation count x machine epsilon x magnitude).
// Finite states hold exact valuations plus unit parts mod p^N with
// min(v_p(a), v_p(b)) = 0; a valuation tie that cannot be resolved within
// the trusted digits raises PrecisionExhausted, and the caller restarts from
// the initial state with N doubled.
class PlaceCocycleState {
  public:
    static PlaceCocycleState begin(const Place& v, const FamilyParams& params,
                                   const Rat& A0, const Rat& B0,
                                   long precision_digits = 32);

    void advance(const FamilyParams& params); // may throw PrecisionExhausted

    const Place& place() const { return place_; }
    long iterate_index() const { return k_; }
    long precision_digits() const; // finite places only

    // log M_0 and the accumulated series, as doubles.
    double log_m0() const;
    double series_sum() const;
    // log M_0 + series, i.e. log M_k / d^k. Exact at finite places up to the
    // single final rounding of (rational coefficient) * log p.
    double partial_value() const;
    // Rigorous bound on the floating-point error of partial_value(); zero at
    // finite places.
    double rounding_error() const;
    // g of the most recent step.
    double last_increment() const;

  private:
    PlaceCocycleState() = default;
    Place place_ = Place::archimedean();
    long k_ = 0;
    std::variant<detail::ArchCocycle, detail::FiniteCocycle> state_;

    static detail::ArchCocycle begin_arch(const FamilyParams& params,
                                          const Rat& A0, const Rat& B0);
    static detail::FiniteCocycle begin_finite(const Place& v,
                                              const FamilyParams& params,
                                              const Rat& A0, const Rat& B0,
                                              long digits);
    void advance_arch(detail::ArchCocycle& s, const FamilyParams& params);
    void advance_finite(detail::FiniteCocycle& s, const FamilyParams& params);
};

// Pure state-in/state-out wrapper over advance().
PlaceCocycleState cocycle_step(const PlaceCocycleState& state,
                               const FamilyParams& params);

// Tail bound of the cocycle series past n0 >= 1 steps, from the telescoped
// per-step bounds: (log(2 max{1,|l|_v}) - log(min{1,|l|_v})) / (d^n0 (d-1)).
double cocycle_tail_bound(int d, double log_abs_lambda_v, long n0);

// Deviation bound |lim log N_k/d^k - log N_k0/d^k0| for any sequence with
// per-step ratio N_(k+1)/N_k^d in [m, M]:
//   max(-log m, log M) / (d^k0 (d-1)).
double fundamental_tail_bound(double m, double M, int d, long k0);

} // namespace heightlab
