#include "heightlab/cocycle.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

Rat make_rat(Int num, Int den) {
    Rat r(std::move(num), std::move(den));
    r.canonicalize();
    return r;
}

// (valuation, unit mod modulus) of a nonzero rational with p-unit part u:
// x = p^val * u, den(u) coprime to p.
std::pair<long, Int> padic_split(const Int& p, const Int& modulus,
                                 const Rat& x) {
    long val = padic_valuation(p, x);
    Rat u = x;
    if (val > 0)
        u /= Rat(pow_int(p, static_cast<unsigned long>(val)));
    else if (val < 0)
        u *= Rat(pow_int(p, static_cast<unsigned long>(-val)));
    Int num = u.get_num() % modulus;
    if (num < 0) num += modulus;
    Int den_inv;
    if (!mpz_invert(den_inv.get_mpz_t(), u.get_den().get_mpz_t(),
                    modulus.get_mpz_t()))
        throw std::logic_error("p-adic unit denominator not invertible");
    return {val, num * den_inv % modulus};
}

} // namespace

detail::ArchCocycle PlaceCocycleState::begin_arch(const FamilyParams& params,
                                                  const Rat& A0,
                                                  const Rat& B0) {
    detail::ArchCocycle s;
    s.d = params.d;
    s.lambda = params.lambda.get_d();
    if (!std::isfinite(s.lambda))
        throw CapExceeded("lambda exceeds the archimedean double range");
    Rat absA = A0 < 0 ? Rat(-A0) : A0;
    Rat absB = B0 < 0 ? Rat(-B0) : B0;
    Rat m0 = std::max(absA, absB);
    s.log_m0 = log_abs(m0);
    s.a = Rat(A0 / m0).get_d();
    s.b = Rat(B0 / m0).get_d();
    s.scale = 1.0 / s.d;
    // initial conversions: lambda, a, b each carry <= 1 ulp
    s.rounding = 4 * DBL_EPSILON * (1.0 + std::fabs(s.log_m0));
    return s;
}

detail::FiniteCocycle PlaceCocycleState::begin_finite(
    const Place& v, const FamilyParams& params, const Rat& A0, const Rat& B0,
    long digits) {
    detail::FiniteCocycle s;
    s.d = params.d;
    s.p = v.prime();
    s.digits = digits;
    s.trusted = digits;
    s.modulus = pow_int(s.p, static_cast<unsigned long>(digits));
    s.log_p = log_abs(s.p);
    std::tie(s.lam_val, s.lam_unit) =
        padic_split(s.p, s.modulus, params.lambda);
    s.a_zero = A0 == 0;
    s.b_zero = B0 == 0;
    s.va = s.vb = 0;
    if (!s.a_zero) std::tie(s.va, s.ua) = padic_split(s.p, s.modulus, A0);
    if (!s.b_zero) std::tie(s.vb, s.ub) = padic_split(s.p, s.modulus, B0);
    long mu;
    if (s.a_zero)
        mu = s.vb;
    else if (s.b_zero)
        mu = s.va;
    else
        mu = std::min(s.va, s.vb);
    s.va -= mu;
    s.vb -= mu;
    s.m0 = Rat(-mu);
    s.acc = Rat(0);
    s.dpow = Int(params.d);
    return s;
}

PlaceCocycleState PlaceCocycleState::begin(const Place& v,
                                           const FamilyParams& params,
                                           const Rat& A0, const Rat& B0,
                                           long precision_digits) {
    if (A0 == 0 && B0 == 0)
        throw std::domain_error("cocycle start from the degenerate pair");
    PlaceCocycleState st;
    st.place_ = v;
    if (v.is_archimedean())
        st.state_ = begin_arch(params, A0, B0);
    else
        st.state_ = begin_finite(v, params, A0, B0, precision_digits);
    return st;
}

void PlaceCocycleState::advance_arch(detail::ArchCocycle& s,
                                     const FamilyParams& params) {
    const int d = s.d;
    double pa = 1, pb = 1;
    for (int i = 0; i < d; ++i) pa *= s.a;
    for (int i = 0; i < d - 1; ++i) pb *= s.b;
    double bn = s.a * pb;   // a * b^(d-1)
    double an = pa + s.lambda * (pb * s.b);
    double m = std::max(std::fabs(an), std::fabs(bn));
    // m >= min(|lambda|,1) / (2 max(|lambda|,1)) > 0 for lambda != 0; for
    // lambda = 0 the pair is (a^d, a b^(d-1)) with max(|a|,|b|) = 1, which
    // only vanishes if the true pair degenerated.
    if (m == 0.0)
        throw std::domain_error("archimedean cocycle pair degenerated");
    double g = std::log(m);
    s.a = an / m;
    s.b = bn / m;
    s.last_g = g;
    s.acc += g * s.scale;
    // Crude per-step bound: ~(2d+6) flops on renormalized values of size
    // <= 1 + |lambda| before dividing by m, plus the log and the scaled add.
    s.rounding += s.scale * DBL_EPSILON *
                  ((2.0 * d + 6.0) * (1.0 + std::fabs(s.lambda)) / m +
                   std::fabs(g) + 2.0);
    s.scale /= params.d;
}

void PlaceCocycleState::advance_finite(detail::FiniteCocycle& s,
                                       const FamilyParams& params) {
    const unsigned long d = static_cast<unsigned long>(s.d);
    bool an_zero = false, bn_zero = false;
    long van = 0, vbn = 0;
    Int uan, ubn;

    if (s.a_zero) {
        // (0, b) -> (lambda * b^d, 0)
        bn_zero = true;
        van = s.lam_val + s.d * s.vb;
        mpz_powm_ui(uan.get_mpz_t(), s.ub.get_mpz_t(), d,
                    s.modulus.get_mpz_t());
        uan = uan * s.lam_unit % s.modulus;
    } else if (s.b_zero) {
        // (a, 0) -> (a^d, 0): the unit powers up, the valuation stays d*va
        bn_zero = true;
        van = s.d * s.va;
        mpz_powm_ui(uan.get_mpz_t(), s.ua.get_mpz_t(), d,
                    s.modulus.get_mpz_t());
    } else {
        vbn = s.va + (s.d - 1) * s.vb;
        mpz_powm_ui(ubn.get_mpz_t(), s.ub.get_mpz_t(), d - 1,
                    s.modulus.get_mpz_t());
        ubn = ubn * s.ua % s.modulus;

        // a^d + lambda b^d: align both terms at the smaller valuation
        long v1 = s.d * s.va;
        long v2 = s.lam_val + s.d * s.vb;
        Int t1, t2;
        mpz_powm_ui(t1.get_mpz_t(), s.ua.get_mpz_t(), d, s.modulus.get_mpz_t());
        mpz_powm_ui(t2.get_mpz_t(), s.ub.get_mpz_t(), d, s.modulus.get_mpz_t());
        t2 = t2 * s.lam_unit % s.modulus;
        long base = std::min(v1, v2);
        // a shift of >= N digits is 0 mod p^N; never materialize p^huge
        auto shift = [&](Int& t, long e) {
            if (e == 0) return;
            if (e >= s.digits)
                t = 0;
            else
                t = t * pow_int(s.p, static_cast<unsigned long>(e)) % s.modulus;
        };
        shift(t1, v1 - base);
        shift(t2, v2 - base);
        Int sum = (t1 + t2) % s.modulus;
        Int trusted_mod = pow_int(s.p, static_cast<unsigned long>(s.trusted));
        if (mpz_divisible_p(sum.get_mpz_t(), trusted_mod.get_mpz_t())) {
            // The valuation of the sum is not visible within the trusted
            // digits. (It may even be an exact zero, which no finite
            // precision resolves; the callers' orbit prescan rules that out
            // before this kernel runs.)
            throw PrecisionExhausted(s.digits);
        }
        long t = 0;
        if (sum != 0) {
            Int rest;
            t = static_cast<long>(mpz_remove(rest.get_mpz_t(), sum.get_mpz_t(),
                                             s.p.get_mpz_t()));
        }
        van = base + t;
        if (t > 0) {
            mpz_divexact(uan.get_mpz_t(), sum.get_mpz_t(),
                         pow_int(s.p, static_cast<unsigned long>(t)).get_mpz_t());
            s.trusted -= t; // the quotient is only known mod p^(T-t)
        } else {
            uan = sum;
        }
    }

    long mu;
    if (an_zero)
        mu = vbn;
    else if (bn_zero)
        mu = van;
    else
        mu = std::min(van, vbn);

    s.a_zero = an_zero;
    s.b_zero = bn_zero;
    s.va = an_zero ? 0 : van - mu;
    s.vb = bn_zero ? 0 : vbn - mu;
    s.ua = std::move(uan);
    s.ub = std::move(ubn);
    s.last_mu = mu;
    s.acc += make_rat(Int(-mu), s.dpow);
    s.dpow *= params.d;
}

void PlaceCocycleState::advance(const FamilyParams& params) {
    if (auto* a = std::get_if<detail::ArchCocycle>(&state_))
        advance_arch(*a, params);
    else
        advance_finite(std::get<detail::FiniteCocycle>(state_), params);
    ++k_;
    // per-step sanity: every increment obeys the two-sided bound
    //   log(min{|l|_v,1} / 2max{|l|_v,1}) <= g_k <= log(max{|l|_v,1} + 1)
    if (params.lambda != 0) {
        double lam = abs_value(place_, params.lambda);
        double g = last_increment();
        if (g < std::log(std::min(lam, 1.0) / (2 * std::max(lam, 1.0))) - 1e-9 ||
            g > std::log(std::max(lam, 1.0) + 1.0) + 1e-9)
            throw std::logic_error("cocycle increment outside the certified "
                                   "per-step bounds");
    }
}

long PlaceCocycleState::precision_digits() const {
    if (auto* f = std::get_if<detail::FiniteCocycle>(&state_)) return f->digits;
    throw std::domain_error("archimedean state has no working precision");
}

double PlaceCocycleState::log_m0() const {
    if (auto* a = std::get_if<detail::ArchCocycle>(&state_)) return a->log_m0;
    const detail::FiniteCocycle& f = std::get<detail::FiniteCocycle>(state_);
    return f.m0.get_d() * f.log_p;
}

double PlaceCocycleState::series_sum() const {
    if (auto* a = std::get_if<detail::ArchCocycle>(&state_)) return a->acc;
    const detail::FiniteCocycle& f = std::get<detail::FiniteCocycle>(state_);
    return f.acc.get_d() * f.log_p;
}

double PlaceCocycleState::partial_value() const {
    if (auto* a = std::get_if<detail::ArchCocycle>(&state_))
        return a->log_m0 + a->acc;
    const detail::FiniteCocycle& f = std::get<detail::FiniteCocycle>(state_);
    return Rat(f.m0 + f.acc).get_d() * f.log_p;
}

double PlaceCocycleState::rounding_error() const {
    if (auto* a = std::get_if<detail::ArchCocycle>(&state_)) return a->rounding;
    // one rounding of coefficient * log p
    return 4 * DBL_EPSILON * std::fabs(partial_value());
}

double PlaceCocycleState::last_increment() const {
    if (auto* a = std::get_if<detail::ArchCocycle>(&state_)) return a->last_g;
    const detail::FiniteCocycle& f = std::get<detail::FiniteCocycle>(state_);
    return -static_cast<double>(f.last_mu) * f.log_p;
}

PlaceCocycleState cocycle_step(const PlaceCocycleState& state,
                               const FamilyParams& params) {
    PlaceCocycleState next = state;
    next.advance(params);
    return next;
}

double cocycle_tail_bound(int d, double log_abs_lambda_v, long n0) {
    double width = M_LN2 + std::fabs(log_abs_lambda_v);
    return width / (std::pow(d, static_cast<double>(n0)) * (d - 1));
}

double fundamental_tail_bound(double m, double M, int d, long k0) {
    double top = std::max(-std::log(m), std::log(M));
    return top / (std::pow(d, static_cast<double>(k0)) * (d - 1));
}

} // namespace heightlab
