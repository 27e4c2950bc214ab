#include "heightlab/preperiodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "heightlab/errors.hpp"

namespace heightlab {

PreperiodicVerdict classify(const FamilyParams& params, const ProjPoint& x,
                            double eps, long orbit_cap,
                            const HeightOptions& opts) {
    if (eps <= 0) throw std::domain_error("eps must be positive");
    PreperiodicVerdict verdict;
    std::unordered_map<ProjPoint, long> seen;
    ProjPoint cur = x;
    // Collision scan under the prescan-scale bit cap: a preperiodic orbit is
    // a fixed finite set of small points, while an escaping orbit doubles
    // its bit-length per step and only wastes time before the certified
    // height settles it below.
    OrbitLimits scan_limits{opts.prescan.max_bits};
    for (long k = 0; k <= orbit_cap; ++k) {
        auto [it, fresh] = seen.emplace(cur, k);
        if (!fresh) {
            verdict.status = PreperiodicVerdict::Status::preperiodic;
            verdict.tail = it->second;
            verdict.cycle = k - it->second;
            return verdict;
        }
        try {
            cur = orbit_step(params, cur, scan_limits);
        } catch (const CapExceeded&) {
            break; // escaping orbit; the certified height decides below
        }
    }
    verdict.hhat = global_canonical_height(params, x, eps, opts);
    if (verdict.hhat.value - verdict.hhat.error > 0) {
        verdict.status = PreperiodicVerdict::Status::not_preperiodic;
        verdict.hhat_lower = verdict.hhat.value - verdict.hhat.error;
    } else {
        verdict.status = PreperiodicVerdict::Status::unknown;
    }
    return verdict;
}

bool verify_preperiodic(const FamilyParams& params, const ProjPoint& x,
                        long tail, long cycle, const OrbitLimits& limits) {
    if (cycle <= 0) return false;
    std::vector<ProjPoint> orbit = orbit_point(params, x, tail + cycle, limits);
    return orbit[static_cast<std::size_t>(tail + cycle)] ==
           orbit[static_cast<std::size_t>(tail)];
}

double parameter_height_bound(const Rat& alpha, int d) {
    return d * theorem2_bound(alpha, d);
}

double theorem2_bound(const Rat& alpha, int d) {
    if (alpha == 0)
        throw std::domain_error(
            "alpha = 0 is preperiodic for every lambda; the bound is void");
    double ell = static_cast<double>(prime_support(alpha).size());
    return 3.0 * d * (1.0 + ell + 2.0 * weil_height(alpha));
}

CertifiedValue theorem2_gap(const FamilyParams& params, const Rat& alpha,
                            double eps, const HeightOptions& opts) {
    if (alpha == 0)
        throw std::domain_error("theorem2_gap requires alpha != 0");
    if (params.lambda == 0) {
        // f_0(z) = z^(d-1): hhat_{f_0}(alpha) = h(alpha), and the gap against
        // hhat_f(alpha) h(alpha) = h(alpha)/d is ((d-1)/d) h(alpha).
        double v = (params.d - 1.0) / params.d * weil_height(alpha);
        return {v, 0.0};
    }
    CertifiedValue hhat = global_canonical_height(
        params, ProjPoint::from_rational(alpha), eps, opts);
    double predicted = weil_height(params.lambda) / params.d;
    return {std::fabs(hhat.value - predicted), hhat.error};
}

std::vector<Rat> bounded_height_rationals(double cap, long max_candidates) {
    if (cap < 0) throw std::domain_error("cap must be >= 0");
    // h(p/q) <= cap  <=>  max(|p|, q) <= floor(e^cap), with a nudge so that
    // cap = log(H) admits H despite the floating exp.
    long H = static_cast<long>(std::floor(std::exp(cap) * (1 + 1e-12)));
    if (H < 1) H = 1;
    if (2.0 * H * H > static_cast<double>(max_candidates))
        throw RegionTooLarge("enumeration box " + std::to_string(H) +
                             " exceeds the candidate budget");
    std::vector<Rat> out;
    // ordered by increasing max(|p|, q), then (p, q); partial results stay
    // meaningful if a caller's budget is hit
    for (long m = 1; m <= H; ++m) {
        std::vector<Rat> ring;
        for (long q = 1; q <= m; ++q) { // p = +-m
            if (std::gcd(m, q) != 1) continue;
            ring.emplace_back(-m, q);
            ring.emplace_back(m, q);
        }
        for (long p = 1; p < m; ++p) { // q = m
            if (std::gcd(p, m) != 1) continue;
            ring.emplace_back(-p, m);
            ring.emplace_back(p, m);
        }
        std::sort(ring.begin(), ring.end(), [](const Rat& a, const Rat& b) {
            if (a.get_num() != b.get_num()) return a.get_num() < b.get_num();
            return a.get_den() < b.get_den();
        });
        out.insert(out.end(), ring.begin(), ring.end());
    }
    return out;
}

SearchReport search_preperiodic_parameters(const Rat& alpha, int d, double cap,
                                           double eps,
                                           const SearchOptions& opts) {
    if (alpha == 0)
        throw std::domain_error("alpha = 0 is preperiodic for every lambda");
    SearchReport report;
    report.alpha = alpha;
    report.d = d;
    report.bound = parameter_height_bound(alpha, d);
    report.cap = std::min(cap, report.bound);
    std::vector<Rat> candidates =
        bounded_height_rationals(report.cap, opts.max_candidates);
    report.candidates = static_cast<long>(candidates.size());
    ProjPoint x = ProjPoint::from_rational(alpha);

    std::vector<PreperiodicVerdict> verdicts(candidates.size());
    const long n = static_cast<long>(candidates.size());
#ifdef _OPENMP
    int jobs = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (long i = 0; i < n; ++i) {
        FamilyParams params(d, candidates[static_cast<std::size_t>(i)]);
        verdicts[static_cast<std::size_t>(i)] =
            classify(params, x, eps, opts.orbit_cap, opts.height);
    }
    for (long i = 0; i < n; ++i) {
        const auto& v = verdicts[static_cast<std::size_t>(i)];
        if (!v.is_preperiodic()) continue;
        const Rat& lambda = candidates[static_cast<std::size_t>(i)];
        FamilyParams params(d, lambda);
        if (!verify_preperiodic(params, x, v.tail, v.cycle, opts.height.orbit))
            throw std::logic_error("preperiodic hit failed exact replay");
        report.hits.push_back({lambda, v.tail, v.cycle});
    }
    return report;
}

} // namespace heightlab
