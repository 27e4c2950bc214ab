#include "heightlab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "heightlab/errors.hpp"
#include "heightlab/generic.hpp"

namespace heightlab {

namespace {

// Unbiased bounded draw from the engine's raw 64-bit stream; rejection keeps
// the result independent of any library's distribution internals, so the
// sampled sequence is pinned by the mt19937_64 standard alone.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

SweepRow evaluate_row(const SweepConfig& cfg, double hhat_generic,
                      const Rat& lambda) {
    FamilyParams params(cfg.d, lambda);
    Rat xa = cfg.map.A.eval(lambda);
    Rat xb = cfg.map.B.eval(lambda);
    ProjPoint x = xb == 0 ? ProjPoint::infinity()
                          : ProjPoint::from_rational(Rat(xa / xb));
    SweepRow row;
    row.lambda = lambda;
    row.h_lambda = weil_height(lambda);
    CertifiedValue hhat = global_canonical_height(params, x, cfg.eps, cfg.height);
    row.hhat = hhat.value;
    row.hhat_err = hhat.error;
    row.predicted = hhat_generic * row.h_lambda;
    row.gap = std::fabs(row.hhat - row.predicted);
    return row;
}

SweepResult run_rows(const SweepConfig& cfg, bool parallel) {
    SweepResult result;
    result.hhat_generic = generic_height(cfg.map, cfg.d);
    const double hg = result.hhat_generic.get_d();
    std::vector<Rat> lambdas = sample_lambdas(cfg);
    result.rows.resize(lambdas.size());
    const long n = static_cast<long>(lambdas.size());
    if (parallel) {
#ifdef _OPENMP
        int jobs = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
        for (long i = 0; i < n; ++i)
            result.rows[static_cast<std::size_t>(i)] =
                evaluate_row(cfg, hg, lambdas[static_cast<std::size_t>(i)]);
    } else {
        for (long i = 0; i < n; ++i)
            result.rows[static_cast<std::size_t>(i)] =
                evaluate_row(cfg, hg, lambdas[static_cast<std::size_t>(i)]);
    }
    for (const SweepRow& row : result.rows)
        result.max_gap = std::max(result.max_gap, row.gap);
    return result;
}

} // namespace

std::vector<Rat> sample_lambdas(const SweepConfig& cfg) {
    if (cfg.samples < 0) throw std::domain_error("samples must be >= 0");
    if (cfg.hmax < 0) throw std::domain_error("hmax must be >= 0");
    if (cfg.map.A.is_zero() || cfg.map.B.is_zero())
        throw std::domain_error("map is identically 0 or infinity");
    const double Hd = std::floor(std::exp(cfg.hmax) * (1 + 1e-12));
    if (Hd > 9.0e18) throw RegionTooLarge("sweep box exceeds 2^63");
    const std::uint64_t H = static_cast<std::uint64_t>(std::max(1.0, Hd));
    std::mt19937_64 rng(cfg.seed);
    std::vector<Rat> out;
    out.reserve(static_cast<std::size_t>(cfg.samples));
    long dry = 0;
    while (out.size() < static_cast<std::size_t>(cfg.samples)) {
        if (++dry > 100000)
            throw RegionTooLarge("sweep box rejected 100000 draws in a row");
        long p = static_cast<long>(bounded(rng, 2 * H + 1)) -
                 static_cast<long>(H);
        long q = static_cast<long>(bounded(rng, H)) + 1;
        if (p == 0 || std::gcd(p < 0 ? -p : p, q) != 1) continue;
        Rat lambda(p, q);
        // the finitely many parameters with c(lambda) in {0, inf} carry no
        // information about the variation bound; skip them
        if (cfg.map.A.eval(lambda) == 0 || cfg.map.B.eval(lambda) == 0)
            continue;
        out.push_back(std::move(lambda));
        dry = 0;
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg) { return run_rows(cfg, true); }

SweepResult run_sweep_serial(const SweepConfig& cfg) {
    return run_rows(cfg, false);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepConfig& cfg,
                     const SweepResult& result) {
    out << "# heightlab sweep seed=" << cfg.seed << " d=" << cfg.d
        << " map=" << csv_escape(cfg.map.to_string())
        << " hmax=" << format_double(cfg.hmax) << " samples=" << cfg.samples
        << " eps=" << format_double(cfg.eps) << "\n";
    out << "lambda,h_lambda,hhat,hhat_err,predicted,gap\n";
    for (const SweepRow& r : result.rows) {
        out << csv_escape(to_fraction_string(r.lambda)) << ','
            << format_double(r.h_lambda) << ',' << format_double(r.hhat) << ','
            << format_double(r.hhat_err) << ',' << format_double(r.predicted)
            << ',' << format_double(r.gap) << "\n";
    }
}

} // namespace heightlab
