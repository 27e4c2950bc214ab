#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "heightlab/arith.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

// One sweep observation: hhat_{f_lambda}(c(lambda)) against the prediction
// hhat_f(c) * h(lambda).
struct SweepRow {
    Rat lambda;
    double h_lambda = 0;
    double hhat = 0;
    double hhat_err = 0;
    double predicted = 0;
    double gap = 0; // |hhat - predicted|
};

struct SweepConfig {
    int d = 2;
    RationalMap1D map;
    double hmax = 1;
    long samples = 0;
    double eps = 1e-4;
    std::uint64_t seed = 0;
    int jobs = 0; // 0: all hardware threads, 1: serial kernel
    HeightOptions height{};
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double max_gap = 0;
    Rat hhat_generic; // exact hhat_f(c)
};

// Deterministic sampling: uniform reduced (p, q) in the box
// max(|p|, |q|) <= e^hmax via mt19937_64 rejection (q = 0, p = 0,
// non-coprime pairs, and the finitely many lambda with c(lambda) in {0, inf}
// are rejected). Identical seeds give identical rows.
std::vector<Rat> sample_lambdas(const SweepConfig& cfg);

// OpenMP kernel over the sampled candidates (row order is by sample index,
// independent of scheduling).
SweepResult run_sweep(const SweepConfig& cfg);
// Serial reference implementation; must produce bit-identical rows.
SweepResult run_sweep_serial(const SweepConfig& cfg);

// RFC-4180 rows under the pinned header
// lambda,h_lambda,hhat,hhat_err,predicted,gap, preceded by one comment line
// recording the seed and flags. Byte-deterministic for a given config.
void write_sweep_csv(std::ostream& out, const SweepConfig& cfg,
                     const SweepResult& result);

std::string format_double(double x); // shortest round-trip-stable "%.17g"
std::string csv_escape(const std::string& field);

} // namespace heightlab
