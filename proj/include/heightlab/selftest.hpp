#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace heightlab {

struct SuiteResult {
    std::string name;
    bool passed = false;
    long checks = 0;
    std::string detail; // first failure, or a one-line summary
};

// Embedded invariant suites, deterministic for a given seed. These back both
// `heightlab selftest` and the acceptance runs.
namespace selftest {

// Eq.-level lift-conversion identities on random (c, d, lambda, k0, n),
// exact arithmetic.
SuiteResult conversion(long instances = 50, std::uint64_t seed = 1);

// Telescoped tail bound |log M_n/d^n - log M_n0/d^n0| <= tail(n0) checked
// with exact pair iteration per place, n0 <= n <= 10 (8 for d = 5).
SuiteResult tailbound(long instances = 100, std::uint64_t seed = 2);

// Every prime excluded by sufficient_places has exact log M_{n,p} = 0 for
// n <= 6 (the 20 smallest excluded primes per instance).
SuiteResult goodplace(long instances = 50, std::uint64_t seed = 3);

// gcd(A_n, B_n) = 1 for n <= 4 on random maps, plus the degree law
// deg A_n > deg B_n for c(0) != 0.
SuiteResult coprime(long instances = 40, std::uint64_t seed = 4);

std::vector<SuiteResult> run_all();
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name);

} // namespace selftest
} // namespace heightlab
