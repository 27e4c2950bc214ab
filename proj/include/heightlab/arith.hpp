#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace heightlab {

// Exact arbitrary-precision scalars. mpq_class is kept canonical by GMP:
// gcd(|num|, den) = 1, den >= 1, zero is 0/1.
using Int = mpz_class;
using Rat = mpq_class;

long bit_length(const Int& z);

// log|z| computed from (bit length, leading mantissa) so huge integers never
// round-trip through a float. Requires z != 0.
double log_abs(const Int& z);
double log_abs(const Rat& x);

Int pow_int(const Int& base, unsigned long e);
Rat pow_rat(const Rat& base, unsigned long e);

// Baillie–PSW + Miller–Rabin via GMP; no composite below 2^64 passes.
bool is_prime(const Int& n);

// A place of Q: the archimedean absolute value or one p-adic per prime.
class Place {
  public:
    static Place archimedean();
    static Place finite(Int p); // throws std::domain_error unless p is prime

    bool is_archimedean() const { return arch_; }
    bool is_finite() const { return !arch_; }
    const Int& prime() const;

    std::string to_string() const; // "inf" or the decimal prime

    friend bool operator==(const Place& a, const Place& b) {
        return a.arch_ == b.arch_ && a.p_ == b.p_;
    }
    friend bool operator<(const Place& a, const Place& b) {
        if (a.arch_ != b.arch_) return a.arch_; // archimedean sorts first
        return a.p_ < b.p_;
    }

  private:
    Place(bool arch, Int p) : arch_(arch), p_(std::move(p)) {}
    bool arch_;
    Int p_;
};

// v_p(x) = v_p(num) - v_p(den), exact. Throws std::domain_error on x = 0.
long padic_valuation(const Int& p, const Int& x);
long padic_valuation(const Int& p, const Rat& x);

// |x|_v with the product-formula normalization: |x|_p = p^(-v_p(x)),
// archimedean = the usual absolute value. Exact on rationals at every place.
Rat abs_value_exact(const Place& v, const Rat& x);
double abs_value(const Place& v, const Rat& x);
// log|x|_v as a double; x != 0.
double log_abs_value(const Place& v, const Rat& x);

// The sorted primes dividing numerator or denominator; its size is the
// count ell entering the parameter bound. Throws std::domain_error on x = 0.
std::vector<Int> prime_support(const Rat& x);

// A point of P^1(Q) in canonical form: coprime integers (a, b) with b >= 0,
// and b = 0 only for [1:0]. Equality of points is structural equality.
class ProjPoint {
  public:
    ProjPoint(Int a, Int b); // throws std::domain_error on (0, 0)
    static ProjPoint infinity() { return ProjPoint(1, 0); }
    static ProjPoint from_rational(const Rat& x);

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    bool is_infinity() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0; }
    Rat to_rational() const; // throws std::domain_error at infinity

    std::string to_string() const; // "a", "a/b", or "inf"

    friend bool operator==(const ProjPoint& x, const ProjPoint& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

  private:
    Int a_, b_;
};

// h([a:b]) = log max(|a|, |b|) for the canonical coprime-integer form;
// h(inf) = 0. Lift-invariant by construction.
double weil_height(const ProjPoint& x);
double weil_height(const Rat& x); // h([x:1])

std::size_t hash_value(const Int& z);

std::string to_fraction_string(const Rat& x); // "p" or "p/q", q > 1

} // namespace heightlab

template <> struct std::hash<heightlab::ProjPoint> {
    std::size_t operator()(const heightlab::ProjPoint& x) const {
        std::size_t h = heightlab::hash_value(x.a());
        return h ^ (heightlab::hash_value(x.b()) + 0x9e3779b97f4a7c15ULL +
                    (h << 6) + (h >> 2));
    }
};
