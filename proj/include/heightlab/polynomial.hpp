#pragma once

#include <string>
#include <vector>

#include "heightlab/arith.hpp"

namespace heightlab {

// Dense univariate polynomial over Q in the variable t. Coefficient i is the
// coefficient of t^i; the vector carries no trailing zeros, so the zero
// polynomial is the empty vector and degree() is -1 for it.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(Rat c);
    explicit RatPoly(std::vector<Rat> coeffs);
    static RatPoly t(); // the monomial t

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const Rat& coeff(long i) const; // 0 beyond the degree
    const Rat& leading() const;     // throws std::domain_error on zero poly
    Rat constant_term() const { return coeff(0); }

    Rat eval(const Rat& x) const;

    RatPoly operator-() const;
    friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(const Rat& s, const RatPoly& a);
    friend bool operator==(const RatPoly& a, const RatPoly& b) {
        return a.c_ == b.c_;
    }

    RatPoly pow(unsigned long e) const;
    RatPoly mul_t() const;      // multiply by t
    RatPoly div_t_exact() const; // divide by t; throws std::logic_error if
                                 // the constant term is nonzero

    // Normalizations used when cleaning user input.
    RatPoly monic() const;
    // Scale so coefficients are integers with overall content 1; the sign of
    // the scale is chosen so the leading coefficient is positive.
    RatPoly primitive_integer() const;

    std::string to_string() const; // "2*t^2 - t + 1" style

  private:
    void trim();
    std::vector<Rat> c_;
};

// Euclidean division in Q[t]: a = q*b + r with deg r < deg b. b nonzero.
std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& a, const RatPoly& b);

// Monic gcd in Q[t]; gcd(0, b) = monic b, gcd(0, 0) = 0.
RatPoly poly_gcd(const RatPoly& a, const RatPoly& b);

// gcd(a, b) = 1 in Q[t]? Certified by a degree-0 gcd modulo a prime not
// dividing either leading coefficient (which upper-bounds the true gcd
// degree); falls back to the exact Euclid only when every tried prime shows
// a nontrivial modular gcd. Much faster than poly_gcd on the high iterates,
// whose rational remainder sequences swell.
bool poly_coprime(const RatPoly& a, const RatPoly& b);

// c(t) = A(t)/B(t) with coprime, integer-cleared, content-free polynomials.
// At most one of A, B may be the zero polynomial (c identically 0 or inf).
struct RationalMap1D {
    RatPoly A, B;
    bool c0_zero = false; // A(0) = 0, the branch flag for the first iterate

    // Normalizes: divides out a common polynomial factor (reported through
    // *warning, which names the factor), clears to integer coefficients with
    // pair-wide content 1, pins the sign of the leading coefficient of B
    // (of A when B = 0).
    static RationalMap1D normalized(RatPoly A, RatPoly B,
                                    std::string* warning = nullptr);
    static RationalMap1D constant(const Rat& alpha);

    bool is_constant() const { return A.is_constant() && B.is_constant(); }
    long degree() const; // max(deg A, deg B); degree of the map

    std::string to_string() const;
};

} // namespace heightlab
