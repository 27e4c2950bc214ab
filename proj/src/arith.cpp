#include "heightlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heightlab {

long bit_length(const Int& z) {
    if (z == 0) return 0;
    return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

double log_abs(const Int& z) {
    if (z == 0) throw std::domain_error("log_abs(0)");
    signed long exp2;
    double m = mpz_get_d_2exp(&exp2, z.get_mpz_t()); // |m| in [0.5, 1)
    return std::log(std::fabs(m)) + static_cast<double>(exp2) * M_LN2;
}

double log_abs(const Rat& x) {
    if (x == 0) throw std::domain_error("log_abs(0)");
    return log_abs(Int(x.get_num())) - log_abs(Int(x.get_den()));
}

Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
    return r; // power of a canonical fraction is canonical
}

bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

Place Place::archimedean() { return Place(true, Int(0)); }

Place Place::finite(Int p) {
    if (p < 2 || !is_prime(p))
        throw std::domain_error("finite place requires a prime, got " +
                                p.get_str());
    return Place(false, std::move(p));
}

const Int& Place::prime() const {
    if (arch_) throw std::domain_error("archimedean place has no prime");
    return p_;
}

std::string Place::to_string() const { return arch_ ? "inf" : p_.get_str(); }

long padic_valuation(const Int& p, const Int& x) {
    if (x == 0) throw std::domain_error("p-adic valuation of 0");
    Int rest;
    return static_cast<long>(
        mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long padic_valuation(const Int& p, const Rat& x) {
    if (x == 0) throw std::domain_error("p-adic valuation of 0");
    return padic_valuation(p, Int(x.get_num())) -
           padic_valuation(p, Int(x.get_den()));
}

Rat abs_value_exact(const Place& v, const Rat& x) {
    if (x == 0) return Rat(0);
    if (v.is_archimedean()) return x < 0 ? Rat(-x) : x;
    long k = padic_valuation(v.prime(), x);
    Rat r;
    if (k >= 0)
        r = Rat(1, pow_int(v.prime(), static_cast<unsigned long>(k)));
    else
        r = Rat(pow_int(v.prime(), static_cast<unsigned long>(-k)));
    return r;
}

double abs_value(const Place& v, const Rat& x) {
    if (x == 0) return 0.0;
    if (v.is_archimedean()) return std::fabs(x.get_d());
    return std::exp(log_abs_value(v, x));
}

double log_abs_value(const Place& v, const Rat& x) {
    if (x == 0) throw std::domain_error("log_abs_value(0)");
    if (v.is_archimedean()) return log_abs(x);
    return -static_cast<double>(padic_valuation(v.prime(), x)) *
           log_abs(v.prime());
}

namespace {

// Pollard's rho (Brent variant) on odd composites with no small factors.
Int pollard_rho(const Int& n, unsigned long c0) {
    Int x(2), y(2), d(1);
    Int c(c0);
    while (d == 1) {
        x = (x * x + c) % n;
        y = (y * y + c) % n;
        y = (y * y + c) % n;
        Int diff = x - y;
        if (diff == 0) return Int(0); // cycle without factor; retry with c+1
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    return d == n ? Int(0) : d;
}

void factor_into(const Int& n, std::vector<Int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    for (unsigned long c = 1;; ++c) {
        Int d = pollard_rho(n, c);
        if (d != 0) {
            factor_into(d, out);
            factor_into(Int(n / d), out);
            return;
        }
    }
}

void prime_factors(Int n, std::vector<Int>& out) {
    if (n < 0) n = -n;
    if (n <= 1) return;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.push_back(Int(p));
            Int rest;
            mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Int(p).get_mpz_t());
            n = rest;
        }
    }
    // trial division below 10^4, then rho for whatever big cofactor remains
    for (unsigned long p = 17; p < 10000 && n > 1; p += 2) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.push_back(Int(p));
            Int rest;
            mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Int(p).get_mpz_t());
            n = rest;
        }
    }
    if (n > 1) factor_into(n, out);
}

} // namespace

std::vector<Int> prime_support(const Rat& x) {
    if (x == 0) throw std::domain_error("prime support of 0");
    std::vector<Int> out;
    prime_factors(Int(x.get_num()), out);
    prime_factors(Int(x.get_den()), out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ProjPoint::ProjPoint(Int a, Int b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_ == 0 && b_ == 0)
        throw std::domain_error("projective point (0, 0)");
    if (b_ == 0) {
        a_ = 1;
        return;
    }
    if (b_ < 0) {
        a_ = -a_;
        b_ = -b_;
    }
    Int g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    if (g > 1) {
        a_ /= g;
        b_ /= g;
    }
}

ProjPoint ProjPoint::from_rational(const Rat& x) {
    return ProjPoint(Int(x.get_num()), Int(x.get_den()));
}

Rat ProjPoint::to_rational() const {
    if (is_infinity())
        throw std::domain_error("point at infinity has no rational value");
    return Rat(a_, b_);
}

std::string ProjPoint::to_string() const {
    if (is_infinity()) return "inf";
    if (b_ == 1) return a_.get_str();
    return a_.get_str() + "/" + b_.get_str();
}

double weil_height(const ProjPoint& x) {
    Int m = std::max(abs(x.a()), abs(x.b()));
    if (m <= 1) return 0.0;
    return log_abs(m);
}

double weil_height(const Rat& x) {
    return weil_height(ProjPoint::from_rational(x));
}

std::size_t hash_value(const Int& z) {
    const std::size_t n = mpz_size(z.get_mpz_t());
    const mp_limb_t* limbs = mpz_limbs_read(z.get_mpz_t());
    std::size_t h = 0xcbf29ce484222325ULL ^ static_cast<std::size_t>(sgn(z));
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<std::size_t>(limbs[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_fraction_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

} // namespace heightlab
