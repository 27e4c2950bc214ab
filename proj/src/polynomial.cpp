#include "heightlab/polynomial.hpp"

#include <stdexcept>
#include <utility>

namespace heightlab {

namespace {
const Rat kZero(0);
}

RatPoly::RatPoly(Rat c) {
    if (c != 0) c_.push_back(std::move(c));
}

RatPoly::RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

RatPoly RatPoly::t() { return RatPoly(std::vector<Rat>{Rat(0), Rat(1)}); }

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat& RatPoly::coeff(long i) const {
    if (i < 0 || i >= static_cast<long>(c_.size())) return kZero;
    return c_[static_cast<std::size_t>(i)];
}

const Rat& RatPoly::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of 0");
    return c_.back();
}

Rat RatPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RatPoly RatPoly::operator-() const {
    RatPoly r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.c_.size()) c[i] += a.c_[i];
        if (i < b.c_.size()) c[i] += b.c_[i];
    }
    return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(std::move(c));
}

RatPoly operator*(const Rat& s, const RatPoly& a) {
    if (s == 0) return RatPoly();
    RatPoly r(a);
    for (auto& c : r.c_) c *= s;
    return r;
}

RatPoly RatPoly::pow(unsigned long e) const {
    RatPoly acc(Rat(1));
    RatPoly base(*this);
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

RatPoly RatPoly::mul_t() const {
    if (is_zero()) return RatPoly();
    std::vector<Rat> c;
    c.reserve(c_.size() + 1);
    c.push_back(Rat(0));
    c.insert(c.end(), c_.begin(), c_.end());
    return RatPoly(std::move(c));
}

RatPoly RatPoly::div_t_exact() const {
    if (is_zero()) return RatPoly();
    if (c_[0] != 0)
        throw std::logic_error("inexact division by t (nonzero constant term)");
    return RatPoly(std::vector<Rat>(c_.begin() + 1, c_.end()));
}

RatPoly RatPoly::monic() const {
    if (is_zero()) return RatPoly();
    return Rat(1) / leading() * *this;
}

RatPoly RatPoly::primitive_integer() const {
    if (is_zero()) return RatPoly();
    Int den_lcm(1), num_gcd(0);
    for (const auto& c : c_) {
        if (c == 0) continue;
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                c.get_num().get_mpz_t());
    }
    Rat scale(den_lcm, num_gcd);
    if (leading() < 0) scale = -scale;
    return scale * *this;
}

std::string RatPoly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (long i = degree(); i >= 0; --i) {
        const Rat& c = coeff(i);
        if (c == 0) continue;
        Rat a = c < 0 ? Rat(-c) : c;
        if (s.empty())
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        const bool unit = (a == 1 && i > 0);
        if (!unit) s += to_fraction_string(a);
        if (i > 0) {
            if (!unit) s += "*";
            s += "t";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& a, const RatPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    RatPoly r = a;
    std::vector<Rat> q(
        a.degree() >= b.degree()
            ? static_cast<std::size_t>(a.degree() - b.degree() + 1)
            : 0,
        Rat(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        long k = r.degree() - b.degree();
        Rat f = r.leading() / b.leading();
        q[static_cast<std::size_t>(k)] = f;
        std::vector<Rat> shifted(static_cast<std::size_t>(k), Rat(0));
        shifted.push_back(f);
        r = r - RatPoly(std::move(shifted)) * b;
    }
    return {RatPoly(std::move(q)), r};
}

RatPoly poly_gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly x = a, y = b;
    while (!y.is_zero()) {
        RatPoly r = poly_divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.is_zero() ? x : x.monic();
}

namespace {

// degree of gcd(a mod p, b mod p) over F_p; inputs integer-cleared
long modular_gcd_degree(const RatPoly& a, const RatPoly& b, const Int& p) {
    auto reduce = [&](const RatPoly& f) {
        std::vector<Int> c(static_cast<std::size_t>(f.degree()) + 1);
        for (long i = 0; i <= f.degree(); ++i) {
            Int v = f.coeff(i).get_num() % p;
            if (v < 0) v += p;
            c[static_cast<std::size_t>(i)] = v;
        }
        while (!c.empty() && c.back() == 0) c.pop_back();
        return c;
    };
    std::vector<Int> x = reduce(a), y = reduce(b);
    while (!y.empty()) {
        // x mod y over F_p
        Int lead_inv;
        mpz_invert(lead_inv.get_mpz_t(), y.back().get_mpz_t(), p.get_mpz_t());
        while (x.size() >= y.size()) {
            Int f = x.back() * lead_inv % p;
            std::size_t off = x.size() - y.size();
            for (std::size_t i = 0; i < y.size(); ++i) {
                x[off + i] = (x[off + i] - f * y[i]) % p;
                if (x[off + i] < 0) x[off + i] += p;
            }
            while (!x.empty() && x.back() == 0) x.pop_back();
            if (x.empty()) break;
        }
        std::swap(x, y);
    }
    return static_cast<long>(x.size()) - 1;
}

} // namespace

bool poly_coprime(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return false;
    if (a.is_constant() || b.is_constant()) return true;
    RatPoly ia = a.primitive_integer();
    RatPoly ib = b.primitive_integer();
    Int p(1000003);
    for (int tries = 0; tries < 10; ++tries) {
        while (!is_prime(p) ||
               ia.leading().get_num() % p == 0 ||
               ib.leading().get_num() % p == 0)
            p += 1;
        // p does not divide either leading coefficient, so the modular gcd
        // degree bounds the rational one from above
        if (modular_gcd_degree(ia, ib, p) == 0) return true;
        p += 1;
    }
    return poly_gcd(ia, ib).degree() == 0;
}

RationalMap1D RationalMap1D::normalized(RatPoly A, RatPoly B,
                                        std::string* warning) {
    if (A.is_zero() && B.is_zero())
        throw std::domain_error("rational map 0/0");
    if (!A.is_zero() && !B.is_zero()) {
        RatPoly g = poly_gcd(A, B);
        if (g.degree() >= 1) {
            if (warning)
                *warning = "numerator and denominator share the factor " +
                           g.to_string() + "; dividing it out";
            A = poly_divmod(A, g).first;
            B = poly_divmod(B, g).first;
        }
    }
    // one rational pair-scale: integer coefficients, content 1 across the
    // pair, positive leading coefficient of B (of A when B = 0)
    Int den_lcm(1), num_gcd(0);
    auto absorb = [&](const RatPoly& p) {
        for (long i = 0; i <= p.degree(); ++i) {
            const Rat& c = p.coeff(i);
            if (c == 0) continue;
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                    c.get_den().get_mpz_t());
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                    c.get_num().get_mpz_t());
        }
    };
    absorb(A);
    absorb(B);
    Rat scale(den_lcm, num_gcd);
    const RatPoly& sign_ref = B.is_zero() ? A : B;
    if (sign_ref.leading() < 0) scale = -scale;
    RationalMap1D c;
    c.A = scale * A;
    c.B = scale * B;
    c.c0_zero = c.A.constant_term() == 0; // true as well for A = 0
    return c;
}

RationalMap1D RationalMap1D::constant(const Rat& alpha) {
    return normalized(RatPoly(alpha), RatPoly(Rat(1)));
}

long RationalMap1D::degree() const { return std::max(A.degree(), B.degree()); }

std::string RationalMap1D::to_string() const {
    return "(" + A.to_string() + ")/(" + B.to_string() + ")";
}

} // namespace heightlab
