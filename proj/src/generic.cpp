#include "heightlab/generic.hpp"

#include <stdexcept>
#include <vector>

#include "heightlab/dynamics.hpp"

namespace heightlab {

Rat generic_height(const RationalMap1D& c, int d) {
    if (c.A.is_zero() || c.B.is_zero()) return Rat(0);
    PolyPair p1 = iterate_poly_pair(c, d, 1);
    PolyPair p2 = iterate_poly_pair(c, d, 2);
    Rat h1(std::max(p1.A.degree(), p1.B.degree()), d);
    h1.canonicalize();
    Rat h2(std::max(p2.A.degree(), p2.B.degree()), static_cast<long>(d) * d);
    h2.canonicalize();
    if (h1 != h2)
        throw std::logic_error("generic height: d^2-degree cross-check failed");
    return h1;
}

bool verify_coprime_iterates(const RationalMap1D& c, int d, long nmax) {
    if (c.A.is_zero() || c.B.is_zero()) return true;
    for (long n = 0; n <= nmax; ++n) {
        PolyPair pn = iterate_poly_pair(c, d, n);
        if (pn.A.is_constant() && pn.B.is_constant()) continue;
        if (!poly_coprime(pn.A, pn.B)) return false;
    }
    return true;
}

Rat poly_resultant(const RatPoly& P, const RatPoly& Q) {
    if (P.is_zero() || Q.is_zero())
        throw std::domain_error("resultant of the zero polynomial");
    const long m = P.degree(), n = Q.degree();
    if (m == 0 && n == 0) return Rat(1);
    if (n == 0) return pow_rat(Q.coeff(0), static_cast<unsigned long>(m));
    if (m == 0) return pow_rat(P.coeff(0), static_cast<unsigned long>(n));

    // Sylvester matrix, (m+n) x (m+n); determinant by exact Gaussian
    // elimination over Q (degrees here stay small).
    const long N = m + n;
    std::vector<std::vector<Rat>> a(static_cast<std::size_t>(N),
                                    std::vector<Rat>(static_cast<std::size_t>(N), Rat(0)));
    for (long r = 0; r < n; ++r)
        for (long j = 0; j <= m; ++j)
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] =
                P.coeff(m - j);
    for (long r = 0; r < m; ++r)
        for (long j = 0; j <= n; ++j)
            a[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + j)] =
                Q.coeff(n - j);

    Rat det(1);
    for (long col = 0; col < N; ++col) {
        long piv = -1;
        for (long r = col; r < N; ++r)
            if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            std::swap(a[static_cast<std::size_t>(piv)],
                      a[static_cast<std::size_t>(col)]);
            det = -det;
        }
        const Rat& p = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        det *= p;
        for (long r = col + 1; r < N; ++r) {
            Rat f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / p;
            if (f == 0) continue;
            for (long j = col; j < N; ++j)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        }
    }
    return det;
}

} // namespace heightlab
