#ifndef BERGMAN_FABER_HPP
#define BERGMAN_FABER_HPP

#include <stdexcept>
#include <vector>

#include "bergman/poly.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight.hpp"

namespace bergman {

/// Laurent coefficients of v* at infinity: v*(z) = c_0 + c_1/z + c_2/z^2 + ...
/// c_0 = 1/v(0) is real and positive.
struct LaurentCoeffs {
    std::vector<cx> c;
    int K = -1;
};

/// c_j = conj(d_j), where sum d_j w^j is the Maclaurin series of 1/v.
/// Exact recurrences per outer-part variant; no contour sampling involved.
inline LaurentCoeffs laurent_coeffs(const WeightSpec& spec, int K) {
    if (K < 0) throw std::invalid_argument("laurent_coeffs: K must be nonnegative");
    LaurentCoeffs lc;
    lc.K = K;
    std::vector<cx> d = outer_reciprocal_series(spec, std::size_t(K) + 1);
    lc.c.resize(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) lc.c[j] = std::conj(d[j]);
    return lc;
}

/// Faber polynomial of z^n v*(z): the polynomial part of its Laurent
/// expansion, F_n(z) = c_0 z^n + c_1 z^{n-1} + ... + c_n.
inline Poly faber_poly(const WeightSpec& spec, int n, const LaurentCoeffs& coeffs) {
    (void)spec;
    if (coeffs.K < n) throw std::invalid_argument("faber_poly: insufficient Laurent coefficients");
    std::vector<cx> f(std::size_t(n) + 1, cx(0.0));
    for (int j = 0; j <= n; ++j) f[std::size_t(n - j)] = coeffs.c[std::size_t(j)];
    return Poly(std::move(f));
}

/// int_D |F_n|^2 w d sigma, evaluated as a quadratic form in the rule's
/// moment matrix (identical to the discrete node sum).
inline double faber_weighted_norm(const WeightSpec& spec, int n, const DiskRule& rule,
                                  const LaurentCoeffs& coeffs) {
    const Poly F = faber_poly(spec, n, coeffs);
    const MomentMatrix& M = rule.moments(n);
    return M.inner(F.coeffs(), F.coeffs()).real();
}

} // namespace bergman

#endif
