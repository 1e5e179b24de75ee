#ifndef BERGMAN_REPRESENTATION_HPP
#define BERGMAN_REPRESENTATION_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bergman/faber.hpp"
#include "bergman/kernel.hpp"
#include "bergman/orthosystem.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight.hpp"

namespace bergman {

inline cx powi(cx z, int n) {
    if (n < 0) return 1.0 / powi(z, -n);
    cx acc(1.0), base = z;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

/// Contour moments alpha_{n,k} = (1/2 pi i) oint v(zeta) zeta^{n-1}
/// conj(p_k(zeta)) d zeta over the unit circle, stored for all rows
/// n0 <= n <= K (the h/g recursion consumes a triangular block of rows, not
/// a single one). Row n holds alpha_{n,k} for n <= k <= K; entries below the
/// diagonal vanish by Cauchy's theorem and are not stored.
///
/// Primary computation path: exact coefficient convolution
///   alpha_{n,k} = sum_j conj(p_{k,j}) v_{j-n}
/// with v_i the Maclaurin coefficients of v. Cross-check path: trapezoid
/// quadrature of conj(alpha_{n,k}) = (1/2 pi i) oint zeta^{-n-1} p_k(zeta)
/// / v*(zeta) d zeta on |zeta| = eta. The two must agree within tolerance.
struct AlphaTable {
    int n0 = 0;
    int K = 0;
    std::vector<std::vector<cx>> rows; // rows[i][j] = alpha_{n0+i, n0+i+j}

    double crosscheck_max_err = 0.0; // max |convolution - circle| over stored entries
    double below_diag_max = 0.0;     // max |alpha_{n,k}|, k < n, circle path
    double diag_identity_max = 0.0;  // max |alpha_{nn} c0 / gamma_n - 1|, circle path

    cx alpha(int n, int k) const {
        if (n < n0 || n > K || k > K) throw std::out_of_range("AlphaTable::alpha: index out of range");
        if (k < n) return cx(0.0);
        return rows[std::size_t(n - n0)][std::size_t(k - n)];
    }
};

struct AlphaOptions {
    double eta = 0.0;        // circle radius for the cross-check; 0 = auto
    int count = 0;           // trapezoid count; 0 = auto
    double fail_tol = 1e-6;  // cross-check divergence above this throws
    bool crosscheck = true;
};

inline AlphaTable alpha_table(const WeightSpec& spec, const OrthoBasis& basis, int n0, int K,
                              const LaurentCoeffs& coeffs, const AlphaOptions& opts = {}) {
    if (n0 < 0 || K < n0) throw std::invalid_argument("alpha_table: require 0 <= n0 <= K");
    if (basis.degree() < K) throw std::invalid_argument("alpha_table: basis degree below K");
    if (coeffs.K < 0) throw std::invalid_argument("alpha_table: missing Laurent coefficients");

    AlphaTable tab;
    tab.n0 = n0;
    tab.K = K;

    const std::vector<cx> v = outer_series(spec, std::size_t(K) + 1);
    tab.rows.resize(std::size_t(K - n0) + 1);
    for (int n = n0; n <= K; ++n) {
        auto& row = tab.rows[std::size_t(n - n0)];
        row.assign(std::size_t(K - n) + 1, cx(0.0));
        for (int k = n; k <= K; ++k) {
            const auto& pk = basis.polys[std::size_t(k)].coeffs();
            cx acc(0.0);
            for (int j = n; j <= k; ++j) acc += std::conj(pk[std::size_t(j)]) * v[std::size_t(j - n)];
            row[std::size_t(k - n)] = acc;
        }
    }

    if (opts.crosscheck) {
        const CriticalRadii radii = critical_radii(spec);
        double eta = opts.eta > 0.0 ? opts.eta : std::max(0.85, 0.5 * (1.0 + radii.rho_v));
        if (!(eta > radii.rho_v && eta < 1.0))
            throw std::invalid_argument("alpha_table: eta outside (rho_v, 1)");
        int count = opts.count > 0 ? opts.count : std::max(512, 8 * (K + 16));
        if (count % 2) ++count;

        // p_k at all nodes; 1/v*(zeta) = conj(v(1/conj(zeta)))
        const std::size_t cnt = std::size_t(count);
        std::vector<cx> nodes(cnt), invvstar(cnt);
        for (int m = 0; m < count; ++m) {
            nodes[std::size_t(m)] = std::polar(eta, 2.0 * kPi * m / count);
            invvstar[std::size_t(m)] = std::conj(eval_outer(spec, 1.0 / std::conj(nodes[std::size_t(m)])));
        }
        std::vector<std::vector<cx>> P(std::size_t(K) + 1, std::vector<cx>(cnt));
        for (int k = 0; k <= K; ++k)
            for (int m = 0; m < count; ++m) P[std::size_t(k)][std::size_t(m)] = basis.polys[std::size_t(k)](nodes[std::size_t(m)]);

        std::vector<cx> u(cnt);
        for (int m = 0; m < count; ++m)
            u[std::size_t(m)] = powi(nodes[std::size_t(m)], -n0) * invvstar[std::size_t(m)] / double(count);
        for (int n = n0; n <= K; ++n) {
            for (int k = 0; k <= K; ++k) {
                cx acc(0.0);
                for (int m = 0; m < count; ++m) acc += u[std::size_t(m)] * P[std::size_t(k)][std::size_t(m)];
                const cx circ = std::conj(acc);
                if (k < n) {
                    tab.below_diag_max = std::max(tab.below_diag_max, std::abs(circ));
                } else {
                    tab.crosscheck_max_err =
                        std::max(tab.crosscheck_max_err, std::abs(circ - tab.alpha(n, k)));
                    if (k == n)
                        tab.diag_identity_max = std::max(
                            tab.diag_identity_max,
                            std::abs(circ * radii.c0 / basis.gammas[std::size_t(n)] - 1.0));
                }
            }
            for (int m = 0; m < count; ++m) u[std::size_t(m)] /= nodes[std::size_t(m)];
        }
        if (tab.crosscheck_max_err > opts.fail_tol)
            throw std::runtime_error("alpha_table: convolution and circle paths disagree beyond tolerance");
    }
    return tab;
}

/// Coefficients h(n,j) of H_n(z) = sum_{j>=1} h(n,j) z^j, from the
/// triangular recursion on the alpha table rows.
struct HSeries {
    int n = 0;
    std::vector<cx> h; // h[0] = 1, h[1..J]
};

inline HSeries hg_recursion(const AlphaTable& tab, int Jmax) {
    const int n = tab.n0;
    if (tab.K < n + Jmax + 1)
        throw std::invalid_argument("hg_recursion: alpha table must extend to K >= n + Jmax + 1");
    HSeries hs;
    hs.n = n;
    hs.h.assign(std::size_t(Jmax) + 1, cx(0.0));
    hs.h[0] = 1.0;

    std::vector<cx> g(std::size_t(tab.K) + 1, cx(0.0)); // g[k] for k in (n, K]
    for (int k = n + 1; k <= tab.K; ++k) g[std::size_t(k)] = -tab.alpha(n, k);

    for (int m = 0; m < Jmax; ++m) {
        const int nn = n + m + 1;
        const cx denom = tab.alpha(nn, nn);
        if (!(std::abs(denom) > 1e-300))
            throw std::runtime_error("hg_recursion: vanishing alpha diagonal (corrupt table)");
        const cx hm = g[std::size_t(nn)] / denom;
        hs.h[std::size_t(m) + 1] = hm;
        for (int k = nn + 1; k <= tab.K; ++k) g[std::size_t(k)] -= hm * tab.alpha(nn, k);
    }
    return hs;
}

struct HnValue {
    cx value = cx(0.0);
    double tail = 0.0;
    bool certified = true;
};

inline HnValue eval_Hn(const HSeries& hs, cx z) {
    if (!(std::abs(z) < 1.0)) throw std::domain_error("eval_Hn: |z| must be < 1");
    HnValue out;
    const std::size_t J = hs.h.size() - 1;
    cx acc(0.0);
    for (std::size_t j = J; j >= 1; --j) acc = (acc + hs.h[j]) * z;
    out.value = acc;

    const double az = std::abs(z);
    double recent = 0.0, ratio = 0.0;
    bool have_ratio = false;
    double prev = -1.0;
    for (std::size_t j = (J > 8 ? J - 7 : 1); j <= J; ++j) {
        const double t = std::abs(hs.h[j]) * std::pow(az, double(j));
        recent = std::max(recent, t);
        if (prev > 0.0 && t > 0.0) {
            ratio = std::max(ratio, t / prev);
            have_ratio = true;
        }
        prev = t;
    }
    if (recent == 0.0) out.tail = 0.0;
    else if (have_ratio && ratio < 1.0) out.tail = recent * ratio / (1.0 - ratio);
    else { out.tail = recent; out.certified = false; }
    return out;
}

namespace detail {

inline CircleRule representation_circle(const WeightSpec& spec, int n, double r, cx z, int count) {
    const CriticalRadii radii = critical_radii(spec);
    if (!(r > radii.rho_w && r < 1.0))
        throw std::invalid_argument("representation: radius outside (rho_w, 1)");
    if (!(std::abs(z) < r)) throw std::invalid_argument("representation: require |z| < r");
    // the trapezoid error decays like (rho/r)^count with rho the largest
    // integrand singularity inside the circle; keep count above the level
    // where that reaches ~e^-40, whether defaulted or caller-supplied
    int floor_count = std::max(64, 8 * (n + 16));
    const double rho = std::max(std::abs(z), radii.rho_w);
    if (rho > 0.0) {
        const double delta = std::log(r / rho);
        if (delta > 1e-8)
            floor_count = std::max(floor_count, std::min(200000, int(std::ceil(40.0 / delta))));
    }
    count = std::max(count, floor_count);
    if (count % 2) ++count;
    CircleRule rule(r, count);
    // nodes sit on |zeta| = r > rho_a >= |a_k| and |z| < r, so exact pole
    // collisions cannot occur; guard against near-grazing anyway.
    double mind = 1e300;
    for (int j = 0; j < count; ++j) {
        const cx zeta = rule.node(j);
        mind = std::min(mind, std::abs(zeta - z));
        for (const auto& sg : spec.singularities) mind = std::min(mind, std::abs(zeta - sg.a));
    }
    if (mind < 2.0 * kPi * r / count * 1e-3) rule = CircleRule(r, count, kPi / count);
    return rule;
}

} // namespace detail

/// Q_n(z) = (1/(2 pi i) v(z)) oint_{|zeta|=r} (v v*)(zeta) L(z,zeta)
/// zeta^{n+1} d zeta. Value independent of r within (rho_w, 1) for |z| < r.
inline cx Qn_eval(const WeightSpec& spec, int n, double r, cx z, const KernelL& L, int count = 0) {
    const CircleRule rule = detail::representation_circle(spec, n, r, z, count);
    const cx val = integrate_circle(rule, [&](cx zeta) {
        return eval_outer(spec, zeta) * eval_vstar(spec, zeta) * L(z, zeta) * powi(zeta, n + 1);
    });
    return val / eval_outer(spec, z);
}

/// Right-hand side of the main integral representation: with `hs` present
/// this approximates v(0) gamma_n p_n(z); with hs absent it is the H == 0
/// truncation, accurate to a relative O(1/n).
inline cx representation_eval(const WeightSpec& spec, int n, double r, cx z, const HSeries* hs,
                        const KernelL& L, int count = 0) {
    const CircleRule rule = detail::representation_circle(spec, n, r, z, count);
    const cx val = integrate_circle(rule, [&](cx zeta) {
        cx f = eval_outer(spec, zeta) * eval_vstar(spec, zeta) * L(z, zeta) * powi(zeta, n + 1);
        if (hs) f *= 1.0 + eval_Hn(*hs, zeta).value;
        return f;
    });
    return val / eval_outer(spec, z);
}

/// representation_eval together with its z-derivative (for Newton polishing of
/// zeros of p_n through the representation). The z-dependence enters through
/// L(z, zeta) and the 1/v(z) prefactor.
struct RepValue {
    cx value = cx(0.0);
    cx dz = cx(0.0);
};

inline RepValue representation_eval_dz(const WeightSpec& spec, int n, double r, cx z, const HSeries* hs,
                                 const KernelL& L, int count = 0) {
    const CircleRule rule = detail::representation_circle(spec, n, r, z, count);
    cx i0(0.0), i1(0.0);
    cx comp0(0.0), comp1(0.0);
    for (int j = 0; j < rule.count; ++j) {
        const cx zeta = rule.node(j);
        cx f = eval_outer(spec, zeta) * eval_vstar(spec, zeta) * powi(zeta, n + 1) * zeta;
        if (hs) f *= 1.0 + eval_Hn(*hs, zeta).value;
        const cx t0 = f * L(z, zeta) - comp0;
        const cx s0 = i0 + t0;
        comp0 = (s0 - i0) - t0;
        i0 = s0;
        const cx t1 = f * L.dz(z, zeta) - comp1;
        const cx s1 = i1 + t1;
        comp1 = (s1 - i1) - t1;
        i1 = s1;
    }
    i0 /= double(rule.count);
    i1 /= double(rule.count);
    const cx v = eval_outer(spec, z);
    const cx dlogv = outer_log_derivative(spec, z);
    RepValue out;
    out.value = i0 / v;
    out.dz = i1 / v - out.value * dlogv;
    return out;
}

} // namespace bergman

#endif
