#ifndef BERGMAN_ORTHOSYSTEM_HPP
#define BERGMAN_ORTHOSYSTEM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "bergman/poly.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight.hpp"

namespace bergman {

/// Orthonormal Bergman polynomials p_0..p_N for a WeightSpec, with their
/// positive leading coefficients gamma_n and the fingerprint of the rule
/// that defined the discrete inner product.
struct OrthoBasis {
    std::vector<Poly> polys;
    std::vector<double> gammas;
    std::uint64_t rule_fingerprint = 0;

    int degree() const { return static_cast<int>(polys.size()) - 1; }

    cx eval(int n, cx z) const {
        if (n < 0 || n > degree()) throw std::out_of_range("OrthoBasis::eval: degree out of range");
        return polys[std::size_t(n)](z);
    }
};

inline cx eval_poly(const OrthoBasis& basis, int n, cx z) { return basis.eval(n, z); }

/// Arnoldi-style orthogonalization: p_{k+1} is z*p_k orthogonalized against
/// p_0..p_k under the discrete inner product of `rule`, with a second
/// reorthogonalization pass, then normalized with a positive leading
/// coefficient. The inner products are evaluated through the rule's moment
/// matrix, which represents the same discrete sum in coefficient space.
inline OrthoBasis bergman_orthonormalize(const WeightSpec& spec, int N, const DiskRule& rule) {
    if (N < 0) throw std::invalid_argument("bergman_orthonormalize: N must be nonnegative");
    const MomentMatrix& M = rule.moments(N + 1);

    OrthoBasis basis;
    basis.rule_fingerprint = rule.node_fingerprint();
    basis.polys.reserve(std::size_t(N) + 1);
    basis.gammas.reserve(std::size_t(N) + 1);

    const double m00 = M.at(0, 0).real();
    if (!(m00 > 0.0)) throw std::runtime_error("bergman_orthonormalize: rule gives nonpositive mass");
    basis.polys.emplace_back(std::vector<cx>{cx(1.0 / std::sqrt(m00))});
    basis.gammas.push_back(1.0 / std::sqrt(m00));

    std::vector<cx> u, y;
    for (int k = 0; k < N; ++k) {
        u.assign(std::size_t(k) + 2, cx(0.0));
        const auto& pk = basis.polys[std::size_t(k)].coeffs();
        for (std::size_t i = 0; i < pk.size(); ++i) u[i + 1] = pk[i];

        double base = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
            M.apply_left(u, y);
            if (pass == 0) {
                cx b2(0.0);
                for (std::size_t t = 0; t < u.size(); ++t) b2 += std::conj(u[t]) * y[t];
                base = b2.real();
            }
            for (int i = 0; i <= k; ++i) {
                const auto& pi = basis.polys[std::size_t(i)].coeffs();
                cx c(0.0);
                for (std::size_t t = 0; t < pi.size(); ++t) c += std::conj(pi[t]) * y[t];
                for (std::size_t t = 0; t < pi.size(); ++t) u[t] -= c * pi[t];
            }
        }
        M.apply_left(u, y);
        cx nrm2(0.0);
        for (std::size_t t = 0; t < u.size(); ++t) nrm2 += std::conj(u[t]) * y[t];
        const double n2 = nrm2.real();
        if (!(n2 > 1e-26 * base) || !std::isfinite(n2))
            throw std::runtime_error("bergman_orthonormalize: discrete Gram numerically singular "
                                     "(quadrature too coarse for requested degree)");
        const double nrm = std::sqrt(n2);
        for (auto& c : u) c /= nrm;
        const cx lead = u.back();
        if (!(std::abs(lead) > 0.0))
            throw std::runtime_error("bergman_orthonormalize: vanishing leading coefficient");
        const cx phase = lead / std::abs(lead);
        for (auto& c : u) c *= std::conj(phase);
        basis.polys.emplace_back(u);
        basis.gammas.push_back(u.back().real());
    }
    return basis;
}

struct ExtremalityReport {
    int n = 0;
    int trials = 0;
    double min_norm_gap = 0.0;       // min over trials of ||P||^2 - ||monic||^2 (should be >= 0)
    double max_identity_residual = 0.0; // | ||P||^2 - ||P-monic||^2 - ||monic||^2 |
    double monic_norm2 = 0.0;        // ||gamma_n^{-1} p_n||^2, equals gamma_n^{-2}
};

/// Random monic perturbations P = gamma_n^{-1} p_n + lower-degree noise:
/// checks the minimal-norm property and the Pythagorean identity under the
/// rule's inner product. Deterministically seeded.
inline ExtremalityReport monic_norm_extremality(const WeightSpec& spec, const OrthoBasis& basis, int n,
                                                const DiskRule& rule, int trials) {
    if (n < 0 || n > basis.degree()) throw std::out_of_range("monic_norm_extremality: n out of range");
    const MomentMatrix& M = rule.moments(std::max(n + 1, 1));

    std::vector<cx> monic(basis.polys[std::size_t(n)].coeffs());
    const double g = basis.gammas[std::size_t(n)];
    for (auto& c : monic) c /= g;

    ExtremalityReport rep;
    rep.n = n;
    rep.trials = trials;
    rep.monic_norm2 = M.inner(monic, monic).real();
    rep.min_norm_gap = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(fingerprint(spec) ^ (0x9e3779b97f4a7c15ull * std::uint64_t(n + 1)));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<cx> P, D;
    for (int t = 0; t < trials; ++t) {
        P = monic;
        P.resize(std::size_t(n) + 1, cx(0.0));
        D.assign(std::size_t(n) + 1, cx(0.0));
        for (int j = 0; j < n; ++j) {
            const cx d = 0.5 * cx(uni(rng), uni(rng));
            P[std::size_t(j)] += d;
            D[std::size_t(j)] = d;
        }
        const double np = M.inner(P, P).real();
        const double nd = M.inner(D, D).real();
        rep.min_norm_gap = std::min(rep.min_norm_gap, np - rep.monic_norm2);
        rep.max_identity_residual =
            std::max(rep.max_identity_residual, std::abs(np - nd - rep.monic_norm2));
    }
    if (trials == 0) rep.min_norm_gap = 0.0;
    return rep;
}

/// Monic Szego polynomials psi_0..psi_N for the circle weight u = |v|^2,
/// with their reversed partners psi*_n(z) = z^n conj(psi_n(1/conj(z))).
struct SzegoBasis {
    std::vector<Poly> psi;
    std::vector<Poly> psi_star;
    std::vector<double> norm2; // <psi_n, psi_n>_u
};

inline SzegoBasis szego_monic(const OuterPart& outer, int N, int circle_count) {
    if (N < 0) throw std::invalid_argument("szego_monic: N must be nonnegative");
    if (circle_count < 2 * N + 4) circle_count = 2 * N + 4;
    const WeightSpec uspec{outer, {}};
    validate(uspec);

    // Toeplitz circle moments tau_d = int e^{i d theta} u dtheta, d = 0..N
    std::vector<cx> tau(std::size_t(N) + 1, cx(0.0));
    const double dth = 2.0 * kPi / circle_count;
    for (int j = 0; j < circle_count; ++j) {
        const double th = dth * j;
        const double uv = eval_weight(uspec, std::polar(1.0, th)) * dth;
        for (int d = 0; d <= N; ++d) tau[std::size_t(d)] += uv * std::polar(1.0, d * th);
    }
    auto mom = [&](int p, int q) { // <z^p, z^q>_u
        const int d = p - q;
        return d >= 0 ? tau[std::size_t(d)] : std::conj(tau[std::size_t(-d)]);
    };
    auto inner = [&](const std::vector<cx>& a, const std::vector<cx>& b) {
        cx acc(0.0);
        for (std::size_t p = 0; p < a.size(); ++p) {
            if (a[p] == cx(0.0)) continue;
            for (std::size_t q = 0; q < b.size(); ++q) acc += a[p] * std::conj(b[q]) * mom(int(p), int(q));
        }
        return acc;
    };

    SzegoBasis sb;
    for (int n = 0; n <= N; ++n) {
        std::vector<cx> c(std::size_t(n) + 1, cx(0.0));
        c.back() = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < n; ++i) {
                const auto& qi = sb.psi[std::size_t(i)].coeffs();
                const cx proj = inner(c, qi) / sb.norm2[std::size_t(i)];
                for (std::size_t t = 0; t < qi.size(); ++t) c[t] -= proj * qi[t];
            }
        const double n2 = inner(c, c).real();
        if (!(n2 > 0.0) || !std::isfinite(n2))
            throw std::runtime_error("szego_monic: discrete circle moment matrix numerically singular");
        sb.psi.emplace_back(c);
        sb.psi_star.push_back(sb.psi.back().reversed());
        sb.norm2.push_back(n2);
    }
    return sb;
}

} // namespace bergman

#endif
