#ifndef BERGMAN_KERNEL_HPP
#define BERGMAN_KERNEL_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bergman/orthosystem.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight.hpp"

namespace bergman {

struct KhOrigin {
    double value = 1.0;
    bool converged = true;
    int terms = 1;
};

/// K_h(0,0) = sum_k |p_k^h(0)|^2 over the orthonormal polynomials of the
/// pure Blaschke-modulus weight h (outer part dropped). The series is
/// truncated once a geometric extrapolation of the terms bounds the tail
/// below tol; non-decay within the degree cap is reported, not thrown.
inline KhOrigin kh_origin(const WeightSpec& spec, double tol, int degree_cap = 128,
                          int radial_order = 96, int angular_order = 0) {
    KhOrigin out;
    if (spec.s() == 0) return out; // K(0,0) = 1 for the unweighted disk

    const WeightSpec hspec = pure_blaschke_part(spec);
    if (angular_order == 0) angular_order = std::max(256, 2 * (degree_cap + 1) + 64);
    const DiskRule rule = build_disk_rule(hspec, radial_order, angular_order);
    const OrthoBasis basis = bergman_orthonormalize(hspec, degree_cap, rule);

    double sum = 0.0;
    std::vector<double> terms(std::size_t(degree_cap) + 1);
    out.converged = false;
    for (int k = 0; k <= degree_cap; ++k) {
        const double t = std::norm(basis.eval(k, cx(0.0)));
        terms[std::size_t(k)] = t;
        sum += t;
        out.terms = k + 1;
        if (k < 8) continue;
        // terms at the rounding floor are treated as converged-to-zero
        const double floor = std::max(1e-2 * tol, 1e-28 * sum);
        double recent = 0.0, ratio = 0.0;
        bool have_ratio = false;
        for (int j = k - 7; j <= k; ++j) {
            recent = std::max(recent, terms[std::size_t(j)]);
            if (terms[std::size_t(j - 1)] > floor && terms[std::size_t(j)] > floor) {
                ratio = std::max(ratio, terms[std::size_t(j)] / terms[std::size_t(j - 1)]);
                have_ratio = true;
            }
        }
        if (recent <= floor) { out.converged = true; break; }
        if (have_ratio && ratio < 1.0) {
            const double tail = recent * ratio / (1.0 - ratio) + recent;
            if (tail < tol) { out.converged = true; break; }
        }
    }
    out.value = sum;
    return out;
}

/// The rational kernel L(z,zeta) = zeta^{-2} K_h(z, 1/conj(zeta)) in the
/// closed form available for s <= 2, where the polynomial J(z,zeta) is a
/// constant: 0 for s <= 1, and K_h(0,0) - 1 - sum (m_k/2)(1-|a_k|^2) for
/// s = 2. For s > 2 no closed form for J is available and construction is
/// rejected.
class KernelL {
public:
    explicit KernelL(const WeightSpec& spec, double kh_tol = 1e-11) : spec_(spec) {
        validate(spec);
        const int s = spec.s();
        if (s > 2)
            throw std::invalid_argument("KernelL: s > 2 is unsupported (no closed form for J)");
        if (s == 2) {
            const KhOrigin kh = kh_origin(spec, kh_tol);
            if (!kh.converged) throw std::runtime_error("KernelL: K_h(0,0) series did not converge");
            double j = kh.value - 1.0;
            for (const auto& sg : spec.singularities) j -= 0.5 * sg.m * (1.0 - std::norm(sg.a));
            J_ = cx(j);
        }
    }

    const WeightSpec& spec() const { return spec_; }
    cx J() const { return J_; }

    cx operator()(cx z, cx zeta) const {
        const cx dz = zeta - z;
        if (std::abs(dz) < 1e-300) throw std::domain_error("KernelL: zeta coincides with z");
        cx L = 1.0 / (dz * dz);
        for (const auto& sg : spec_.singularities) {
            const cx da = zeta - sg.a;
            if (std::abs(da) < 1e-300) throw std::domain_error("KernelL: zeta coincides with a singularity");
            L += 0.5 * sg.m * (1.0 - std::norm(sg.a)) / (dz * da * (1.0 - z * std::conj(sg.a)));
        }
        if (J_ != cx(0.0)) {
            const auto [q, qs] = eval_q_qstar(spec_, zeta);
            const auto [qz, qsz] = eval_q_qstar(spec_, z);
            (void)qs;
            (void)qz;
            if (std::abs(qsz) < 1e-300) throw std::domain_error("KernelL: q*(z) vanishes");
            L += J_ / (qsz * q);
        }
        return L;
    }

    // partial derivative in z, needed by Newton polishing on the
    // integral representation
    cx dz(cx z, cx zeta) const {
        const cx d = zeta - z;
        cx D = 2.0 / (d * d * d);
        for (const auto& sg : spec_.singularities) {
            const cx da = zeta - sg.a;
            const cx qa = 1.0 - z * std::conj(sg.a);
            D += 0.5 * sg.m * (1.0 - std::norm(sg.a)) / da *
                 (1.0 / (d * d * qa) + std::conj(sg.a) / (d * qa * qa));
        }
        if (J_ != cx(0.0)) {
            const auto [q, qs] = eval_q_qstar(spec_, zeta);
            const auto [qz, qsz] = eval_q_qstar(spec_, z);
            (void)qs;
            (void)qz;
            cx dlog(0.0); // q*'(z)/q*(z) = sum -conj(a_k)/(1 - conj(a_k) z)
            for (const auto& sg : spec_.singularities) dlog += -std::conj(sg.a) / (1.0 - std::conj(sg.a) * z);
            D += -J_ * dlog / (qsz * q);
        }
        return D;
    }

private:
    WeightSpec spec_;
    cx J_ = cx(0.0);
};

struct KernelValue {
    cx value = cx(0.0);
    double tail = 0.0;
    bool converged = true;
};

/// Truncated kernel sum K_w(z,zeta) ~= sum_{k<=N} p_k(z) conj(p_k(zeta))
/// with a geometric tail estimate from the last terms.
inline KernelValue kernel_Kw(const WeightSpec& spec, cx z, cx zeta, const OrthoBasis& basis) {
    (void)spec;
    KernelValue out;
    const int N = basis.degree();
    std::vector<double> mags(std::size_t(N) + 1);
    for (int k = 0; k <= N; ++k) {
        const cx term = basis.eval(k, z) * std::conj(basis.eval(k, zeta));
        out.value += term;
        mags[std::size_t(k)] = std::abs(term);
    }
    double recent = 0.0, ratio = 0.0;
    bool have_ratio = false;
    for (int k = std::max(1, N - 7); k <= N; ++k) {
        recent = std::max(recent, mags[std::size_t(k)]);
        if (mags[std::size_t(k - 1)] > 0.0 && mags[std::size_t(k)] > 0.0) {
            ratio = std::max(ratio, mags[std::size_t(k)] / mags[std::size_t(k - 1)]);
            have_ratio = true;
        }
    }
    if (recent == 0.0) { out.tail = 0.0; }
    else if (have_ratio && ratio < 1.0) { out.tail = recent * ratio / (1.0 - ratio); }
    else { out.converged = false; out.tail = recent; }
    return out;
}

} // namespace bergman

#endif
