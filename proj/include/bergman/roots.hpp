#ifndef BERGMAN_ROOTS_HPP
#define BERGMAN_ROOTS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bergman/poly.hpp"

namespace bergman {

struct NewtonResult {
    cx z = cx(0.0);
    bool converged = false;
    std::vector<double> increments; // |dz| per accepted step
};

/// Newton iteration on a callable returning (f, f'). Stops when the step
/// drops below tol or stalls.
template <class FD>
NewtonResult newton_polish(FD&& fdf, cx z0, double tol = 1e-13, int maxit = 60) {
    NewtonResult res;
    res.z = z0;
    for (int it = 0; it < maxit; ++it) {
        const auto [f, df] = fdf(res.z);
        if (!(std::abs(df) > 0.0)) break;
        const cx dz = f / df;
        res.z -= dz;
        res.increments.push_back(std::abs(dz));
        if (std::abs(dz) < tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

inline NewtonResult newton_polish_poly(const Poly& p, cx z0, double tol = 1e-13, int maxit = 60) {
    const Poly d = p.derivative();
    return newton_polish([&](cx z) { return std::pair<cx, cx>(p(z), d(z)); }, z0, tol, maxit);
}

namespace detail {

// Dense complex LU with partial pivoting; solves in place.
class LuSolver {
public:
    explicit LuSolver(std::vector<cx> a, int n) : a_(std::move(a)), piv_(std::size_t(n)), n_(n) {
        for (int col = 0; col < n_; ++col) {
            int p = col;
            double best = std::abs(at(col, col));
            for (int r = col + 1; r < n_; ++r)
                if (std::abs(at(r, col)) > best) {
                    best = std::abs(at(r, col));
                    p = r;
                }
            piv_[std::size_t(col)] = p;
            if (p != col)
                for (int c = 0; c < n_; ++c) std::swap(at(p, c), at(col, c));
            if (!(std::abs(at(col, col)) > 0.0)) {
                at(col, col) = cx(1e-300); // exact singularity: nudge, caller shifts anyway
            }
            const cx inv = 1.0 / at(col, col);
            for (int r = col + 1; r < n_; ++r) {
                const cx f = at(r, col) * inv;
                at(r, col) = f;
                if (f == cx(0.0)) continue;
                for (int c = col + 1; c < n_; ++c) at(r, c) -= f * at(col, c);
            }
        }
    }

    void solve(std::vector<cx>& b) const {
        for (int col = 0; col < n_; ++col) {
            std::swap(b[std::size_t(piv_[std::size_t(col)])], b[std::size_t(col)]);
            for (int r = col + 1; r < n_; ++r) b[std::size_t(r)] -= at(r, col) * b[std::size_t(col)];
        }
        for (int col = n_ - 1; col >= 0; --col) {
            b[std::size_t(col)] /= at(col, col);
            for (int r = 0; r < col; ++r) b[std::size_t(r)] -= at(r, col) * b[std::size_t(col)];
        }
    }

private:
    cx& at(int r, int c) { return a_[std::size_t(r) * n_ + c]; }
    const cx& at(int r, int c) const { return a_[std::size_t(r) * n_ + c]; }
    std::vector<cx> a_;
    std::vector<int> piv_;
    int n_;
};

} // namespace detail

/// Eigenvalue of the companion matrix of `p` nearest the seed, by shifted
/// inverse iteration. The companion is oriented so the right eigenvector for
/// a root lambda is the Vandermonde vector (1, lambda, ..., lambda^{n-1});
/// the root is read off as the consensus ratio of consecutive eigenvector
/// entries. Independent of Newton on p itself; used as the oracle root
/// finder.
inline cx companion_root_near(const Poly& p, cx seed, int outer_iters = 6) {
    Poly q = p;
    q.trim(0.0);
    const int n = q.degree();
    if (n < 1) throw std::invalid_argument("companion_root_near: polynomial is constant");
    const cx lead = q.leading();
    std::vector<cx> monic(q.coeffs());
    for (auto& c : monic) c /= lead;

    auto shifted = [&](cx sigma) {
        // ones on the superdiagonal, -coefficients in the last row
        std::vector<cx> a(std::size_t(n) * std::size_t(n), cx(0.0));
        for (int r = 0; r + 1 < n; ++r) a[std::size_t(r) * n + (r + 1)] = cx(1.0);
        for (int c = 0; c < n; ++c) a[std::size_t(n - 1) * n + c] -= monic[std::size_t(c)];
        for (int r = 0; r < n; ++r) a[std::size_t(r) * n + r] -= sigma;
        return detail::LuSolver(std::move(a), n);
    };
    auto ratio_estimate = [&](const std::vector<cx>& v) {
        cx num(0.0), den(0.0);
        for (int r = 0; r + 1 < n; ++r) {
            num += std::conj(v[std::size_t(r)]) * v[std::size_t(r) + 1];
            den += std::norm(v[std::size_t(r)]);
        }
        return den != 0.0 ? num / den : cx(0.0);
    };

    cx sigma = seed;
    std::vector<cx> v(std::size_t(n), cx(1.0));
    for (int outer = 0; outer < outer_iters; ++outer) {
        const detail::LuSolver lu = shifted(sigma);
        for (int inner = 0; inner < 3; ++inner) {
            lu.solve(v);
            double nrm = 0.0;
            for (const auto& c : v) nrm += std::norm(c);
            nrm = std::sqrt(nrm);
            if (!(nrm > 0.0) || !std::isfinite(nrm)) return sigma;
            for (auto& c : v) c /= nrm;
        }
        const cx next = ratio_estimate(v);
        if (std::abs(next - sigma) < 1e-14 * std::max(1.0, std::abs(next))) return next;
        sigma = next;
    }
    return sigma;
}

} // namespace bergman

#endif
