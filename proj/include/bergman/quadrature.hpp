#ifndef BERGMAN_QUADRATURE_HPP
#define BERGMAN_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bergman/poly.hpp"
#include "bergman/weight.hpp"

namespace bergman {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on (0,1), Newton iteration on the recurrence.
// ---------------------------------------------------------------------------
struct Rule1D {
    std::vector<double> x, w;
};

inline Rule1D gauss_legendre01(int q) {
    if (q < 1) throw std::invalid_argument("gauss_legendre01: order must be positive");
    Rule1D r;
    r.x.resize(q);
    r.w.resize(q);
    if (q == 1) {
        r.x[0] = 0.5;
        r.w[0] = 1.0;
        return r;
    }
    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
        double p2 = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                const double p = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p;
            }
            p2 = q * (x * p1 - p0) / (x * x - 1.0); // P_q'(x)
            const double dx = p1 / p2;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double wq = 2.0 / ((1.0 - x * x) * p2 * p2);
        r.x[i] = 0.5 * (1.0 - x); // map [-1,1] -> (0,1), descending root order
        r.w[i] = 0.5 * wq;
        r.x[q - 1 - i] = 0.5 * (1.0 + x);
        r.w[q - 1 - i] = 0.5 * wq;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Circle rule: equispaced trapezoid for (1/2 pi i) \oint f(zeta) d zeta.
// ---------------------------------------------------------------------------
struct CircleRule {
    double radius;
    int count;
    double phase = 0.0; // angular offset, used to dodge node/pole collisions

    CircleRule(double r, int n, double ph = 0.0) : radius(r), count(n), phase(ph) {
        if (!(r > 0.0)) throw std::invalid_argument("CircleRule: radius must be positive");
        if (n < 16 || n % 2 != 0) throw std::invalid_argument("CircleRule: count must be even and >= 16");
    }
    cx node(int j) const { return std::polar(radius, phase + 2.0 * kPi * j / count); }
};

template <class F>
cx integrate_circle(const CircleRule& rule, F&& f) {
    cx acc(0.0), comp(0.0);
    for (int j = 0; j < rule.count; ++j) {
        const cx zeta = rule.node(j);
        const cx term = f(zeta) * zeta;
        const cx y = term - comp;
        const cx t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc / double(rule.count);
}

// ---------------------------------------------------------------------------
// Disk rule: composite rule for \int_D f d sigma (sigma = area/pi) adapted to
// the algebraic singularities |z - a_k|^{m_k} of a WeightSpec.
//
// Geometry: the disk minus round caps D(a_k, eps_k) is integrated in polar
// coordinates, with radial breakpoints at the cap tangency radii (annular
// decomposition). Within an annulus that crosses a cap, the angles covered by
// the cap are excluded exactly; the complementary arcs carry Gauss-Legendre
// angular nodes, full rings carry equispaced nodes. Annuli that cross a cap
// use a sin^2-mapped radial grid, which removes the square-root kinks the
// vanishing arcs create at the tangency radii. Each cap is covered by a polar
// patch centered at a_k whose radial rule integrates t^{m_k+1} * smooth to
// the requested order: plain Gauss-Legendre when m_k is an integer (the
// integrand is then polynomial-in-t times smooth), and a graded power map
// t = eps * x^kappa otherwise, which also keeps the rule spectrally accurate
// for integrands without the |z-a_k|^{m_k} factor. That last property is what
// a weight-function Gauss-Jacobi rule cannot provide, and it is required for
// the sum-of-weights = sigma(D) = 1 invariant.
// ---------------------------------------------------------------------------

struct BulkRadius {
    double r;                                   // radius of this set of angular nodes
    double wr;                                  // radial weight, includes the r Jacobian
    bool full;                                  // full circle (equispaced) or arcs
    int ntheta;                                 // full rings: node count
    std::vector<std::pair<double, double>> arc; // arcs: (theta, wtheta)
};

struct PatchRule {
    cx center;
    double m;    // singular exponent at the center
    double eps;  // patch radius
    int nphi;    // equispaced angular count
    std::vector<std::pair<double, double>> radial; // (t, ut), ut includes the t Jacobian
};

class MomentMatrix {
public:
    MomentMatrix() = default;
    explicit MomentMatrix(int n) : n_(n), m_(std::size_t(n + 1) * std::size_t(n + 1), cx(0.0)) {}

    int max_degree() const { return n_; }
    cx at(int j, int k) const { return m_[std::size_t(j) * (n_ + 1) + k]; }
    cx& at(int j, int k) { return m_[std::size_t(j) * (n_ + 1) + k]; }

    // y_k = sum_j u_j * at(j,k); then <u,v>_w = sum_k conj(v_k) y_k
    void apply_left(const std::vector<cx>& u, std::vector<cx>& y) const {
        y.assign(std::size_t(n_) + 1, cx(0.0));
        const std::size_t nu = std::min(u.size(), std::size_t(n_) + 1);
        for (std::size_t j = 0; j < nu; ++j) {
            const cx uj = u[j];
            if (uj == cx(0.0)) continue;
            const cx* row = &m_[j * (n_ + 1)];
            for (std::size_t k = 0; k <= std::size_t(n_); ++k) y[k] += uj * row[k];
        }
    }

    cx inner(const std::vector<cx>& u, const std::vector<cx>& v) const {
        std::vector<cx> y;
        apply_left(u, y);
        cx acc(0.0);
        const std::size_t nv = std::min(v.size(), y.size());
        for (std::size_t k = 0; k < nv; ++k) acc += std::conj(v[k]) * y[k];
        return acc;
    }

private:
    int n_ = -1;
    std::vector<cx> m_;
};

class DiskRule {
public:
    WeightSpec spec;
    int radial_order = 0, angular_order = 0;
    std::vector<BulkRadius> bulk;
    std::vector<PatchRule> patches;

    std::size_t node_count() const {
        std::size_t n = 0;
        for (const auto& b : bulk) n += b.full ? std::size_t(b.ntheta) : b.arc.size();
        for (const auto& p : patches) n += p.radial.size() * std::size_t(p.nphi);
        return n;
    }

    // Deterministic flat traversal; visitor receives (z, weight).
    template <class F>
    void for_each_node(F&& f) const {
        for (const auto& b : bulk) {
            if (b.full) {
                const double wt = 2.0 * b.wr / b.ntheta; // (1/pi) * wr * (2 pi / ntheta)
                for (int j = 0; j < b.ntheta; ++j) f(std::polar(b.r, 2.0 * kPi * j / b.ntheta), wt);
            } else {
                for (const auto& [th, wth] : b.arc) f(std::polar(b.r, th), b.wr * wth / kPi);
            }
        }
        for (const auto& p : patches) {
            const double dphi = 2.0 * kPi / p.nphi;
            for (const auto& [t, ut] : p.radial) {
                const double wt = ut * dphi / kPi;
                for (int j = 0; j < p.nphi; ++j) f(p.center + std::polar(t, dphi * j), wt);
            }
        }
    }

    double sum_weights() const {
        double acc = 0.0, comp = 0.0;
        for_each_node([&](cx, double w) {
            const double y = w - comp;
            const double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        });
        return acc;
    }

    std::uint64_t node_fingerprint() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](double x) {
            std::uint64_t u;
            std::memcpy(&u, &x, sizeof(u));
            for (int i = 0; i < 8; ++i) {
                h ^= (u >> (8 * i)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        for_each_node([&](cx z, double w) {
            mix(z.real());
            mix(z.imag());
            mix(w);
        });
        return h;
    }

    // Moment matrix M_{jk} = \int z^j conj(z)^k w d sigma for 0 <= j,k <= N.
    // Assembled per radius through angular transforms, and per patch through
    // a binomial change of center, so the cost is O(radii * N^2 + N^3)
    // instead of O(nodes * N^2). Cached and shared across copies of the
    // rule. Entries have stable addresses: a request for a larger degree
    // assembles a new matrix instead of replacing one a concurrent caller
    // may still reference.
    const MomentMatrix& moments(int N) const {
        std::lock_guard<std::mutex> lock(cache_->mu);
        for (const auto& m : cache_->entries)
            if (m->max_degree() >= N) return *m;
        cache_->entries.push_back(std::make_unique<MomentMatrix>(assemble_moments(N)));
        return *cache_->entries.back();
    }

private:
    struct Cache {
        std::mutex mu;
        std::vector<std::unique_ptr<MomentMatrix>> entries; // largest last
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

    // sum_nodes wtheta * w(r e^{i theta}) * e^{i d theta} for d = 0..N
    template <class Nodes>
    static void angular_transform(const WeightSpec& spec, double r, const Nodes& nodes, int N,
                                  std::vector<cx>& B) {
        B.assign(std::size_t(N) + 1, cx(0.0));
        for (const auto& [th, wth] : nodes) {
            const double wv = eval_weight(spec, std::polar(r, th)) * wth;
            const cx u = std::polar(1.0, th);
            cx e(1.0);
            for (int d = 0; d <= N; ++d) {
                if (d > 0) e = (d % 32 == 0) ? std::polar(1.0, d * th) : e * u;
                B[std::size_t(d)] += wv * e;
            }
        }
    }

    MomentMatrix assemble_moments(int N) const {
        MomentMatrix M(N);
        std::vector<cx> B;
        std::vector<double> powr(std::size_t(2 * N) + 1);
        std::vector<std::pair<double, double>> ringnodes;

        for (const auto& b : bulk) {
            if (b.full) {
                ringnodes.clear();
                const double wt = 2.0 * kPi / b.ntheta;
                for (int j = 0; j < b.ntheta; ++j) ringnodes.emplace_back(2.0 * kPi * j / b.ntheta, wt);
                angular_transform(spec, b.r, ringnodes, N, B);
            } else {
                angular_transform(spec, b.r, b.arc, N, B);
            }
            const double f = b.wr / kPi;
            powr[0] = 1.0;
            for (std::size_t t = 1; t < powr.size(); ++t) powr[t] = powr[t - 1] * b.r;
            for (int j = 0; j <= N; ++j)
                for (int k = 0; k <= N; ++k) {
                    const int d = j - k;
                    const cx bd = d >= 0 ? B[std::size_t(d)] : std::conj(B[std::size_t(-d)]);
                    M.at(j, k) += f * powr[std::size_t(j + k)] * bd;
                }
        }

        for (const auto& p : patches) {
            // S'_{pq} = sum_i (2 ut_i / nphi) (t_i/eps)^{p+q} sum_phi w e^{i(p-q)phi}
            MomentMatrix S(N);
            for (const auto& [t, ut] : p.radial) {
                const double dphi = 2.0 * kPi / p.nphi;
                B.assign(std::size_t(N) + 1, cx(0.0));
                for (int j = 0; j < p.nphi; ++j) {
                    const double ph = dphi * j;
                    const double wv = eval_weight(spec, p.center + std::polar(t, ph));
                    const cx u = std::polar(1.0, ph);
                    cx e(1.0);
                    for (int d = 0; d <= N; ++d) {
                        if (d > 0) e = (d % 32 == 0) ? std::polar(1.0, d * ph) : e * u;
                        B[std::size_t(d)] += wv * e;
                    }
                }
                const double fac = 2.0 * ut / p.nphi;
                const double s = t / p.eps;
                powr[0] = 1.0;
                for (std::size_t q = 1; q < powr.size(); ++q) powr[q] = powr[q - 1] * s;
                for (int pp = 0; pp <= N; ++pp)
                    for (int q = 0; q <= N; ++q) {
                        const int d = pp - q;
                        const cx bd = d >= 0 ? B[std::size_t(d)] : std::conj(B[std::size_t(-d)]);
                        S.at(pp, q) += fac * powr[std::size_t(pp + q)] * bd;
                    }
            }
            // T'_{jp} = C(j,p) a^{j-p} eps^p (scaled binomial change of center)
            MomentMatrix T(N);
            T.at(0, 0) = 1.0;
            for (int j = 1; j <= N; ++j) {
                T.at(j, 0) = T.at(j - 1, 0) * p.center;
                for (int q = 1; q <= j; ++q)
                    T.at(j, q) = p.center * T.at(j - 1, q) + p.eps * T.at(j - 1, q - 1);
            }
            // M += T S T^H
            MomentMatrix TS(N);
            for (int j = 0; j <= N; ++j)
                for (int pp = 0; pp <= j; ++pp) {
                    const cx tj = T.at(j, pp);
                    for (int q = 0; q <= N; ++q) TS.at(j, q) += tj * S.at(pp, q);
                }
            for (int j = 0; j <= N; ++j)
                for (int k = 0; k <= N; ++k) {
                    cx acc(0.0);
                    for (int q = 0; q <= k; ++q) acc += TS.at(j, q) * std::conj(T.at(k, q));
                    M.at(j, k) += acc;
                }
        }

        for (int j = 0; j <= N; ++j)
            for (int k = 0; k < j; ++k) {
                const cx v = 0.5 * (M.at(j, k) + std::conj(M.at(k, j)));
                M.at(j, k) = v;
                M.at(k, j) = std::conj(v);
            }
        for (int j = 0; j <= N; ++j) M.at(j, j) = cx(M.at(j, j).real(), 0.0);
        return M;
    }
};

namespace detail {

inline double patch_radius(const WeightSpec& spec, std::size_t k) {
    const cx a = spec.singularities[k].a;
    double d = 1.0 - std::abs(a);
    for (std::size_t j = 0; j < spec.singularities.size(); ++j)
        if (j != k) d = std::min(d, std::abs(a - spec.singularities[j].a));
    return 0.5 * d;
}

struct Interval {
    double lo, hi;
};

} // namespace detail

inline DiskRule build_disk_rule(const WeightSpec& spec, int radial_order, int angular_order) {
    if (radial_order < 4 || angular_order < 4)
        throw std::invalid_argument("build_disk_rule: orders must be >= 4");
    validate(spec);

    DiskRule rule;
    rule.spec = spec;
    rule.radial_order = radial_order;
    rule.angular_order = angular_order;
    const int ntheta_full = std::max(8, angular_order + (angular_order % 2));

    const std::size_t s = spec.singularities.size();
    std::vector<double> eps(s), rho(s), phi(s);
    for (std::size_t k = 0; k < s; ++k) {
        eps[k] = detail::patch_radius(spec, k);
        rho[k] = std::abs(spec.singularities[k].a);
        phi[k] = std::arg(spec.singularities[k].a);
    }

    // annular breakpoints
    std::vector<double> bp{0.0, 1.0};
    for (std::size_t k = 0; k < s; ++k) {
        if (rho[k] - eps[k] > 1e-12) bp.push_back(rho[k] - eps[k]);
        if (eps[k] - rho[k] > 1e-12) bp.push_back(eps[k] - rho[k]); // cap swallows small radii
        bp.push_back(rho[k] + eps[k]);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             bp.end());

    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double R1 = bp[i], R2 = bp[i + 1];
        if (R2 - R1 < 1e-10) continue;
        const double rm = 0.5 * (R1 + R2);

        bool swallowed = false;
        std::vector<std::size_t> crossing;
        for (std::size_t k = 0; k < s; ++k) {
            if (rm + rho[k] < eps[k]) swallowed = true;
            else if (std::abs(rm - rho[k]) < eps[k]) crossing.push_back(k);
        }
        if (swallowed) continue;

        const bool mapped = !crossing.empty();
        const int nr = std::max(mapped ? 24 : 16,
                                int(std::ceil(radial_order * (R2 - R1))) + (mapped ? 8 : 0));
        const Rule1D gl = gauss_legendre01(nr);

        for (int q = 0; q < nr; ++q) {
            double r, jac;
            if (mapped) {
                const double sn = std::sin(0.5 * kPi * gl.x[q]);
                r = R1 + (R2 - R1) * sn * sn;
                jac = (R2 - R1) * 0.5 * kPi * std::sin(kPi * gl.x[q]);
            } else {
                r = R1 + (R2 - R1) * gl.x[q];
                jac = R2 - R1;
            }
            BulkRadius br;
            br.r = r;
            br.wr = gl.w[q] * jac * r;

            // angular exclusions at this radius
            std::vector<detail::Interval> excl;
            for (std::size_t k : crossing) {
                const double c = (r * r + rho[k] * rho[k] - eps[k] * eps[k]) / (2.0 * r * rho[k]);
                if (c >= 1.0) continue;
                const double half = std::acos(std::max(-1.0, c));
                double lo = phi[k] - half, hi = phi[k] + half;
                while (lo < 0.0) { lo += 2.0 * kPi; hi += 2.0 * kPi; }
                if (hi <= 2.0 * kPi) excl.push_back({lo, hi});
                else { excl.push_back({lo, 2.0 * kPi}); excl.push_back({0.0, hi - 2.0 * kPi}); }
            }
            if (excl.empty()) {
                br.full = true;
                br.ntheta = ntheta_full;
            } else {
                br.full = false;
                br.ntheta = 0;
                std::sort(excl.begin(), excl.end(),
                          [](const detail::Interval& a, const detail::Interval& b) { return a.lo < b.lo; });
                for (std::size_t e = 0; e <= excl.size(); ++e) {
                    const double t1 = (e == 0) ? 0.0 : excl[e - 1].hi;
                    const double t2 = (e == excl.size()) ? 2.0 * kPi : excl[e].lo;
                    const double len = t2 - t1;
                    if (len < 1e-12) continue;
                    const int na = std::max(8, int(std::ceil(1.25 * ntheta_full * len / (2.0 * kPi))) + 16);
                    const Rule1D ga = gauss_legendre01(na);
                    for (int a = 0; a < na; ++a)
                        br.arc.emplace_back(t1 + len * ga.x[a], len * ga.w[a]);
                }
            }
            rule.bulk.push_back(std::move(br));
        }
    }

    // singular patches
    const int patch_radial = std::max(24, radial_order / 2);
    for (std::size_t k = 0; k < s; ++k) {
        PatchRule p;
        p.center = spec.singularities[k].a;
        p.m = spec.singularities[k].m;
        p.eps = eps[k];
        p.nphi = ntheta_full;
        const double m = p.m;
        int kappa = 1;
        if (m != std::floor(m)) kappa = std::clamp(int(std::ceil(6.0 / (m + 2.0))), 2, 24);
        const Rule1D gl = gauss_legendre01(patch_radial);
        p.radial.reserve(std::size_t(patch_radial));
        for (int q = 0; q < patch_radial; ++q) {
            const double x = gl.x[q];
            const double t = p.eps * std::pow(x, double(kappa));
            const double ut = gl.w[q] * kappa * p.eps * p.eps * std::pow(x, double(2 * kappa - 1));
            p.radial.emplace_back(t, ut);
        }
        rule.patches.push_back(std::move(p));
    }
    return rule;
}

/// sum_i w_i f(z_i) over the rule's nodes, in a fixed deterministic order
/// with compensated summation.
template <class F>
cx integrate_disk(const DiskRule& rule, F&& f) {
    cx acc(0.0), comp(0.0);
    rule.for_each_node([&](cx z, double w) {
        const cx y = w * f(z) - comp;
        const cx t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    });
    return acc;
}

} // namespace bergman

#endif
