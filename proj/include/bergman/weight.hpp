#ifndef BERGMAN_WEIGHT_HPP
#define BERGMAN_WEIGHT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bergman/poly.hpp"

namespace bergman {

/// One factor |(z-a)/(1 - conj(a) z)|^m of the weight.
struct BlaschkeSingularity {
    cx a;     // location, |a| < 1
    double m; // exponent, m > -2 and m != 0
};

/// The analytic, zero-free outer factor v of the weight.
///
/// Three closed-form families are supported so that the exterior reflection
/// v*, the critical radii and all Maclaurin/Laurent coefficients can be
/// computed without general-purpose analytic continuation:
///   Poly   v(z) = scale * prod (1 - conj(b_k) z)^{r_k},  r_k positive integers
///   Power  v(z) = scale * prod (1 - conj(b_k) z)^{r_k},  r_k real, nonzero
///   Exp    v(z) = scale * exp(g(z)),                     g a polynomial
/// Zeros / branch points sit at 1/conj(b_k), outside the closed disk, and
/// exp never vanishes, so v is analytic and zero-free in |z| <= 1 by
/// construction. Power factors use principal branches; they are the
/// continuous continuation along radii from v(0) = scale > 0 because
/// Re(1 - conj(b) z) > 0 throughout the closed disk.
struct OuterPart {
    enum class Kind { Poly, Power, Exp };

    Kind kind = Kind::Poly;
    std::vector<std::pair<cx, double>> factors; // (b_k, r_k), 0 < |b_k| < 1, for Poly/Power
    std::vector<cx> exp_coeffs;                 // g coefficients, ascending, for Exp
    double scale = 1.0;                         // positive; fixes v(0) > 0

    static OuterPart one() { return OuterPart{}; }
    static OuterPart poly(std::vector<std::pair<cx, double>> f, double s = 1.0) {
        return OuterPart{Kind::Poly, std::move(f), {}, s};
    }
    static OuterPart power(std::vector<std::pair<cx, double>> f, double s = 1.0) {
        return OuterPart{Kind::Power, std::move(f), {}, s};
    }
    static OuterPart expPoly(std::vector<cx> g, double s = 1.0) {
        return OuterPart{Kind::Exp, {}, std::move(g), s};
    }

    bool is_one() const {
        return (kind != Kind::Exp && factors.empty() && scale == 1.0) ||
               (kind == Kind::Exp && scale == 1.0 &&
                std::all_of(exp_coeffs.begin(), exp_coeffs.end(), [](cx c) { return c == cx(0.0); }));
    }
};

/// Weight w(z) = |v(z)|^2 prod_k |(z-a_k)/(1 - conj(a_k) z)|^{m_k} on the disk.
struct WeightSpec {
    OuterPart outer;
    std::vector<BlaschkeSingularity> singularities;

    int s() const { return static_cast<int>(singularities.size()); }
};

struct CriticalRadii {
    double rho_w;   // max(rho_v, rho_a); v*/q continues to |z| > rho_w
    double rho_v;   // smallest radius beyond which v* continues without zeros
    double rho_a;   // max |a_k|
    double c0;      // 1/v(0) = v*(infinity)
    double m_total; // sum of the exponents m_k
};

inline void validate(const OuterPart& o) {
    if (!(o.scale > 0.0)) throw std::invalid_argument("outer part: scale must be positive");
    if (o.kind == OuterPart::Kind::Exp) {
        if (!o.exp_coeffs.empty() && std::imag(o.exp_coeffs[0]) != 0.0)
            throw std::invalid_argument("outer part: exp constant term must be real so that v(0) > 0");
        return;
    }
    for (const auto& [b, r] : o.factors) {
        const double ab = std::abs(b);
        if (!(ab > 0.0 && ab < 1.0))
            throw std::invalid_argument("outer part: factor base must satisfy 0 < |b| < 1");
        if (o.kind == OuterPart::Kind::Poly) {
            if (!(r > 0.0) || r != std::floor(r))
                throw std::invalid_argument("outer part: poly exponents must be positive integers");
        } else if (r == 0.0) {
            throw std::invalid_argument("outer part: power exponent must be nonzero");
        }
    }
}

inline void validate(const WeightSpec& spec) {
    validate(spec.outer);
    const auto& sg = spec.singularities;
    for (std::size_t k = 0; k < sg.size(); ++k) {
        if (!(std::abs(sg[k].a) < 1.0)) throw std::invalid_argument("singularity location must satisfy |a| < 1");
        if (!(sg[k].m > -2.0) || sg[k].m == 0.0)
            throw std::invalid_argument("singularity exponent must lie in (-2,inf) and be nonzero");
        for (std::size_t j = 0; j < k; ++j)
            if (sg[j].a == sg[k].a) throw std::invalid_argument("singularity locations must be pairwise distinct");
    }
}

/// v(z). For Power factors the principal branch is the one continued from
/// v(0) = scale; throws if z lies on/beyond a branch cut (only possible
/// outside the closed disk).
inline cx eval_outer(const WeightSpec& spec, cx z) {
    const OuterPart& o = spec.outer;
    switch (o.kind) {
        case OuterPart::Kind::Poly: {
            cx v(o.scale);
            for (const auto& [b, r] : o.factors) {
                cx f = 1.0 - std::conj(b) * z;
                cx fp(1.0);
                for (int i = 0; i < int(r); ++i) fp *= f;
                v *= fp;
            }
            return v;
        }
        case OuterPart::Kind::Power: {
            cx v(o.scale);
            for (const auto& [b, r] : o.factors) {
                cx f = 1.0 - std::conj(b) * z;
                if (std::imag(f) == 0.0 && std::real(f) <= 0.0)
                    throw std::domain_error("eval_outer: point on branch cut of power factor");
                v *= std::exp(r * std::log(f));
            }
            return v;
        }
        case OuterPart::Kind::Exp: {
            cx g(0.0);
            for (std::size_t i = o.exp_coeffs.size(); i-- > 0;) g = g * z + o.exp_coeffs[i];
            return o.scale * std::exp(g);
        }
    }
    return cx(o.scale);
}

/// q(z) = prod (z - a_k) and q*(z) = prod (1 - conj(a_k) z); both 1 for s=0.
inline std::pair<cx, cx> eval_q_qstar(const WeightSpec& spec, cx z) {
    cx q(1.0), qs(1.0);
    for (const auto& sg : spec.singularities) {
        q *= (z - sg.a);
        qs *= (1.0 - std::conj(sg.a) * z);
    }
    return {q, qs};
}

inline CriticalRadii critical_radii(const WeightSpec& spec) {
    CriticalRadii r{};
    r.rho_v = 0.0;
    if (spec.outer.kind != OuterPart::Kind::Exp)
        for (const auto& [b, rr] : spec.outer.factors) r.rho_v = std::max(r.rho_v, std::abs(b));
    r.rho_a = 0.0;
    double mt = 0.0;
    for (const auto& sg : spec.singularities) {
        r.rho_a = std::max(r.rho_a, std::abs(sg.a));
        mt += sg.m;
    }
    r.rho_w = std::max(r.rho_v, r.rho_a);
    r.c0 = 1.0 / std::real(eval_outer(spec, cx(0.0)));
    r.m_total = mt;
    return r;
}

/// v*(z) = 1/conj(v(1/conj(z))), the exterior reflection of v.
/// Analytic (and zero-free) for |z| > rho_v; v*(inf) = 1/v(0).
inline cx eval_vstar(const WeightSpec& spec, cx z) {
    const OuterPart& o = spec.outer;
    const double rho_v = critical_radii(spec).rho_v;
    if (!(std::abs(z) > rho_v)) throw std::domain_error("eval_vstar: |z| must exceed rho_v");
    switch (o.kind) {
        case OuterPart::Kind::Poly: {
            cx v(1.0 / o.scale);
            for (const auto& [b, r] : o.factors) {
                cx f = 1.0 - b / z;
                cx fp(1.0);
                for (int i = 0; i < int(r); ++i) fp *= f;
                v /= fp;
            }
            return v;
        }
        case OuterPart::Kind::Power: {
            cx v(1.0 / o.scale);
            for (const auto& [b, r] : o.factors) v *= std::exp(-r * std::log(1.0 - b / z));
            return v;
        }
        case OuterPart::Kind::Exp: {
            cx gc(0.0);
            const cx w = 1.0 / z;
            for (std::size_t i = o.exp_coeffs.size(); i-- > 0;) gc = gc * w + std::conj(o.exp_coeffs[i]);
            return std::exp(-gc) / o.scale;
        }
    }
    return cx(1.0 / o.scale);
}

/// w(z) >= 0 for |z| < 1. Throws at z = a_k when m_k < 0 (w is infinite there).
inline double eval_weight(const WeightSpec& spec, cx z) {
    const cx v = eval_outer(spec, z);
    double w = std::norm(v);
    for (const auto& sg : spec.singularities) {
        const double num = std::abs(z - sg.a);
        if (num == 0.0) {
            if (sg.m < 0.0) throw std::domain_error("eval_weight: z coincides with a negative-exponent singularity");
            return 0.0;
        }
        const double den = std::abs(1.0 - std::conj(sg.a) * z);
        w *= std::pow(num / den, sg.m);
    }
    return w;
}

/// Maclaurin coefficients of v (exact recurrences per variant).
inline std::vector<cx> outer_series(const WeightSpec& spec, std::size_t count) {
    const OuterPart& o = spec.outer;
    std::vector<cx> v(count, cx(0.0));
    if (count == 0) return v;
    if (o.kind == OuterPart::Kind::Exp) {
        v = series_exp(o.exp_coeffs, count);
        for (auto& c : v) c *= o.scale;
        return v;
    }
    v[0] = o.scale;
    for (const auto& [b, r] : o.factors) v = series_mul(v, series_binomial(-std::conj(b), r, count), count);
    return v;
}

/// Maclaurin coefficients of 1/v.
inline std::vector<cx> outer_reciprocal_series(const WeightSpec& spec, std::size_t count) {
    return series_reciprocal(outer_series(spec, count), count);
}

/// v'(z)/v(z), analytic in the closed disk.
inline cx outer_log_derivative(const WeightSpec& spec, cx z) {
    const OuterPart& o = spec.outer;
    if (o.kind == OuterPart::Kind::Exp) {
        cx d(0.0);
        for (std::size_t i = o.exp_coeffs.size(); i-- > 1;) d = d * z + double(i) * o.exp_coeffs[i];
        return d;
    }
    cx d(0.0);
    for (const auto& [b, r] : o.factors) d += r * (-std::conj(b)) / (1.0 - std::conj(b) * z);
    return d;
}

/// v*'(z)/v*(z), analytic for |z| > rho_v.
inline cx vstar_log_derivative(const WeightSpec& spec, cx z) {
    const OuterPart& o = spec.outer;
    if (o.kind == OuterPart::Kind::Exp) {
        cx d(0.0);
        const cx w = 1.0 / z;
        for (std::size_t i = o.exp_coeffs.size(); i-- > 1;) d = d * w + double(i) * std::conj(o.exp_coeffs[i]);
        return d * w * w; // -d/dz conj(g)(1/z) = g~'(1/z)/z^2
    }
    cx d(0.0);
    for (const auto& [b, r] : o.factors) d += -r * b / (z * (z - b));
    return d;
}

/// Same singularities, outer part identically one: the weight h of the
/// pure Blaschke-modulus part.
inline WeightSpec pure_blaschke_part(const WeightSpec& spec) {
    return WeightSpec{OuterPart::one(), spec.singularities};
}

/// FNV-1a digest of the defining data; used to key caches and basis
/// provenance fingerprints.
inline std::uint64_t fingerprint(const WeightSpec& spec) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double x) {
        std::uint64_t u;
        static_assert(sizeof(u) == sizeof(x));
        std::memcpy(&u, &x, sizeof(u));
        for (int i = 0; i < 8; ++i) {
            h ^= (u >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(double(int(spec.outer.kind)));
    mix(spec.outer.scale);
    mix(double(spec.outer.factors.size()));
    for (const auto& [b, r] : spec.outer.factors) { mix(b.real()); mix(b.imag()); mix(r); }
    mix(double(spec.outer.exp_coeffs.size()));
    for (const auto& c : spec.outer.exp_coeffs) { mix(c.real()); mix(c.imag()); }
    mix(double(spec.singularities.size()));
    for (const auto& sg : spec.singularities) { mix(sg.a.real()); mix(sg.a.imag()); mix(sg.m); }
    return h;
}

} // namespace bergman

#endif
