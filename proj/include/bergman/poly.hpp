#ifndef BERGMAN_POLY_HPP
#define BERGMAN_POLY_HPP

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bergman {

using cx = std::complex<double>;

inline constexpr double kTrimTol = 0.0; // trim exact zeros only by default

/// Dense polynomial with complex coefficients, ascending degree.
/// The universal value type for orthonormal polynomials, Faber polynomials
/// and circle polynomials.
class Poly {
public:
    Poly() : c_(1, cx(0.0)) {}
    explicit Poly(std::vector<cx> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, cx(0.0));
    }
    static Poly monomial(int degree, cx a = cx(1.0)) {
        std::vector<cx> c(static_cast<std::size_t>(degree) + 1, cx(0.0));
        c.back() = a;
        return Poly(std::move(c));
    }

    const std::vector<cx>& coeffs() const { return c_; }
    std::vector<cx>& coeffs() { return c_; }

    // degree of the stored representation (trailing zeros not stripped)
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    cx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : cx(0.0);
    }
    cx leading() const { return c_.back(); }

    cx operator()(cx z) const {
        cx acc(0.0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<cx> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * double(i);
        return Poly(std::move(d));
    }

    // multiply by z^k
    Poly shifted(int k = 1) const {
        std::vector<cx> d(c_.size() + static_cast<std::size_t>(k), cx(0.0));
        for (std::size_t i = 0; i < c_.size(); ++i) d[i + static_cast<std::size_t>(k)] = c_[i];
        return Poly(std::move(d));
    }

    // z^n conj-coefficient reversal: p*(z) = z^n conj(p(1/conj(z))) for p of degree n
    Poly reversed() const {
        std::vector<cx> d(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) d[c_.size() - 1 - i] = std::conj(c_[i]);
        return Poly(std::move(d));
    }

    void trim(double tol = kTrimTol) {
        while (c_.size() > 1 && std::abs(c_.back()) <= tol) c_.pop_back();
    }

    Poly& operator*=(cx a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cx(0.0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cx(0.0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend Poly operator*(cx a, Poly p) {
        p *= a;
        return p;
    }

private:
    std::vector<cx> c_;
};

// ---- truncated power-series arithmetic (coefficient vectors, ascending) ----

// Cauchy product truncated to `count` coefficients.
inline std::vector<cx> series_mul(const std::vector<cx>& a, const std::vector<cx>& b, std::size_t count) {
    std::vector<cx> r(count, cx(0.0));
    for (std::size_t i = 0; i < a.size() && i < count; ++i) {
        if (a[i] == cx(0.0)) continue;
        const std::size_t jmax = std::min(b.size(), count - i);
        for (std::size_t j = 0; j < jmax; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// Reciprocal series: r with a*r = 1 + O(z^count). Requires a[0] != 0.
inline std::vector<cx> series_reciprocal(const std::vector<cx>& a, std::size_t count) {
    if (a.empty() || a[0] == cx(0.0)) throw std::invalid_argument("series_reciprocal: zero constant term");
    std::vector<cx> r(count, cx(0.0));
    r[0] = 1.0 / a[0];
    for (std::size_t n = 1; n < count; ++n) {
        cx acc(0.0);
        const std::size_t kmax = std::min(n, a.size() - 1);
        for (std::size_t k = 1; k <= kmax; ++k) acc += a[k] * r[n - k];
        r[n] = -acc / a[0];
    }
    return r;
}

// exp of a series with g[0] arbitrary: E = exp(g), via E' = g' E.
inline std::vector<cx> series_exp(const std::vector<cx>& g, std::size_t count) {
    std::vector<cx> e(count, cx(0.0));
    e[0] = std::exp(g.empty() ? cx(0.0) : g[0]);
    for (std::size_t n = 1; n < count; ++n) {
        cx acc(0.0);
        // e_n = (1/n) sum_{k=1..n} k g_k e_{n-k}
        const std::size_t kmax = std::min(n, g.size() - 1);
        for (std::size_t k = 1; k <= kmax; ++k) acc += double(k) * g[k] * e[n - k];
        e[n] = acc / double(n);
    }
    return e;
}

// (1 + u*z)^{r} as a Maclaurin series, real exponent r, via the binomial recurrence.
inline std::vector<cx> series_binomial(cx u, double r, std::size_t count) {
    std::vector<cx> s(count, cx(0.0));
    s[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j)
        s[j] = s[j - 1] * u * ((r - double(j - 1)) / double(j));
    return s;
}

} // namespace bergman

#endif
