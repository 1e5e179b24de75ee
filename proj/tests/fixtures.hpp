#ifndef BERGMAN_TEST_FIXTURES_HPP
#define BERGMAN_TEST_FIXTURES_HPP

#include <map>
#include <random>
#include <tuple>

#include "bergman/asymptotics.hpp"
#include "bergman/orthosystem.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/representation.hpp"
#include "bergman/weight.hpp"

namespace fixtures {

using namespace bergman;

inline WeightSpec unit() { return {OuterPart::one(), {}}; }
inline WeightSpec poly1() { return {OuterPart::poly({{cx(0.5, 0.0), 1.0}}), {}}; }
inline WeightSpec poly2() { return {OuterPart::poly({{cx(0.5, 0.0), 2.0}}), {}}; }
inline WeightSpec expz() { return {OuterPart::expPoly({cx(0.0), cx(1.0)}), {}}; }
inline WeightSpec blaschke1() { return {OuterPart::one(), {{cx(0.5, 0.0), 1.0}}}; }
inline WeightSpec bs_family() {
    return {OuterPart::power({{cx(0.5, 0.0), -1.0}}), {{cx(0.5, 0.0), 2.0}}};
}
inline WeightSpec rk0() { return {OuterPart::one(), {{cx(0.6, 0.0), 2.0}}}; }
inline WeightSpec branch() { return {OuterPart::power({{cx(0.6, 0.0), 0.5}}), {}}; }
inline WeightSpec two_sing() {
    return {OuterPart::one(), {{cx(0.3, 0.0), 2.0}, {cx(0.0, -0.4), 1.0}}};
}

// random-but-valid specs for property-style tests; deterministic per index
inline WeightSpec random_spec(std::uint64_t index) {
    std::mt19937_64 rng(0x51ed0c1dull + index);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    OuterPart outer;
    const int kind = int(rng() % 3);
    const int nf = int(rng() % 3);
    if (kind == 2) {
        outer = OuterPart::expPoly({cx(0.0), cx(0.4 * uni(rng), 0.4 * uni(rng)),
                                    cx(0.2 * uni(rng), -0.2 * uni(rng))});
    } else {
        std::vector<std::pair<cx, double>> factors;
        for (int i = 0; i < nf; ++i) {
            const cx b = std::polar(0.1 + 0.75 * uni(rng), 2.0 * kPi * uni(rng));
            const double r = (kind == 0) ? double(1 + int(rng() % 2))
                                         : ((rng() % 2) ? 0.5 : -1.5);
            factors.emplace_back(b, r);
        }
        outer = (kind == 0) ? OuterPart::poly(std::move(factors))
                            : OuterPart::power(std::move(factors));
    }
    std::vector<BlaschkeSingularity> sing;
    const int ns = int(rng() % 3);
    const double ms[4] = {-1.5, -1.0, 1.0, 2.0};
    for (int i = 0; i < ns; ++i)
        sing.push_back({std::polar(0.15 + 0.5 * uni(rng) + 0.12 * i, 2.0 * kPi * uni(rng)),
                        ms[rng() % 4]});
    WeightSpec spec{std::move(outer), std::move(sing)};
    validate(spec);
    return spec;
}

struct BasisBundle {
    DiskRule rule;
    OrthoBasis basis;
};

// memoized rule + basis per (spec, N, orders); keeps the suites fast
inline const BasisBundle& bundle(const WeightSpec& spec, int N, int radial, int angular) {
    static std::map<std::tuple<std::uint64_t, int, int, int>, BasisBundle> cache;
    const auto key = std::make_tuple(fingerprint(spec), N, radial, angular);
    auto it = cache.find(key);
    if (it == cache.end()) {
        DiskRule rule = build_disk_rule(spec, radial, angular);
        OrthoBasis basis = bergman_orthonormalize(spec, N, rule);
        it = cache.emplace(key, BasisBundle{std::move(rule), std::move(basis)}).first;
    }
    return it->second;
}

} // namespace fixtures

#endif
