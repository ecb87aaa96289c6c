#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bitrade/core.hpp"
#include "bitrade/rational.hpp"
#include "bitrade/reductions.hpp"
#include "bitrade/submodular.hpp"

namespace bitrade {

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard; the bounded draw below uses plain modulo so that identical
/// seeds give identical streams on every platform (the tiny modulo bias is
/// irrelevant for test-instance generation).
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    long below(long n) {
        if (n <= 0) throw std::invalid_argument("Sampler::below: n must be positive");
        return static_cast<long>(next() % static_cast<std::uint64_t>(n));
    }

    long range(long lo, long hi) {  // inclusive bounds
        if (hi < lo) throw std::invalid_argument("Sampler::range: empty range");
        return lo + below(hi - lo + 1);
    }

    /// Rational with numerator in [num_lo, num_hi] and denominator in [1, max_den].
    Rat rational(long num_lo, long num_hi, long max_den = 4) {
        return Rat(range(num_lo, num_hi), range(1, max_den));
    }

private:
    std::mt19937_64 engine_;
};

/// Utility vectors with mixed signs so that veto patterns vary.
inline std::vector<Rat> random_utility_vector(Sampler& rng, int M, long lo = -8, long hi = 8,
                                              long max_den = 4) {
    std::vector<Rat> v(static_cast<std::size_t>(M));
    for (auto& x : v) x = rng.rational(lo, hi, max_den);
    return v;
}

inline Instance random_instance(Sampler& rng, int M, long lo = -8, long hi = 8, long max_den = 4) {
    return Instance(random_utility_vector(rng, M, lo, hi, max_den),
                    random_utility_vector(rng, M, lo, hi, max_den));
}

inline std::vector<Rat> random_submodular_vector(Sampler& rng, int M, long lo = -6, long hi = 6,
                                                 long max_den = 4) {
    return random_submodular_vector(M, [&] { return rng.rational(lo, hi, max_den); });
}

/// Instance with both utility vectors submodular.
inline Instance random_submodular_instance(Sampler& rng, int M, long lo = -6, long hi = 6,
                                           long max_den = 4) {
    return Instance(random_submodular_vector(rng, M, lo, hi, max_den),
                    random_submodular_vector(rng, M, lo, hi, max_den));
}

inline MultiUnitScenario random_multiunit_scenario(Sampler& rng, int M) {
    std::vector<Rat> beta = random_utility_vector(rng, M, -4, 20, 3);
    std::vector<Rat> sigma(static_cast<std::size_t>(M) + 1, Rat(0));
    for (int i = 1; i <= M; ++i) sigma[static_cast<std::size_t>(i)] = rng.rational(-4, 16, 3);
    return MultiUnitScenario(std::move(beta), std::move(sigma), rng.rational(0, 6, 2));
}

/// Multi-unit scenario with submodular beta and sigma (decreasing marginal
/// returns on both sides).
inline MultiUnitScenario random_submodular_multiunit_scenario(Sampler& rng, int M) {
    std::vector<Rat> beta = random_submodular_vector(rng, M, -2, 8, 3);
    std::vector<Rat> sigma_tail = random_submodular_vector(rng, M, -2, 6, 3);
    std::vector<Rat> sigma(static_cast<std::size_t>(M) + 1, Rat(0));
    for (int i = 1; i <= M; ++i) sigma[static_cast<std::size_t>(i)] = sigma_tail[static_cast<std::size_t>(i - 1)];
    return MultiUnitScenario(std::move(beta), std::move(sigma), rng.rational(0, 4, 2));
}

/// Additive multi-unit scenario: beta_i = i*beta_1, sigma_i = i*sigma_1.
inline MultiUnitScenario random_additive_multiunit_scenario(Sampler& rng, int M) {
    const Rat beta1 = rng.rational(-2, 8, 3);
    const Rat sigma1 = rng.rational(-2, 8, 3);
    std::vector<Rat> beta(static_cast<std::size_t>(M));
    std::vector<Rat> sigma(static_cast<std::size_t>(M) + 1, Rat(0));
    for (int i = 1; i <= M; ++i) {
        beta[static_cast<std::size_t>(i - 1)] = beta1 * i;
        sigma[static_cast<std::size_t>(i)] = sigma1 * i;
    }
    return MultiUnitScenario(std::move(beta), std::move(sigma), rng.rational(0, 6, 2));
}

inline UnitDemandScenario random_unitdemand_scenario(Sampler& rng, int M) {
    std::vector<Rat> beta = random_utility_vector(rng, M, -2, 12, 3);
    std::vector<Rat> prices = random_utility_vector(rng, M, 0, 8, 2);
    Rat full = rng.rational(0, 20, 2);
    std::vector<Rat> minus(static_cast<std::size_t>(M));
    for (auto& v : minus) v = full - rng.rational(-2, 8, 2);
    return UnitDemandScenario(std::move(beta), std::move(prices), std::move(full), std::move(minus));
}

}  // namespace bitrade
