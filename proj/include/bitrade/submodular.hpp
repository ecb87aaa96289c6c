#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bitrade/rational.hpp"

namespace bitrade {

/// Nonincreasing increments, anchored at v_0 = 0: for every i in 1..M-1,
/// v_{i+1} - v_i <= v_i - v_{i-1}. The i = 1 boundary compares against the
/// implicit v_0 = 0.
inline bool is_submodular(std::span<const Rat> v) {
    Rat prev_increment;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat increment = (i == 0) ? v[0] : v[i] - v[i - 1];
        if (i > 0 && increment > prev_increment) return false;
        prev_increment = std::move(increment);
    }
    return true;
}

/// v_i / i nonincreasing over i = 1..M. For vectors with v_0 = 0 this is a
/// consequence of submodularity.
inline bool check_ratio_monotone(std::span<const Rat> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        // v_{i+1}/(i+1) <= v_i/i, cross-multiplied (indices here are 0-based)
        if (v[i] * Rat(i) > v[i - 1] * Rat(i + 1)) return false;
    }
    return true;
}

/// Prefix sums from v_0 = 0. Submodular iff the increments are nonincreasing.
inline std::vector<Rat> vector_from_increments(std::span<const Rat> increments) {
    std::vector<Rat> v;
    v.reserve(increments.size());
    Rat acc(0);
    for (const auto& d : increments) {
        acc += d;
        v.push_back(acc);
    }
    return v;
}

/// Samples a submodular vector by drawing M increments with `draw`, sorting
/// them nonincreasing, and prefix-summing. Always passes is_submodular.
inline std::vector<Rat> random_submodular_vector(int M, const std::function<Rat()>& draw) {
    if (M < 1) throw std::invalid_argument("random_submodular_vector: M must be >= 1");
    std::vector<Rat> increments(static_cast<std::size_t>(M));
    for (auto& d : increments) d = draw();
    std::sort(increments.begin(), increments.end(), [](const Rat& a, const Rat& b) { return a > b; });
    return vector_from_increments(increments);
}

}  // namespace bitrade
