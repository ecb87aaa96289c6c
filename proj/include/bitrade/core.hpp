#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitrade/rational.hpp"

namespace bitrade {

/// A market instance: M cooperation options with exact per-option utilities
/// for the buyer and the seller. Option 0 (no cooperation, both utilities
/// zero) is implicit and never stored.
struct Instance {
    std::vector<Rat> buyer;
    std::vector<Rat> seller;

    Instance() = default;
    Instance(std::vector<Rat> b, std::vector<Rat> s)
        : buyer(std::move(b)), seller(std::move(s)) {
        if (buyer.empty() || buyer.size() != seller.size())
            throw std::invalid_argument("instance: buyer/seller must have equal positive length");
    }

    int options() const { return static_cast<int>(buyer.size()); }

    bool operator==(const Instance& other) const = default;
};

/// Probability vector over options 0..M. Entries are exact, nonnegative and
/// sum to one; both properties are enforced at construction.
struct OutcomeDistribution {
    std::vector<Rat> probs;

    OutcomeDistribution() = default;
    explicit OutcomeDistribution(std::vector<Rat> p) : probs(std::move(p)) {
        if (probs.empty()) throw std::invalid_argument("distribution: empty");
        Rat sum(0);
        for (const auto& v : probs) {
            if (v < 0) throw std::invalid_argument("distribution: negative entry");
            sum += v;
        }
        if (sum != 1) throw std::invalid_argument("distribution: entries must sum to 1");
    }

    int options() const { return static_cast<int>(probs.size()) - 1; }

    static OutcomeDistribution point(int option, int M) {
        std::vector<Rat> p(static_cast<std::size_t>(M) + 1, Rat(0));
        p.at(static_cast<std::size_t>(option)) = 1;
        return OutcomeDistribution(std::move(p));
    }

    bool operator==(const OutcomeDistribution& other) const = default;
};

/// Expected gains of a distribution evaluated at a (true) instance.
struct GainReport {
    Rat buyer_gain;
    Rat seller_gain;
    Rat total_gain;
    Rat opt;
    std::optional<Rat> ratio;  // absent when opt == 0
};

/// A mechanism maps reported instances to outcome distributions. The map
/// itself is deterministic; all randomness lives in the distribution.
struct Mechanism {
    std::string name;
    std::function<OutcomeDistribution(const Instance&)> rule;

    OutcomeDistribution operator()(const Instance& reported) const { return rule(reported); }
};

/// Options acceptable to both agents: {i in 1..M : b_i >= 0 and s_i >= 0},
/// plus option 0 which is always acceptable.
inline std::vector<int> feasible_set(const Instance& inst) {
    std::vector<int> out{0};
    for (int i = 1; i <= inst.options(); ++i)
        if (inst.buyer[static_cast<std::size_t>(i - 1)] >= 0 &&
            inst.seller[static_cast<std::size_t>(i - 1)] >= 0)
            out.push_back(i);
    return out;
}

struct OptResult {
    Rat value;
    int option;  // smallest index attaining the maximum
};

/// Best total utility over feasible options. Never negative (option 0 gives
/// zero); ties break to the smallest option index.
inline OptResult opt_gain(const Instance& inst) {
    OptResult best{Rat(0), 0};
    for (int i = 1; i <= inst.options(); ++i) {
        const auto& b = inst.buyer[static_cast<std::size_t>(i - 1)];
        const auto& s = inst.seller[static_cast<std::size_t>(i - 1)];
        if (b < 0 || s < 0) continue;
        Rat total = b + s;
        if (total > best.value) best = {std::move(total), i};
    }
    return best;
}

/// Expected gains of distribution `r` at the true instance `inst` (whatever
/// report produced `r`).
inline GainReport expected_gains(const OutcomeDistribution& r, const Instance& inst) {
    if (r.options() != inst.options())
        throw std::invalid_argument("expected_gains: distribution/instance length mismatch");
    GainReport g{Rat(0), Rat(0), Rat(0), Rat(0), std::nullopt};
    for (int i = 1; i <= inst.options(); ++i) {
        const auto& p = r.probs[static_cast<std::size_t>(i)];
        g.buyer_gain += p * inst.buyer[static_cast<std::size_t>(i - 1)];
        g.seller_gain += p * inst.seller[static_cast<std::size_t>(i - 1)];
    }
    g.total_gain = g.buyer_gain + g.seller_gain;
    g.opt = opt_gain(inst).value;
    if (g.opt > 0) g.ratio = g.total_gain / g.opt;
    return g;
}

/// Execution step: each agent may decline an option that gives it negative
/// utility. All probability mass on options outside feasible_set(reported)
/// moves to option 0; feasible mass is untouched.
inline OutcomeDistribution apply_ir_veto(const OutcomeDistribution& r, const Instance& reported) {
    if (r.options() != reported.options())
        throw std::invalid_argument("apply_ir_veto: distribution/instance length mismatch");
    std::vector<Rat> out(r.probs);
    for (int i = 1; i <= reported.options(); ++i) {
        const auto& b = reported.buyer[static_cast<std::size_t>(i - 1)];
        const auto& s = reported.seller[static_cast<std::size_t>(i - 1)];
        if (b < 0 || s < 0) {
            out[0] += out[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = 0;
        }
    }
    return OutcomeDistribution(std::move(out));
}

/// Worst-case ratio sweep of a mechanism on truthful reports. Instances with
/// opt == 0 carry no ratio and are skipped, but any such instance with a
/// strictly negative total gain is flagged as a guarantee violation.
struct RatioSweep {
    std::optional<Rat> min_ratio;
    std::optional<Instance> witness;           // attains min_ratio
    std::size_t evaluated = 0;                 // instances with opt > 0
    std::size_t skipped_zero_opt = 0;
    std::size_t negative_gain_count = 0;       // opt == 0 but total gain < 0
    std::optional<Instance> negative_gain_witness;
};

/// Streaming form of the ratio sweep, for instance sources too large to
/// materialize.
class RatioSweeper {
public:
    explicit RatioSweeper(const Mechanism& mech) : mech_(mech) {}

    void observe(const Instance& inst) {
        const GainReport g = expected_gains(mech_(inst), inst);
        if (!g.ratio) {
            ++sweep_.skipped_zero_opt;
            if (g.total_gain < 0) {
                if (sweep_.negative_gain_count == 0) sweep_.negative_gain_witness = inst;
                ++sweep_.negative_gain_count;
            }
            return;
        }
        ++sweep_.evaluated;
        if (!sweep_.min_ratio || *g.ratio < *sweep_.min_ratio) {
            sweep_.min_ratio = g.ratio;
            sweep_.witness = inst;
        }
    }

    const RatioSweep& result() const { return sweep_; }

private:
    const Mechanism& mech_;
    RatioSweep sweep_;
};

inline RatioSweep competitive_ratio_over(const Mechanism& mech, std::span<const Instance> instances) {
    RatioSweeper sweeper(mech);
    for (const auto& inst : instances) sweeper.observe(inst);
    return sweeper.result();
}

}  // namespace bitrade
