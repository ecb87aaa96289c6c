#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitrade/core.hpp"
#include "bitrade/rational.hpp"

namespace bitrade {

/// M-th harmonic number, exact.
inline Rat harmonic(int M) {
    if (M < 1) throw std::invalid_argument("harmonic: M must be >= 1");
    Rat h(0);
    for (int j = 1; j <= M; ++j) h += Rat(1, j);
    return h;
}

namespace detail {

inline void require_options(const Instance& reported, int M, const std::string& who) {
    if (reported.options() != M)
        throw std::invalid_argument(who + ": report has " + std::to_string(reported.options()) +
                                    " options, mechanism built for " + std::to_string(M));
}

}  // namespace detail

/// Report-independent base distribution composed with the IR veto against the
/// reported instance. The veto makes truthful reporting weakly dominant: an
/// agent's report only ever moves mass between an option and no-trade.
inline Mechanism fixed_distribution(std::vector<Rat> weights, bool veto = true) {
    OutcomeDistribution base(std::move(weights));  // validates the distribution
    const int M = base.options();
    std::string name = "fixed(";
    for (int i = 0; i <= M; ++i) {
        if (i) name += ",";
        name += format_rational(base.probs[static_cast<std::size_t>(i)]);
    }
    name += veto ? ")+veto" : ")";
    return Mechanism{std::move(name), [base, veto, M](const Instance& reported) {
                         detail::require_options(reported, M, "fixed_distribution");
                         return veto ? apply_ir_veto(base, reported) : base;
                     }};
}

/// Picks each option 1..M with probability 1/M, then lets the agents veto.
inline Mechanism uniform_random(int M) {
    if (M < 1) throw std::invalid_argument("uniform_random: M must be >= 1");
    std::vector<Rat> w(static_cast<std::size_t>(M) + 1, Rat(1, M));
    w[0] = 0;
    Mechanism mech = fixed_distribution(std::move(w), true);
    mech.name = "uniform-random";
    return mech;
}

/// Picks option i with probability 1/(i * H_M); the weights sum to exactly 1,
/// so the base distribution puts no mass on no-trade. Veto applies after.
inline Mechanism decreasing_random(int M) {
    if (M < 1) throw std::invalid_argument("decreasing_random: M must be >= 1");
    const Rat h = harmonic(M);
    std::vector<Rat> w(static_cast<std::size_t>(M) + 1, Rat(0));
    for (int i = 1; i <= M; ++i) w[static_cast<std::size_t>(i)] = Rat(1) / (Rat(i) * h);
    Mechanism mech = fixed_distribution(std::move(w), true);
    mech.name = "decreasing-random";
    return mech;
}

/// Deterministic foil that trusts the reports: plays the feasible option with
/// the highest reported total utility (smallest index on ties, option 0
/// counts with utility zero). Not truthful; used to validate the auditor.
inline Mechanism reported_welfare_argmax(int M) {
    if (M < 1) throw std::invalid_argument("reported_welfare_argmax: M must be >= 1");
    return Mechanism{"welfare-argmax", [M](const Instance& reported) {
                         detail::require_options(reported, M, "reported_welfare_argmax");
                         int best = 0;
                         Rat best_welfare(0);
                         for (int i : feasible_set(reported)) {
                             if (i == 0) continue;
                             Rat w = reported.buyer[static_cast<std::size_t>(i - 1)] +
                                     reported.seller[static_cast<std::size_t>(i - 1)];
                             if (w > best_welfare) {
                                 best_welfare = std::move(w);
                                 best = i;
                             }
                         }
                         return OutcomeDistribution::point(best, M);
                     }};
}

/// Parses the CLI mechanism grammar:
///   "ur" | "dr" | "welfare-argmax" | "dist:<p0,p1,...,pM>[:veto]"
inline Mechanism parse_mechanism_spec(const std::string& spec, int M) {
    if (spec == "ur") return uniform_random(M);
    if (spec == "dr") return decreasing_random(M);
    if (spec == "welfare-argmax") return reported_welfare_argmax(M);
    const std::string prefix = "dist:";
    if (spec.rfind(prefix, 0) == 0) {
        std::string body = spec.substr(prefix.size());
        bool veto = false;
        const std::string suffix = ":veto";
        if (body.size() >= suffix.size() &&
            body.compare(body.size() - suffix.size(), suffix.size(), suffix) == 0) {
            veto = true;
            body = body.substr(0, body.size() - suffix.size());
        }
        std::vector<Rat> weights;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            const auto comma = body.find(',', pos);
            const auto piece = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
            weights.push_back(parse_rational(piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (static_cast<int>(weights.size()) != M + 1)
            throw std::invalid_argument("mechanism spec: expected " + std::to_string(M + 1) +
                                        " weights, got " + std::to_string(weights.size()));
        return fixed_distribution(std::move(weights), veto);
    }
    throw std::invalid_argument("unknown mechanism spec '" + spec + "'");
}

}  // namespace bitrade
