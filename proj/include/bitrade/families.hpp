#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitrade/core.hpp"
#include "bitrade/rational.hpp"
#include "bitrade/submodular.hpp"

namespace bitrade {

enum class ChainFamily { general, submodular };
enum class ProfileRole { chain_node, buyer_scaled, seller_scaled };

inline std::string to_string(ChainFamily f) {
    return f == ChainFamily::general ? "general" : "submodular";
}
inline std::string to_string(ProfileRole r) {
    switch (r) {
        case ProfileRole::chain_node: return "chain-node";
        case ProfileRole::buyer_scaled: return "buyer-scaled";
        case ProfileRole::seller_scaled: return "seller-scaled";
    }
    throw std::logic_error("unreachable");
}

/// Strictly increasing seller vector s_i = eps^(M-i); s_M = 1.
inline std::vector<Rat> s_eps_vector(int M, const Rat& eps) {
    if (M < 1) throw std::invalid_argument("s_eps_vector: M must be >= 1");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("s_eps_vector: eps must lie in (0,1)");
    std::vector<Rat> s(static_cast<std::size_t>(M));
    for (int i = 1; i <= M; ++i) s[static_cast<std::size_t>(i - 1)] = rat_pow(eps, M - i);
    return s;
}

/// Seller vector s_i = i (submodular: constant increments).
inline std::vector<Rat> s_star_vector(int M) {
    if (M < 1) throw std::invalid_argument("s_star_vector: M must be >= 1");
    std::vector<Rat> s(static_cast<std::size_t>(M));
    for (int i = 1; i <= M; ++i) s[static_cast<std::size_t>(i - 1)] = i;
    return s;
}

/// Magnitude of the steep negative tail at chain level k (levels M-1 and M
/// carry no tail): 1/eps^M at the topmost tail level k = M-2, steepening by
/// 1/eps^2 per level below. Each level's tail must dominate the one above it
/// by 1/eps^2: the ratio constraint at a deviation profile then caps the mass
/// its truth profile can leak through tail options at O(eps^2) per step.
inline Rat chain_tail_magnitude(int M, int level, const Rat& eps) {
    if (level < 0 || level > M - 2)
        throw std::invalid_argument("chain_tail_magnitude: level must lie in [0, M-2]");
    const long exponent = 3L * M - 4 - 2L * level;
    return rat_pow(Rat(1) / eps, exponent);
}

/// A finite set of valuation profiles plus the directed misreport edges an
/// impossibility argument rests on. Every buyer edge keeps the seller vector
/// fixed and vice versa.
struct ChainProfile {
    Instance instance;
    ProfileRole role;
    int level;  // chain level of the node this profile belongs to
};

struct DeviationEdge {
    std::size_t truth;
    std::size_t report;
};

struct DeviationChain {
    ChainFamily family = ChainFamily::general;
    int M = 0;
    Rat eps;
    Rat L;
    std::vector<ChainProfile> profiles;
    std::vector<DeviationEdge> buyer_edges;
    std::vector<DeviationEdge> seller_edges;

    /// Chain nodes are stored first, ordered level M down to 0.
    std::size_t node_id(int level) const { return static_cast<std::size_t>(M - level); }
};

/// Structural checks shared by the builders and the JSON loader.
inline void validate_chain(const DeviationChain& chain) {
    if (chain.M < 1) throw std::invalid_argument("chain: M must be >= 1");
    if (chain.eps <= 0 || chain.eps >= 1) throw std::invalid_argument("chain: eps must lie in (0,1)");
    if (chain.L < 1) throw std::invalid_argument("chain: L must be >= 1");
    if (chain.profiles.empty()) throw std::invalid_argument("chain: no profiles");
    for (const auto& p : chain.profiles)
        if (p.instance.options() != chain.M)
            throw std::invalid_argument("chain: profile has wrong option count");
    const auto check_edges = [&](const std::vector<DeviationEdge>& edges, bool buyer) {
        for (const auto& e : edges) {
            if (e.truth >= chain.profiles.size() || e.report >= chain.profiles.size())
                throw std::invalid_argument("chain: edge endpoint out of range");
            const auto& t = chain.profiles[e.truth].instance;
            const auto& w = chain.profiles[e.report].instance;
            if (buyer && t.seller != w.seller)
                throw std::invalid_argument("chain: buyer edge must keep the seller vector fixed");
            if (!buyer && t.buyer != w.buyer)
                throw std::invalid_argument("chain: seller edge must keep the buyer vector fixed");
        }
    };
    check_edges(chain.buyer_edges, true);
    check_edges(chain.seller_edges, false);
}

namespace detail {

/// General-family node vector at a given level: ones up to `level`, a zero at
/// level+1, then a constant steep tail.
inline std::vector<Rat> general_node_vector(int M, int level, const Rat& eps) {
    std::vector<Rat> c(static_cast<std::size_t>(M), Rat(0));
    for (int i = 1; i <= level; ++i) c[static_cast<std::size_t>(i - 1)] = 1;
    if (level + 2 <= M) {
        const Rat tail = -chain_tail_magnitude(M, level, eps);
        for (int i = level + 2; i <= M; ++i) c[static_cast<std::size_t>(i - 1)] = tail;
    }
    return c;
}

inline std::vector<Rat> scaled(const std::vector<Rat>& v, const Rat& factor) {
    std::vector<Rat> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * factor;
    return out;
}

inline void check_chain_params(int M, const Rat& eps, const Rat& L, const char* who) {
    if (M < 1) throw std::invalid_argument(std::string(who) + ": M must be >= 1");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument(std::string(who) + ": eps must lie in (0,1)");
    if (L < Rat(1) / eps) throw std::invalid_argument(std::string(who) + ": L must be >= 1/eps");
}

}  // namespace detail

/// Deviation chain for the general-valuation bound. Nodes pair the level
/// vectors with s^eps; each node gets a scaled-seller scaffold whose
/// multiplier normalizes the pivotal seller entry (the node's zero slot) to
/// exactly L, so a single parameter controls the scaling slack at every
/// level. The buyer scaffold sits at level 1, where the induction bottoms
/// out against the buyer's own bound.
inline DeviationChain general_chain(int M, const Rat& eps, const Rat& L) {
    detail::check_chain_params(M, eps, L, "general_chain");
    DeviationChain chain{ChainFamily::general, M, eps, L, {}, {}, {}};
    const std::vector<Rat> s = s_eps_vector(M, eps);

    for (int level = M; level >= 0; --level)
        chain.profiles.push_back({Instance(detail::general_node_vector(M, level, eps), s),
                                  ProfileRole::chain_node, level});
    for (int level = M; level >= 1; --level)
        chain.buyer_edges.push_back({chain.node_id(level), chain.node_id(level - 1)});

    for (int level = M; level >= 0; --level) {
        const int pivot = std::min(level + 1, M);  // option whose seller value anchors the bound
        const Rat multiplier = L / s[static_cast<std::size_t>(pivot - 1)];
        chain.profiles.push_back({Instance(chain.profiles[chain.node_id(level)].instance.buyer,
                                           detail::scaled(s, multiplier)),
                                  ProfileRole::seller_scaled, level});
        chain.seller_edges.push_back({chain.node_id(level), chain.profiles.size() - 1});
    }

    chain.profiles.push_back(
        {Instance(detail::scaled(chain.profiles[chain.node_id(1)].instance.buyer, L), s),
         ProfileRole::buyer_scaled, 1});
    chain.buyer_edges.push_back({chain.node_id(1), chain.profiles.size() - 1});

    validate_chain(chain);
    return chain;
}

/// One induction step of the submodular bound: flatten the positive prefix by
/// subtracting (i/d)*b_d (entry d lands exactly on zero), then replace
/// everything past d by a steep tail with constant increments. The constant
/// increment keeps the output submodular; its magnitude follows the level
/// schedule of chain_tail_magnitude.
inline std::vector<Rat> lemma3_transform(const std::vector<Rat>& b, int d, const Rat& eps) {
    const int M = static_cast<int>(b.size());
    if (d < 1 || d > M) throw std::invalid_argument("lemma3_transform: d out of range");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("lemma3_transform: eps must lie in (0,1)");
    if (!is_submodular(b)) throw std::invalid_argument("lemma3_transform: input not submodular");
    if (b[static_cast<std::size_t>(d - 1)] <= 0)
        throw std::invalid_argument("lemma3_transform: b_d must be positive");
    for (int i = 1; i < d; ++i)
        if (b[static_cast<std::size_t>(i - 1)] < b[static_cast<std::size_t>(i)])
            throw std::invalid_argument("lemma3_transform: positive prefix must be nonincreasing");
    for (int i = d + 1; i <= M; ++i)
        if (b[static_cast<std::size_t>(i - 1)] > 0)
            throw std::invalid_argument("lemma3_transform: entries past d must be nonpositive");

    const Rat& bd = b[static_cast<std::size_t>(d - 1)];
    std::vector<Rat> out(static_cast<std::size_t>(M));
    for (int i = 1; i <= d; ++i)
        out[static_cast<std::size_t>(i - 1)] = b[static_cast<std::size_t>(i - 1)] - Rat(i, d) * bd;
    if (d + 1 <= M) {
        const Rat step = chain_tail_magnitude(M, d - 1, eps);
        for (int i = d + 1; i <= M; ++i)
            out[static_cast<std::size_t>(i - 1)] = -Rat(i - d) * step;
    }
    if (!is_submodular(out)) throw std::logic_error("lemma3_transform: output lost submodularity");
    return out;
}

/// Deviation chain for the submodular bound: starts from the all-ones vector
/// paired with s*, iterates lemma3_transform down to level 0, and attaches a
/// scaled-seller scaffold (uniform multiplier L; every pivotal s* entry is
/// already >= 1) at each node.
inline DeviationChain submodular_chain(int M, const Rat& eps, const Rat& L) {
    detail::check_chain_params(M, eps, L, "submodular_chain");
    DeviationChain chain{ChainFamily::submodular, M, eps, L, {}, {}, {}};
    const std::vector<Rat> s = s_star_vector(M);

    std::vector<std::vector<Rat>> levels(static_cast<std::size_t>(M) + 1);
    levels[static_cast<std::size_t>(M)] = std::vector<Rat>(static_cast<std::size_t>(M), Rat(1));
    for (int d = M; d >= 1; --d)
        levels[static_cast<std::size_t>(d - 1)] = lemma3_transform(levels[static_cast<std::size_t>(d)], d, eps);

    for (int level = M; level >= 0; --level)
        chain.profiles.push_back({Instance(levels[static_cast<std::size_t>(level)], s),
                                  ProfileRole::chain_node, level});
    for (int level = M; level >= 1; --level)
        chain.buyer_edges.push_back({chain.node_id(level), chain.node_id(level - 1)});

    for (int level = M; level >= 0; --level) {
        chain.profiles.push_back({Instance(chain.profiles[chain.node_id(level)].instance.buyer,
                                           detail::scaled(s, L)),
                                  ProfileRole::seller_scaled, level});
        chain.seller_edges.push_back({chain.node_id(level), chain.profiles.size() - 1});
    }

    validate_chain(chain);
    return chain;
}

}  // namespace bitrade
