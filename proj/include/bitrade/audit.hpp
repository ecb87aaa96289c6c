#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitrade/core.hpp"
#include "bitrade/rational.hpp"
#include "bitrade/submodular.hpp"

namespace bitrade {

enum class AuditSide { buyer, seller };

inline std::string to_string(AuditSide s) { return s == AuditSide::buyer ? "buyer" : "seller"; }

/// A profitable unilateral misreport found by the auditor. `truth` holds the
/// deviating side's true vector together with the counterpart's report; both
/// utilities are evaluated at the true vector, so the witness replays
/// exactly through expected_gains.
struct DsicWitness {
    Instance truth;
    AuditSide side;
    std::vector<Rat> deviation;
    Rat truthful_utility;
    Rat deviant_utility;
};

/// Outcome of a finite-grid audit. A true verdict certifies truthfulness on
/// the audited grid only.
struct AuditVerdict {
    bool dsic_on_grid = false;
    std::optional<DsicWitness> witness;
    std::uint64_t checks = 0;
};

/// Thrown instead of silently truncating when the requested enumeration
/// exceeds the configured cap.
struct EnumerationCapError : std::runtime_error {
    std::uint64_t required;
    std::uint64_t cap;
    EnumerationCapError(std::uint64_t required_, std::uint64_t cap_)
        : std::runtime_error("audit enumeration needs " + std::to_string(required_) +
                             " checks, cap is " + std::to_string(cap_)),
          required(required_), cap(cap_) {}
};

inline constexpr std::uint64_t kDefaultAuditCap = 50'000'000;

/// All vectors over the grid values, in lexicographic order (first coordinate
/// most significant). The grid is sorted and deduplicated first, so the order
/// does not depend on how the caller listed the values. The cap bounds the
/// enumeration itself; refusal happens before anything is materialized.
inline std::vector<std::vector<Rat>> grid_family(std::vector<Rat> grid, int M,
                                                 std::uint64_t cap = kDefaultAuditCap) {
    if (grid.empty() || M < 1) throw std::invalid_argument("grid_family: empty grid or M < 1");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::uint64_t count = 1;
    for (int i = 0; i < M; ++i) {
        if (count > cap / grid.size()) throw EnumerationCapError(count, cap);
        count *= grid.size();
    }
    if (count > cap) throw EnumerationCapError(count, cap);
    std::vector<std::vector<Rat>> family;
    family.reserve(count);
    std::vector<std::size_t> odo(static_cast<std::size_t>(M), 0);
    while (true) {
        std::vector<Rat> v(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) v[static_cast<std::size_t>(i)] = grid[odo[static_cast<std::size_t>(i)]];
        family.push_back(std::move(v));
        int pos = M - 1;
        while (pos >= 0 && ++odo[static_cast<std::size_t>(pos)] == grid.size()) {
            odo[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return family;
}

inline std::vector<std::vector<Rat>> submodular_grid_family(std::vector<Rat> grid, int M,
                                                            std::uint64_t cap = kDefaultAuditCap) {
    auto family = grid_family(std::move(grid), M, cap);
    std::erase_if(family, [](const std::vector<Rat>& v) { return !is_submodular(v); });
    return family;
}

/// Additive vectors (g, 2g, ..., Mg) for each grid value g.
inline std::vector<std::vector<Rat>> additive_grid_family(std::vector<Rat> grid, int M) {
    if (grid.empty() || M < 1) throw std::invalid_argument("additive_grid_family: empty grid or M < 1");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<std::vector<Rat>> family;
    family.reserve(grid.size());
    for (const auto& g : grid) {
        std::vector<Rat> v(static_cast<std::size_t>(M));
        for (int i = 1; i <= M; ++i) v[static_cast<std::size_t>(i - 1)] = g * i;
        family.push_back(std::move(v));
    }
    return family;
}

/// Exhaustive truthfulness check over explicit report families: for every
/// profile, every unilateral deviation within the same family must not beat
/// the truthful report. Enumeration is lexicographic over (profile, side,
/// deviation) with the buyer side first, so the first witness is
/// reproducible. Throws EnumerationCapError rather than truncating.
inline AuditVerdict audit_dsic_over_families(const Mechanism& mech,
                                             const std::vector<std::vector<Rat>>& buyer_family,
                                             const std::vector<std::vector<Rat>>& seller_family,
                                             std::uint64_t cap = kDefaultAuditCap) {
    if (buyer_family.empty() || seller_family.empty())
        throw std::invalid_argument("audit: empty report family");
    const std::uint64_t fb = buyer_family.size();
    const std::uint64_t fs = seller_family.size();
    const std::uint64_t required = fb * fs * (fb + fs);
    if (required > cap) throw EnumerationCapError(required, cap);

    std::vector<OutcomeDistribution> cache(static_cast<std::size_t>(fb * fs));
    std::vector<bool> cached(static_cast<std::size_t>(fb * fs), false);
    const auto dist = [&](std::size_t bi, std::size_t si) -> const OutcomeDistribution& {
        const std::size_t key = bi * fs + si;
        if (!cached[key]) {
            cache[key] = mech(Instance(buyer_family[bi], seller_family[si]));
            cached[key] = true;
        }
        return cache[key];
    };
    const auto utility = [](const OutcomeDistribution& r, const std::vector<Rat>& v) {
        Rat u(0);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (r.probs[i + 1] != 0) u += r.probs[i + 1] * v[i];
        return u;
    };

    AuditVerdict verdict;
    for (std::size_t bi = 0; bi < fb; ++bi) {
        for (std::size_t si = 0; si < fs; ++si) {
            const Rat buyer_truthful = utility(dist(bi, si), buyer_family[bi]);
            for (std::size_t dev = 0; dev < fb; ++dev) {
                ++verdict.checks;
                if (dev == bi) continue;
                Rat gained = utility(dist(dev, si), buyer_family[bi]);
                if (gained > buyer_truthful) {
                    verdict.witness = DsicWitness{Instance(buyer_family[bi], seller_family[si]),
                                                  AuditSide::buyer, buyer_family[dev],
                                                  buyer_truthful, std::move(gained)};
                    return verdict;
                }
            }
            const Rat seller_truthful = utility(dist(bi, si), seller_family[si]);
            for (std::size_t dev = 0; dev < fs; ++dev) {
                ++verdict.checks;
                if (dev == si) continue;
                Rat gained = utility(dist(bi, dev), seller_family[si]);
                if (gained > seller_truthful) {
                    verdict.witness = DsicWitness{Instance(buyer_family[bi], seller_family[si]),
                                                  AuditSide::seller, seller_family[dev],
                                                  seller_truthful, std::move(gained)};
                    return verdict;
                }
            }
        }
    }
    verdict.dsic_on_grid = true;
    return verdict;
}

/// Grid audit: both sides report vectors from grid^M, optionally restricted
/// to submodular vectors.
inline AuditVerdict audit_dsic(const Mechanism& mech, const std::vector<Rat>& grid, int M,
                               bool restrict_submodular = false,
                               std::uint64_t cap = kDefaultAuditCap) {
    const auto family = restrict_submodular ? submodular_grid_family(grid, M, cap)
                                            : grid_family(grid, M, cap);
    return audit_dsic_over_families(mech, family, family, cap);
}

/// Direct check of the per-side ratio bound at an instance: the mechanism's
/// truthful expected utility for `side` must cover alpha times the side's
/// best feasible value, less the finite-scaling slack (max feasible
/// counterpart value) / L.
inline bool audit_lemma1(const Mechanism& mech, const Instance& inst, const Rat& alpha,
                         AuditSide side, const Rat& L) {
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("audit_lemma1: alpha must lie in [0,1]");
    if (L < 1) throw std::invalid_argument("audit_lemma1: L must be >= 1");
    const auto& own = side == AuditSide::buyer ? inst.buyer : inst.seller;
    const auto& other = side == AuditSide::buyer ? inst.seller : inst.buyer;
    Rat own_best(0), other_best(0);  // option 0 contributes zero to both
    for (int i : feasible_set(inst)) {
        if (i == 0) continue;
        own_best = std::max(own_best, own[static_cast<std::size_t>(i - 1)]);
        other_best = std::max(other_best, other[static_cast<std::size_t>(i - 1)]);
    }
    const OutcomeDistribution r = mech(inst);
    Rat lhs(0);
    for (int i = 1; i <= inst.options(); ++i)
        lhs += r.probs[static_cast<std::size_t>(i)] * own[static_cast<std::size_t>(i - 1)];
    return lhs >= alpha * own_best - other_best / L;
}

/// Truthfulness of the additive full-bundle rule over scalar grids: reports
/// are the two per-unit values, utilities are M*(true - p) for the buyer and
/// M*(p - true) for the seller when the bundle trades.
struct ScalarWitness {
    AuditSide side;
    Rat truth;
    Rat counterpart_report;
    Rat deviation;
    Rat truthful_utility;
    Rat deviant_utility;
};

struct ScalarAuditVerdict {
    bool dsic_on_grid = false;
    std::optional<ScalarWitness> witness;
    std::uint64_t checks = 0;
};

inline ScalarAuditVerdict audit_additive_multiunit(int M, const Rat& price,
                                                   const std::vector<Rat>& grid) {
    if (M < 1 || grid.empty()) throw std::invalid_argument("audit_additive_multiunit: bad inputs");
    std::vector<Rat> values = grid;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const auto trades = [&](const Rat& beta1, const Rat& sigma1) {
        return beta1 >= price && price >= sigma1;
    };
    ScalarAuditVerdict verdict;
    for (const auto& beta1 : values) {
        for (const auto& sigma1 : values) {
            const Rat buyer_truthful = trades(beta1, sigma1) ? Rat(M) * (beta1 - price) : Rat(0);
            const Rat seller_truthful = trades(beta1, sigma1) ? Rat(M) * (price - sigma1) : Rat(0);
            for (const auto& dev : values) {
                ++verdict.checks;
                Rat gained = trades(dev, sigma1) ? Rat(M) * (beta1 - price) : Rat(0);
                if (gained > buyer_truthful) {
                    verdict.witness =
                        ScalarWitness{AuditSide::buyer, beta1, sigma1, dev, buyer_truthful, gained};
                    return verdict;
                }
                ++verdict.checks;
                gained = trades(beta1, dev) ? Rat(M) * (price - sigma1) : Rat(0);
                if (gained > seller_truthful) {
                    verdict.witness =
                        ScalarWitness{AuditSide::seller, sigma1, beta1, dev, seller_truthful, gained};
                    return verdict;
                }
            }
        }
    }
    verdict.dsic_on_grid = true;
    return verdict;
}

/// Per-item rule with both sides additive: utilities decompose per item, so
/// the product-space audit reduces to M independent scalar audits.
inline ScalarAuditVerdict audit_per_item_additive(const std::vector<Rat>& prices,
                                                  const std::vector<Rat>& grid) {
    if (prices.empty()) throw std::invalid_argument("audit_per_item_additive: no items");
    ScalarAuditVerdict verdict;
    for (const auto& price : prices) {
        auto item = audit_additive_multiunit(1, price, grid);
        verdict.checks += item.checks;
        if (!item.dsic_on_grid) {
            verdict.witness = std::move(item.witness);
            return verdict;
        }
    }
    verdict.dsic_on_grid = true;
    return verdict;
}

}  // namespace bitrade
