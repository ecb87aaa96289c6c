#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitrade/core.hpp"
#include "bitrade/rational.hpp"

namespace bitrade {

/// Multi-unit single-good market before reduction: buyer bundle values
/// beta_1..beta_M, seller bundle values sigma_0..sigma_M (sigma_0 = 0), and
/// an exogenous price p per unit.
struct MultiUnitScenario {
    std::vector<Rat> beta;
    std::vector<Rat> sigma;  // length M+1, sigma[0] == 0
    Rat price;

    MultiUnitScenario() = default;
    MultiUnitScenario(std::vector<Rat> b, std::vector<Rat> s, Rat p)
        : beta(std::move(b)), sigma(std::move(s)), price(std::move(p)) {
        if (beta.empty() || sigma.size() != beta.size() + 1)
            throw std::invalid_argument("multiunit scenario: sigma must have length M+1");
        if (sigma[0] != 0)
            throw std::invalid_argument("multiunit scenario: sigma_0 must be 0");
    }

    int units() const { return static_cast<int>(beta.size()); }
};

/// Unit-demand market over M distinct goods. The seller's set function enters
/// only through sigma(all goods) and the M removal values sigma(all \ {i}).
struct UnitDemandScenario {
    std::vector<Rat> beta;         // buyer's per-item values
    std::vector<Rat> prices;       // fixed per-item prices
    Rat sigma_full;                // seller's value for the full set
    std::vector<Rat> sigma_minus;  // seller's value with item i removed

    UnitDemandScenario() = default;
    UnitDemandScenario(std::vector<Rat> b, std::vector<Rat> p, Rat full, std::vector<Rat> minus)
        : beta(std::move(b)), prices(std::move(p)), sigma_full(std::move(full)),
          sigma_minus(std::move(minus)) {
        if (beta.empty() || prices.size() != beta.size() || sigma_minus.size() != beta.size())
            throw std::invalid_argument("unitdemand scenario: vectors must share length M >= 1");
    }

    int goods() const { return static_cast<int>(beta.size()); }
};

/// Option i = trade i units at price p*i. Seller utility is normalized so
/// that keeping the full endowment is worth zero.
inline Instance reduce_multiunit(const MultiUnitScenario& sc) {
    const int M = sc.units();
    std::vector<Rat> b(static_cast<std::size_t>(M)), s(static_cast<std::size_t>(M));
    for (int i = 1; i <= M; ++i) {
        b[static_cast<std::size_t>(i - 1)] = sc.beta[static_cast<std::size_t>(i - 1)] - sc.price * i;
        s[static_cast<std::size_t>(i - 1)] =
            sc.price * i + sc.sigma[static_cast<std::size_t>(M - i)] - sc.sigma[static_cast<std::size_t>(M)];
    }
    return Instance(std::move(b), std::move(s));
}

/// Option i = buyer takes item i at price p_i.
inline Instance reduce_unitdemand(const UnitDemandScenario& sc) {
    const int M = sc.goods();
    std::vector<Rat> b(static_cast<std::size_t>(M)), s(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        b[static_cast<std::size_t>(i)] = sc.beta[static_cast<std::size_t>(i)] - sc.prices[static_cast<std::size_t>(i)];
        s[static_cast<std::size_t>(i)] =
            sc.prices[static_cast<std::size_t>(i)] + sc.sigma_minus[static_cast<std::size_t>(i)] - sc.sigma_full;
    }
    return Instance(std::move(b), std::move(s));
}

/// Independent oracle for the best individually-rational gain-from-trade,
/// computed directly in market terms: a trade of i units at price p*i is IR
/// iff beta_i >= p*i and p*i + sigma_{M-i} >= sigma_M; its welfare change is
/// (beta_i + sigma_{M-i}) - sigma_M. Trading nothing is always available.
inline Rat gft_oracle_multiunit(const MultiUnitScenario& sc) {
    const int M = sc.units();
    const Rat& endowment = sc.sigma[static_cast<std::size_t>(M)];
    Rat best(0);
    for (int i = 1; i <= M; ++i) {
        const Rat payment = sc.price * i;
        const Rat& buyer_value = sc.beta[static_cast<std::size_t>(i - 1)];
        const Rat& seller_keeps = sc.sigma[static_cast<std::size_t>(M - i)];
        const bool buyer_ok = buyer_value >= payment;
        const bool seller_ok = payment + seller_keeps >= endowment;
        if (!buyer_ok || !seller_ok) continue;
        Rat welfare_change = buyer_value + seller_keeps - endowment;
        if (welfare_change > best) best = std::move(welfare_change);
    }
    return best;
}

/// Special-case mechanism for publicly additive multi-unit valuations
/// (beta_i = i*beta_1, sigma_i = i*sigma_1): trade the full bundle iff
/// beta_1 >= p >= sigma_1, else nothing. In reduced coordinates the rule
/// reads only option 1: b_1 >= 0 and s_1 >= 0.
inline Mechanism additive_multiunit_mechanism(int M, const Rat& price) {
    if (M < 1) throw std::invalid_argument("additive_multiunit_mechanism: M must be >= 1");
    (void)price;  // the reduced coordinates already absorb the price
    return Mechanism{"additive-full-bundle", [M](const Instance& reported) {
                         if (reported.options() != M)
                             throw std::invalid_argument("additive_multiunit_mechanism: wrong report length");
                         const bool trade = reported.buyer[0] >= 0 && reported.seller[0] >= 0;
                         return OutcomeDistribution::point(trade ? M : 0, M);
                     }};
}

/// Per-item rule for markets where both sides are additive over items:
/// item i trades iff beta_i >= p_i >= sigma_i.
inline std::vector<bool> per_item_additive_trades(const std::vector<Rat>& beta,
                                                  const std::vector<Rat>& sigma_items,
                                                  const std::vector<Rat>& prices) {
    if (beta.size() != sigma_items.size() || beta.size() != prices.size() || beta.empty())
        throw std::invalid_argument("per_item_additive_trades: vectors must share length M >= 1");
    std::vector<bool> trades(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i)
        trades[i] = beta[i] >= prices[i] && prices[i] >= sigma_items[i];
    return trades;
}

/// Gain-from-trade realized by the per-item rule.
inline Rat per_item_additive_gft(const std::vector<Rat>& beta, const std::vector<Rat>& sigma_items,
                                 const std::vector<Rat>& prices) {
    const auto trades = per_item_additive_trades(beta, sigma_items, prices);
    Rat total(0);
    for (std::size_t i = 0; i < beta.size(); ++i)
        if (trades[i]) total += beta[i] - sigma_items[i];
    return total;
}

/// Independent oracle for the additive per-item market: each item is its own
/// single-unit market, so the best IR gain is the sum of the single-unit
/// oracles.
inline Rat gft_oracle_per_item_additive(const std::vector<Rat>& beta,
                                        const std::vector<Rat>& sigma_items,
                                        const std::vector<Rat>& prices) {
    if (beta.size() != sigma_items.size() || beta.size() != prices.size() || beta.empty())
        throw std::invalid_argument("gft_oracle_per_item_additive: vectors must share length M >= 1");
    Rat total(0);
    for (std::size_t i = 0; i < beta.size(); ++i) {
        MultiUnitScenario single({beta[i]}, {Rat(0), sigma_items[i]}, prices[i]);
        total += gft_oracle_multiunit(single);
    }
    return total;
}

}  // namespace bitrade
