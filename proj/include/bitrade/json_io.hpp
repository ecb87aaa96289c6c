#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bitrade/audit.hpp"
#include "bitrade/core.hpp"
#include "bitrade/families.hpp"
#include "bitrade/lp.hpp"
#include "bitrade/rational.hpp"
#include "bitrade/reductions.hpp"

namespace bitrade {

/// Key order is preserved so identical inputs give byte-identical reports.
using Json = nlohmann::ordered_json;

inline Json rat_to_json(const Rat& v) { return format_rational(v); }

/// Rationals arrive as "p/q" strings or plain integers; anything else
/// (floats in particular) is rejected to keep the pipeline exact.
inline Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument("expected rational as integer or \"p/q\" string, got " + j.dump());
}

inline Json rats_to_json(const std::vector<Rat>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(rat_to_json(v));
    return arr;
}

inline std::vector<Rat> rats_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected array of rationals");
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(rat_from_json(item));
    return out;
}

// ---- instances & distributions ----

inline Json to_json(const Instance& inst) {
    return Json{{"M", inst.options()}, {"buyer", rats_to_json(inst.buyer)},
                {"seller", rats_to_json(inst.seller)}};
}

inline Instance instance_from_json(const Json& j) {
    Instance inst(rats_from_json(j.at("buyer")), rats_from_json(j.at("seller")));
    if (j.contains("M") && j.at("M").get<int>() != inst.options())
        throw std::invalid_argument("instance: M field does not match vector length");
    return inst;
}

inline Json to_json(const OutcomeDistribution& d) { return Json{{"probs", rats_to_json(d.probs)}}; }

inline OutcomeDistribution distribution_from_json(const Json& j) {
    return OutcomeDistribution(rats_from_json(j.at("probs")));
}

inline Json to_json(const GainReport& g) {
    return Json{{"buyer_gain", rat_to_json(g.buyer_gain)},
                {"seller_gain", rat_to_json(g.seller_gain)},
                {"total_gain", rat_to_json(g.total_gain)},
                {"opt", rat_to_json(g.opt)},
                {"ratio", g.ratio ? Json(rat_to_json(*g.ratio)) : Json(nullptr)}};
}

// ---- scenarios ----

inline Json to_json(const MultiUnitScenario& sc) {
    return Json{{"M", sc.units()}, {"beta", rats_to_json(sc.beta)},
                {"sigma", rats_to_json(sc.sigma)}, {"p", rat_to_json(sc.price)}};
}

inline MultiUnitScenario multiunit_from_json(const Json& j) {
    return MultiUnitScenario(rats_from_json(j.at("beta")), rats_from_json(j.at("sigma")),
                             rat_from_json(j.at("p")));
}

inline Json to_json(const UnitDemandScenario& sc) {
    return Json{{"M", sc.goods()}, {"beta", rats_to_json(sc.beta)},
                {"prices", rats_to_json(sc.prices)}, {"sigma_full", rat_to_json(sc.sigma_full)},
                {"sigma_minus", rats_to_json(sc.sigma_minus)}};
}

inline UnitDemandScenario unitdemand_from_json(const Json& j) {
    return UnitDemandScenario(rats_from_json(j.at("beta")), rats_from_json(j.at("prices")),
                              rat_from_json(j.at("sigma_full")), rats_from_json(j.at("sigma_minus")));
}

// ---- audit verdicts ----

inline Json to_json(const DsicWitness& w) {
    return Json{{"side", to_string(w.side)},
                {"true_values", rats_to_json(w.side == AuditSide::buyer ? w.truth.buyer : w.truth.seller)},
                {"counterpart_report",
                 rats_to_json(w.side == AuditSide::buyer ? w.truth.seller : w.truth.buyer)},
                {"deviation", rats_to_json(w.deviation)},
                {"truthful_utility", rat_to_json(w.truthful_utility)},
                {"deviant_utility", rat_to_json(w.deviant_utility)}};
}

inline Json to_json(const AuditVerdict& v) {
    Json j{{"dsic_on_grid", v.dsic_on_grid},
           {"certified_scope", "finite report grid only"},
           {"checks", v.checks}};
    j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
    return j;
}

// ---- deviation chains ----

inline Json to_json(const DeviationChain& chain) {
    Json profiles = Json::array();
    for (const auto& p : chain.profiles)
        profiles.push_back(Json{{"role", to_string(p.role)},
                                {"level", p.level},
                                {"buyer", rats_to_json(p.instance.buyer)},
                                {"seller", rats_to_json(p.instance.seller)}});
    const auto edges = [](const std::vector<DeviationEdge>& es) {
        Json arr = Json::array();
        for (const auto& e : es) arr.push_back(Json{{"truth", e.truth}, {"report", e.report}});
        return arr;
    };
    return Json{{"family", to_string(chain.family)},
                {"M", chain.M},
                {"eps", rat_to_json(chain.eps)},
                {"L", rat_to_json(chain.L)},
                {"profiles", profiles},
                {"buyer_edges", edges(chain.buyer_edges)},
                {"seller_edges", edges(chain.seller_edges)}};
}

inline DeviationChain chain_from_json(const Json& j) {
    DeviationChain chain;
    const std::string family = j.at("family").get<std::string>();
    if (family == "general") chain.family = ChainFamily::general;
    else if (family == "submodular") chain.family = ChainFamily::submodular;
    else throw std::invalid_argument("chain: unknown family '" + family + "'");
    chain.M = j.at("M").get<int>();
    chain.eps = rat_from_json(j.at("eps"));
    chain.L = rat_from_json(j.at("L"));
    for (const auto& p : j.at("profiles")) {
        const std::string role = p.at("role").get<std::string>();
        ProfileRole r;
        if (role == "chain-node") r = ProfileRole::chain_node;
        else if (role == "buyer-scaled") r = ProfileRole::buyer_scaled;
        else if (role == "seller-scaled") r = ProfileRole::seller_scaled;
        else throw std::invalid_argument("chain: unknown profile role '" + role + "'");
        chain.profiles.push_back({Instance(rats_from_json(p.at("buyer")), rats_from_json(p.at("seller"))),
                                  r, p.at("level").get<int>()});
    }
    const auto edges = [](const Json& arr) {
        std::vector<DeviationEdge> out;
        for (const auto& e : arr)
            out.push_back({e.at("truth").get<std::size_t>(), e.at("report").get<std::size_t>()});
        return out;
    };
    chain.buyer_edges = edges(j.at("buyer_edges"));
    chain.seller_edges = edges(j.at("seller_edges"));
    validate_chain(chain);
    return chain;
}

// ---- bound reports ----

inline Json to_json(const BoundReport& r, bool include_assignment = true) {
    Json j{{"family", to_string(r.family)},
           {"M", r.M},
           {"eps", rat_to_json(r.eps)},
           {"L", rat_to_json(r.L)},
           {"mode", to_string(r.mode)},
           {"alpha_star", rat_to_json(r.alpha_star)},
           {"theoretical_bound", rat_to_json(r.theoretical_bound)},
           {"slack_budget", rat_to_json(r.slack_budget)},
           {"pass", r.pass}};
    if (include_assignment) {
        Json arr = Json::array();
        for (const auto& d : r.assignment) arr.push_back(to_json(d));
        j["assignment"] = arr;
    }
    return j;
}

/// CSV row matching the header "M,family,eps,L,alpha_star,bound,slack,pass".
inline std::string to_csv_row(const BoundReport& r) {
    return std::to_string(r.M) + "," + to_string(r.family) + "," + format_rational(r.eps) + "," +
           format_rational(r.L) + "," + format_rational(r.alpha_star) + "," +
           format_rational(r.theoretical_bound) + "," + format_rational(r.slack_budget) + "," +
           (r.pass ? "pass" : "fail");
}

}  // namespace bitrade
