#include "catch_amalgamated.hpp"

#include "bitrade/audit.hpp"
#include "bitrade/core.hpp"
#include "bitrade/mechanisms.hpp"

#include <vector>

using namespace bitrade;

namespace {

Rat r(long n, long d = 1) { return Rat(n, d); }

std::vector<Rat> rv(std::initializer_list<long> xs) {
    std::vector<Rat> out;
    for (long x : xs) out.push_back(Rat(x));
    return out;
}

// Replays a witness through expected_gains; the auditor's numbers must match
// exactly.
void check_replay(const Mechanism& mech, const DsicWitness& w) {
    const auto honest = expected_gains(mech(w.truth), w.truth);
    const Instance deviated = w.side == AuditSide::buyer ? Instance(w.deviation, w.truth.seller)
                                                         : Instance(w.truth.buyer, w.deviation);
    const auto gained = expected_gains(mech(deviated), w.truth);
    const Rat honest_u = w.side == AuditSide::buyer ? honest.buyer_gain : honest.seller_gain;
    const Rat gained_u = w.side == AuditSide::buyer ? gained.buyer_gain : gained.seller_gain;
    CHECK(honest_u == w.truthful_utility);
    CHECK(gained_u == w.deviant_utility);
    CHECK(gained_u > honest_u);
}

}  // namespace

TEST_CASE("grid families enumerate lexicographically", "[audit]") {
    const auto family = grid_family({r(1), r(0)}, 2);  // input order must not matter
    REQUIRE(family.size() == 4);
    CHECK(family[0] == rv({0, 0}));
    CHECK(family[1] == rv({0, 1}));
    CHECK(family[2] == rv({1, 0}));
    CHECK(family[3] == rv({1, 1}));

    const auto sub = submodular_grid_family({r(0), r(1)}, 2);
    for (const auto& v : sub) CHECK(is_submodular(v));
    CHECK(sub.size() == 3);  // (0,1) violates decreasing increments

    const auto additive = additive_grid_family({r(2), r(1)}, 3);
    REQUIRE(additive.size() == 2);
    CHECK(additive[0] == rv({1, 2, 3}));
    CHECK(additive[1] == rv({2, 4, 6}));
}

TEST_CASE("uniform rule passes the full grid audit", "[audit]") {
    const auto verdict = audit_dsic(uniform_random(2), {r(-1), r(0), r(1)}, 2);
    CHECK(verdict.dsic_on_grid);
    CHECK(!verdict.witness.has_value());
}

TEST_CASE("uniform and decreasing rules certify on richer grids", "[audit]") {
    const std::vector<Rat> grid{r(-1), r(0), r(1, 2), r(1)};
    for (int M : {2, 3}) {
        CHECK(audit_dsic(uniform_random(M), grid, M).dsic_on_grid);
        CHECK(audit_dsic(decreasing_random(M), grid, M).dsic_on_grid);
    }
    // restricted to submodular reports as well
    CHECK(audit_dsic(decreasing_random(3), grid, 3, true).dsic_on_grid);

    // M = 4 on a coarser grid
    const std::vector<Rat> coarse{r(-1), r(0), r(1)};
    CHECK(audit_dsic(uniform_random(4), coarse, 4).dsic_on_grid);
    CHECK(audit_dsic(decreasing_random(4), coarse, 4).dsic_on_grid);
}

TEST_CASE("report-ignoring rules are trivially truthful", "[audit]") {
    const Mechanism blind = fixed_distribution({r(1, 4), r(1, 4), r(1, 2)}, false);
    const auto verdict = audit_dsic(blind, {r(-1), r(0), r(2)}, 2);
    CHECK(verdict.dsic_on_grid);
}

TEST_CASE("the welfare-argmax foil fails with a replayable witness", "[audit]") {
    const Mechanism foil = reported_welfare_argmax(2);
    const auto verdict = audit_dsic(foil, {r(0), r(1, 2), r(1), r(2)}, 2);
    REQUIRE_FALSE(verdict.dsic_on_grid);
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->deviant_utility > verdict.witness->truthful_utility);
    check_replay(foil, *verdict.witness);

    // the hand-traced deviation is improving as well: true b=(1,2) against
    // s=(2,1), misreporting (0,2) moves the pick from option 1 to option 2
    const Instance truth(rv({1, 2}), rv({2, 1}));
    const auto honest = expected_gains(foil(truth), truth);
    const auto gamed = expected_gains(foil(Instance(rv({0, 2}), truth.seller)), truth);
    CHECK(honest.buyer_gain == 1);
    CHECK(gamed.buyer_gain == 2);
}

TEST_CASE("first witness is deterministic across runs", "[audit]") {
    const Mechanism foil = reported_welfare_argmax(2);
    const auto a = audit_dsic(foil, {r(0), r(1, 2), r(1), r(2)}, 2);
    const auto b = audit_dsic(foil, {r(2), r(1), r(1, 2), r(0)}, 2);  // shuffled grid
    REQUIRE(a.witness.has_value());
    REQUIRE(b.witness.has_value());
    CHECK(a.witness->truth == b.witness->truth);
    CHECK(a.witness->deviation == b.witness->deviation);
    CHECK(a.checks == b.checks);
}

TEST_CASE("enumeration over the cap refuses instead of truncating", "[audit]") {
    CHECK_THROWS_AS(audit_dsic(uniform_random(3), {r(-1), r(0), r(1), r(2), r(3)}, 3, false, 1000),
                    EnumerationCapError);
    try {
        audit_dsic(uniform_random(2), {r(0), r(1)}, 2, false, 10);
        FAIL("expected EnumerationCapError");
    } catch (const EnumerationCapError& e) {
        CHECK(e.cap == 10);
        CHECK(e.required == 4ull * 4ull * 8ull);
    }
}

TEST_CASE("per-side ratio bound check", "[audit]") {
    const Rat big_L(1000000);
    // equality case: left side is exactly alpha * best feasible value
    const Instance spike(rv({1, 0, 0}), rv({1, 1, 1}));
    CHECK(audit_lemma1(uniform_random(3), spike, r(1, 3), AuditSide::buyer, big_L));
    const auto g = expected_gains(uniform_random(3)(spike), spike);
    CHECK(g.buyer_gain == r(1, 3));

    const Instance flat(rv({1, 1, 1}), rv({1, 1, 1}));
    CHECK(audit_lemma1(uniform_random(3), flat, r(1, 3), AuditSide::buyer, big_L));

    const Mechanism never = fixed_distribution({r(1), r(0), r(0)}, true);
    CHECK_FALSE(audit_lemma1(never, Instance(rv({1, 1}), rv({1, 1})), r(1, 10),
                             AuditSide::buyer, big_L));

    CHECK_THROWS_AS(audit_lemma1(uniform_random(3), spike, r(2), AuditSide::buyer, big_L),
                    std::invalid_argument);
}

TEST_CASE("ratio bound holds at guarantee level across a grid", "[audit]") {
    const Rat big_L(1000000);
    const int M = 2;
    const auto family = grid_family({r(-1), r(0), r(1)}, M);
    for (const auto& b : family)
        for (const auto& s : family) {
            const Instance inst(b, s);
            CHECK(audit_lemma1(uniform_random(M), inst, r(1, M), AuditSide::buyer, big_L));
            CHECK(audit_lemma1(uniform_random(M), inst, r(1, M), AuditSide::seller, big_L));
        }
    // decreasing rule at 1/H_M over submodular reports only
    const auto sub = submodular_grid_family({r(-1), r(0), r(1)}, M);
    for (const auto& b : sub)
        for (const auto& s : sub) {
            const Instance inst(b, s);
            CHECK(audit_lemma1(decreasing_random(M), inst, Rat(1) / harmonic(M),
                               AuditSide::buyer, big_L));
            CHECK(audit_lemma1(decreasing_random(M), inst, Rat(1) / harmonic(M),
                               AuditSide::seller, big_L));
        }
}
