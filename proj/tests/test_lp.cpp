#include "catch_amalgamated.hpp"

#include "bitrade/families.hpp"
#include "bitrade/lp.hpp"
#include "bitrade/mechanisms.hpp"

#include <cstdlib>
#include <vector>

using namespace bitrade;

namespace {

Rat r(long n, long d = 1) { return Rat(n, d); }

const Rat kEps = r(1, 1000);
const Rat kL = r(1000000);

}  // namespace

TEST_CASE("build_lp sizes: one distribution block per profile plus alpha", "[lp]") {
    const auto chain = general_chain(2, kEps, kL);
    const auto lp = build_lp(chain);
    CHECK(lp.problem.num_vars == chain.profiles.size() * 3 + 1);
    // one simplex row and one ratio row per profile, one row per edge
    CHECK(lp.problem.rows.size() ==
          2 * chain.profiles.size() + chain.buyer_edges.size() + chain.seller_edges.size());
}

TEST_CASE("zero-edge chains let every profile take its own optimum", "[lp]") {
    auto chain = general_chain(2, kEps, kL);
    chain.buyer_edges.clear();
    chain.seller_edges.clear();
    const auto report = solve_lp(build_lp(chain));
    CHECK(report.alpha_star == 1);
}

TEST_CASE("a single profile with no edges attains alpha = 1", "[lp]") {
    DeviationChain chain{ChainFamily::general, 1, kEps, kL, {}, {}, {}};
    chain.profiles.push_back({Instance({r(1)}, {r(1)}), ProfileRole::chain_node, 1});
    const auto report = solve_lp(build_lp(chain));
    CHECK(report.alpha_star == 1);
    REQUIRE(report.assignment.size() == 1);
    CHECK(report.assignment[0].probs == std::vector<Rat>{r(0), r(1)});
}

TEST_CASE("feasibility floor: the named rules satisfy their own chain LPs", "[lp]") {
    for (int M = 1; M <= 4; ++M) {
        const auto general = general_chain(M, kEps, kL);
        const auto lp_general = build_lp(general);
        CHECK(lp_assignment_feasible(lp_general,
                                     mechanism_assignment(uniform_random(M), general), r(1, M)));

        const auto submodular = submodular_chain(M, kEps, kL);
        const auto lp_submodular = build_lp(submodular);
        CHECK(lp_assignment_feasible(lp_submodular,
                                     mechanism_assignment(decreasing_random(M), submodular),
                                     Rat(1) / harmonic(M)));
    }
}

TEST_CASE("solved assignments are feasible at alpha_star", "[lp]") {
    for (int M : {2, 3}) {
        for (const ChainFamily family : {ChainFamily::general, ChainFamily::submodular}) {
            const auto chain = family == ChainFamily::general ? general_chain(M, kEps, kL)
                                                              : submodular_chain(M, kEps, kL);
            const auto lp = build_lp(chain);
            const auto report = solve_lp(lp);
            CHECK(lp_assignment_feasible(lp, report.assignment, report.alpha_star));
        }
    }
}

TEST_CASE("general-family certificates stay in the stated bracket", "[lp]") {
    for (int M : {2, 3, 4}) {
        const auto report = verify_upper_bound(M, kEps, kL, ChainFamily::general);
        CHECK(report.alpha_star >= r(1, M));
        CHECK(report.alpha_star <= r(1, M) + 2 * kEps + Rat(M) / kL);
        CHECK(report.pass);
    }
}

TEST_CASE("submodular-family certificates stay in the stated bracket", "[lp]") {
    for (int M : {2, 3}) {
        const auto report = verify_upper_bound(M, kEps, kL, ChainFamily::submodular);
        const Rat bound = Rat(1) / harmonic(M);
        CHECK(report.alpha_star >= bound);
        CHECK(report.alpha_star <= bound + 2 * kEps + Rat(M) / kL);
        CHECK(report.pass);
    }
}

TEST_CASE("both bounds collapse to 1 at M = 1 and the LP attains it", "[lp]") {
    for (const ChainFamily family : {ChainFamily::general, ChainFamily::submodular}) {
        const auto report = verify_upper_bound(1, kEps, kL, family);
        CHECK(report.theoretical_bound == 1);
        CHECK(report.alpha_star == 1);
        CHECK(report.pass);
    }
}

TEST_CASE("adding a deviation edge never raises alpha_star", "[lp]") {
    const auto base = general_chain(3, kEps, kL);
    const Rat with_all = solve_lp(build_lp(base)).alpha_star;

    // dropping any single edge can only relax the program
    for (std::size_t k = 0; k < base.buyer_edges.size(); ++k) {
        auto fewer = base;
        fewer.buyer_edges.erase(fewer.buyer_edges.begin() + static_cast<std::ptrdiff_t>(k));
        CHECK(solve_lp(build_lp(fewer)).alpha_star >= with_all);
    }
    for (std::size_t k = 0; k < base.seller_edges.size(); ++k) {
        auto fewer = base;
        fewer.seller_edges.erase(fewer.seller_edges.begin() + static_cast<std::ptrdiff_t>(k));
        CHECK(solve_lp(build_lp(fewer)).alpha_star >= with_all);
    }

    // adding a fresh valid edge (skip a level: truth node 3 reports node 1's
    // vector; the seller vector is shared) can only tighten it
    auto more = base;
    more.buyer_edges.push_back({more.node_id(3), more.node_id(1)});
    validate_chain(more);
    CHECK(solve_lp(build_lp(more)).alpha_star <= with_all);
}

TEST_CASE("float mode certifies its basis exactly or refuses", "[lp]") {
    // Where floating pivoting can identify the optimal basis, the certified
    // answer matches exact mode to the digit (well within the stated 1e-8).
    const std::vector<std::pair<ChainFamily, int>> representable = {
        {ChainFamily::general, 1},    {ChainFamily::general, 2},
        {ChainFamily::submodular, 1}, {ChainFamily::submodular, 2},
        {ChainFamily::submodular, 3},
    };
    for (const auto& [family, M] : representable) {
        const auto lp = build_lp(family == ChainFamily::general ? general_chain(M, kEps, kL)
                                                                : submodular_chain(M, kEps, kL));
        const auto exact = solve_lp(lp, SolveMode::exact_rational);
        const auto approx = solve_lp(lp, SolveMode::float_with_tolerance);
        CHECK(approx.alpha_star == exact.alpha_star);
    }

    // Deeper chains span more orders of magnitude than doubles resolve; the
    // float path must refuse with the pointer to exact mode, never return an
    // uncertified number.
    const auto wide = build_lp(general_chain(4, kEps, kL));
    CHECK_THROWS_WITH(solve_lp(wide, SolveMode::float_with_tolerance),
                      Catch::Matchers::ContainsSubstring("exact"));
}

TEST_CASE("build_lp rejects malformed chains", "[lp]") {
    auto chain = general_chain(2, kEps, kL);
    chain.buyer_edges.push_back({0, 99});
    CHECK_THROWS_AS(build_lp(chain), std::invalid_argument);
}
