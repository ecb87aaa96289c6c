#include "catch_amalgamated.hpp"

#include "bitrade/core.hpp"
#include "bitrade/mechanisms.hpp"
#include "bitrade/sampling.hpp"
#include "bitrade/submodular.hpp"

#include <cmath>
#include <vector>

using namespace bitrade;

namespace {

Rat r(long n, long d = 1) { return Rat(n, d); }

std::vector<Rat> rv(std::initializer_list<long> xs) {
    std::vector<Rat> out;
    for (long x : xs) out.push_back(Rat(x));
    return out;
}

}  // namespace

TEST_CASE("harmonic numbers are exact and bracketed by ln M", "[mechanisms]") {
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(3) == r(11, 6));
    CHECK(harmonic(4) == r(25, 12));
    CHECK_THROWS_AS(harmonic(0), std::invalid_argument);

    for (int M = 1; M <= 50; ++M) {
        const double h = static_cast<double>(harmonic(M));
        CHECK(h >= std::log(M) + 1.0 / M - 1e-12);
        CHECK(h <= std::log(M) + 1.0 + 1e-12);
    }
}

TEST_CASE("uniform_random spreads 1/M and vetoes per report", "[mechanisms]") {
    CHECK_THROWS_AS(uniform_random(0), std::invalid_argument);

    const auto vetoed = uniform_random(3)(Instance(rv({1, -1, 0}), rv({1, 1, -5})));
    CHECK(vetoed.probs == std::vector<Rat>{r(2, 3), r(1, 3), r(0), r(0)});

    const auto single = uniform_random(1)(Instance(rv({2}), rv({0})));
    CHECK(single.probs == std::vector<Rat>{r(0), r(1)});

    const auto open = uniform_random(2)(Instance(rv({1, 1}), rv({0, 0})));
    CHECK(open.probs == std::vector<Rat>{r(0), r(1, 2), r(1, 2)});
}

TEST_CASE("decreasing_random weights options by 1/(i*H_M)", "[mechanisms]") {
    const auto all_open = decreasing_random(3)(Instance(rv({1, 1, 1}), rv({0, 0, 0})));
    CHECK(all_open.probs == std::vector<Rat>{r(0), r(6, 11), r(3, 11), r(2, 11)});

    const Instance report(rv({-1, 1, -1}), rv({1, 1, 1}));  // feasible {0, 2}
    const auto vetoed = decreasing_random(3)(report);
    CHECK(vetoed.probs == std::vector<Rat>{r(8, 11), r(0), r(3, 11), r(0)});

    const Instance tiny(rv({5}), rv({5}));
    CHECK(decreasing_random(1)(tiny) == uniform_random(1)(tiny));
}

TEST_CASE("fixed_distribution generalizes both named rules", "[mechanisms]") {
    Sampler rng(21);
    const Mechanism as_ur = fixed_distribution({r(0), r(1, 2), r(1, 2)}, true);
    const Mechanism as_dr = fixed_distribution({r(0), r(6, 11), r(3, 11), r(2, 11)}, true);
    for (int trial = 0; trial < 300; ++trial) {
        const Instance i2 = random_instance(rng, 2);
        CHECK(as_ur(i2) == uniform_random(2)(i2));
        const Instance i3 = random_instance(rng, 3);
        CHECK(as_dr(i3) == decreasing_random(3)(i3));
    }

    const Mechanism no_trade = fixed_distribution({r(1), r(0), r(0)}, true);
    const auto g = expected_gains(no_trade(Instance(rv({1, 1}), rv({0, 0}))),
                                  Instance(rv({1, 1}), rv({0, 0})));
    REQUIRE(g.ratio.has_value());
    CHECK(*g.ratio == 0);

    CHECK_THROWS_AS(fixed_distribution({r(1, 2), r(1, 4)}, true), std::invalid_argument);
    CHECK_THROWS_AS(fixed_distribution({r(2), r(-1)}, true), std::invalid_argument);
}

TEST_CASE("reported_welfare_argmax plays the reported-best feasible option", "[mechanisms]") {
    const Mechanism foil = reported_welfare_argmax(2);
    CHECK(foil(Instance(rv({1, 2}), rv({2, 1}))) == OutcomeDistribution::point(1, 2));
    CHECK(foil(Instance(rv({0, 2}), rv({2, 1}))) == OutcomeDistribution::point(2, 2));
    CHECK(foil(Instance(rv({-1, -2}), rv({1, 1}))) == OutcomeDistribution::point(0, 2));
}

TEST_CASE("uniform rule guarantee: total gain at least OPT/M", "[mechanisms]") {
    Sampler rng(22);
    for (int M = 1; M <= 4; ++M) {
        const Mechanism ur = uniform_random(M);
        for (int trial = 0; trial < 3000; ++trial) {
            const Instance inst = random_instance(rng, M);
            const auto g = expected_gains(ur(inst), inst);
            CHECK(g.total_gain * M >= g.opt);
        }
    }
}

TEST_CASE("decreasing rule guarantee on submodular pairs: at least OPT/H_M", "[mechanisms]") {
    Sampler rng(23);
    for (int M = 1; M <= 4; ++M) {
        const Mechanism dr = decreasing_random(M);
        const Rat h = harmonic(M);
        for (int trial = 0; trial < 3000; ++trial) {
            const Instance inst = random_submodular_instance(rng, M);
            REQUIRE(is_submodular(inst.buyer));
            REQUIRE(is_submodular(inst.seller));
            const auto g = expected_gains(dr(inst), inst);
            CHECK(g.total_gain * h >= g.opt);
        }
    }
}

TEST_CASE("tightness witnesses: single-option gain and linear bundle", "[mechanisms]") {
    for (int M = 1; M <= 6; ++M) {
        // all positive gain on one option
        std::vector<Rat> b(static_cast<std::size_t>(M), r(0));
        b[0] = 1;
        const Instance spike(b, std::vector<Rat>(static_cast<std::size_t>(M), r(0)));
        const auto ur = expected_gains(uniform_random(M)(spike), spike);
        REQUIRE(ur.ratio.has_value());
        CHECK(*ur.ratio == r(1, M));

        std::vector<Rat> ramp(static_cast<std::size_t>(M));
        for (int i = 1; i <= M; ++i) ramp[static_cast<std::size_t>(i - 1)] = i;
        const Instance linear(ramp, std::vector<Rat>(static_cast<std::size_t>(M), r(0)));
        const auto dr = expected_gains(decreasing_random(M)(linear), linear);
        REQUIRE(dr.ratio.has_value());
        CHECK(*dr.ratio == Rat(1) / harmonic(M));
    }
}

TEST_CASE("mechanism spec strings parse to the right rules", "[mechanisms]") {
    Sampler rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const Instance inst = random_instance(rng, 2);
        CHECK(parse_mechanism_spec("ur", 2)(inst) == uniform_random(2)(inst));
        CHECK(parse_mechanism_spec("dr", 2)(inst) == decreasing_random(2)(inst));
        CHECK(parse_mechanism_spec("dist:0,1/2,1/2:veto", 2)(inst) == uniform_random(2)(inst));
        CHECK(parse_mechanism_spec("welfare-argmax", 2)(inst) == reported_welfare_argmax(2)(inst));
    }
    const auto raw = parse_mechanism_spec("dist:0,1,0", 2);
    CHECK(raw(Instance(rv({-1, 0}), rv({0, 0}))) == OutcomeDistribution::point(1, 2));

    CHECK_THROWS_AS(parse_mechanism_spec("nope", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism_spec("dist:1,0", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism_spec("dist:1/2,1/4,1/8", 2), std::invalid_argument);
}

TEST_CASE("mechanisms reject reports of the wrong width", "[mechanisms]") {
    CHECK_THROWS_AS(uniform_random(3)(Instance(rv({1}), rv({1}))), std::invalid_argument);
    CHECK_THROWS_AS(reported_welfare_argmax(2)(Instance(rv({1}), rv({1}))), std::invalid_argument);
}
