#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "models.hpp"
#include "oforge/reduction.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace oforge;
using namespace oforge::testsupport;

TEST_CASE("splitting the two-ring multicurves") {
    const CoverModel m = two_ring_model();

    SUBCASE("the generated multicurve is all chain") {
        const auto split = split_multicurve(m, Multicurve::of({"g1", "g2"}));
        CHECK(split.c_gamma.curves == std::vector<std::string>{"g1", "g2"});
        CHECK(split.c_s.empty());
        CHECK(split.sigma.empty());
    }
    SUBCASE("interior curves land in their piece cycle") {
        const auto split =
            split_multicurve(m, Multicurve::of({"g1", "g2", "u"}));
        CHECK(split.c_gamma.curves == std::vector<std::string>{"g1", "g2"});
        CHECK(split.c_s.empty());
        REQUIRE(split.sigma.count("P_1"));
        REQUIRE(split.sigma.at("P_1").size() == 1);
        CHECK(split.sigma.at("P_1")[0].curves == std::vector<std::string>{"u"});
    }
    SUBCASE("unstable and core inputs are rejected") {
        CHECK_THROWS_AS(split_multicurve(m, Multicurve::of({"g1"})),
                        ModelError);
        CHECK_THROWS_AS(split_multicurve(m, Multicurve::of({"a_n"})),
                        ModelError);
    }
}

TEST_CASE("reduction identity on the two-ring model") {
    const CoverModel m = two_ring_model();

    SUBCASE("empty multicurve") {
        const auto rep = verify_reduction_identity(m, Multicurve::of({}), 1e-9);
        CHECK(rep.all_ok());
        CHECK(rep.lambda_c == 0.0);
        CHECK(rep.max_formula == 0.0);
    }
    SUBCASE("chain only") {
        const auto rep =
            verify_reduction_identity(m, Multicurve::of({"g1", "g2"}), 1e-9);
        CHECK(rep.all_ok());
        CHECK(rep.lambda_c == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rep.lambda_c_gamma == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rep.cycles.empty());
    }
    SUBCASE("full multicurve") {
        const auto rep = verify_reduction_identity(
            m, Multicurve::of({"g1", "g2", "u"}), 1e-9);
        CHECK(rep.all_ok());
        CHECK(rep.block_triangular_ok);
        CHECK(rep.cs_nilpotent);
        REQUIRE(rep.cycles.size() == 1);
        CHECK(rep.cycles[0].representative == "P_1");
        CHECK(rep.cycles[0].period == 1);
        CHECK(rep.cycles[0].block_structure_ok);
        CHECK(rep.cycles[0].power_block_diagonal_ok);
        CHECK(rep.cycles[0].composed_matches_blocks);
        CHECK(rep.cycles[0].lambda_sigma == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rep.cycles[0].contribution == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rep.lambda_c == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rep.max_formula == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(rep.identity_ok);
    }
}

TEST_CASE("period-two cycle contributes the root of its block product") {
    LadderSpec spec;
    spec.chain = 3;
    spec.cycle_period = 2;
    spec.step_degrees = {{1, 1}, {8}};
    const CoverModel m = ring_ladder(spec);

    const auto rep = verify_reduction_identity(
        m, Multicurve::of(ladder_full_multicurve(spec)), 1e-9);
    CHECK(rep.all_ok());
    REQUIRE(rep.cycles.size() == 1);
    const auto& cyc = rep.cycles[0];
    CHECK(cyc.representative == "P_1");
    CHECK(cyc.period == 2);
    CHECK(cyc.composed_matches_blocks);
    // B0 = [2], B1 = [1/8]: the composed radius is 1/4, its square root 1/2.
    CHECK(cyc.lambda_sigma == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(cyc.contribution == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.max_formula ==
          doctest::Approx(std::max(rep.lambda_c_gamma, 0.5)).epsilon(1e-8));
}

TEST_CASE("tail curves form a nilpotent block above the cycles") {
    LadderSpec spec;
    spec.chain = 4;
    spec.cycle_period = 2;
    spec.step_degrees = {{1, 1}, {8}};
    spec.tail = true;
    const CoverModel m = ring_ladder(spec);

    const auto split =
        split_multicurve(m, Multicurve::of(ladder_full_multicurve(spec)));
    CHECK(split.c_s.curves == std::vector<std::string>{"w"});

    const auto rep = verify_reduction_identity(
        m, Multicurve::of(ladder_full_multicurve(spec)), 1e-9);
    CHECK(rep.all_ok());
    CHECK(rep.block_triangular_ok);
    CHECK(rep.cs_nilpotent);
}

TEST_CASE("combination check agrees on the shipped models") {
    for (const auto& m : {shi_model(), two_ring_model()}) {
        const auto rep = check_combination(m);
        CHECK(rep.agree);
        CHECK_FALSE(rep.lhs_obstructed);
        CHECK_FALSE(rep.rhs_obstructed);
        CHECK_FALSE(rep.lhs_witness.has_value());
    }
}

TEST_CASE("an invariant self-curve obstructs both checks") {
    LadderSpec spec;
    spec.obstructed = true;
    const CoverModel m = ring_ladder(spec);
    const auto rep = check_combination(m);
    CHECK(rep.agree);
    CHECK(rep.lhs_obstructed);
    REQUIRE(rep.lhs_witness.has_value());
    CHECK(rep.lhs_witness->contains("s"));
    CHECK(rep.rhs_obstructed);
    CHECK(rep.rhs_witness == "P_0: s");
}

TEST_CASE("a non-contracting chain obstructs via the generated multicurve") {
    LadderSpec spec;
    spec.couplings = {1};  // unit two-cycle product in the chain
    const CoverModel m = ring_ladder(spec);
    const auto rep = check_combination(m);
    CHECK(rep.agree);
    CHECK(rep.lhs_obstructed);
    REQUIRE(rep.lhs_witness.has_value());
    CHECK(rep.lhs_witness->contains("g1"));
    CHECK(rep.lhs_witness->contains("g2"));
    CHECK(rep.rhs_obstructed);
    CHECK(rep.rhs_witness == "gamma");
}
