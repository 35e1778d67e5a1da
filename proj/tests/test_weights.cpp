#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "models.hpp"
#include "oforge/multicurve.hpp"
#include "oforge/weights.hpp"

#include <string>

using namespace oforge;
using namespace oforge::testsupport;

namespace {

struct Pipeline {
    CoverModel m;
    Multicurve gamma;
    std::map<std::string, Rational> v;
    RhoAssignment rho;
    SigmaFunction sig;

    explicit Pipeline(CoverModel model) : m(std::move(model)) {
        gamma = generate_gamma(m);
        v = contraction_vector_map(m, gamma);
        rho = solve_rho(m, gamma, v);
        sig = sigma(m, gamma, rho, v);
    }
};

}  // namespace

TEST_CASE("contraction vector of the two-ring chain") {
    Pipeline p(two_ring_model());
    CHECK(p.v.at("g1") == Rational(5, 3));
    CHECK(p.v.at("g2") == Rational(8, 3));
}

TEST_CASE("side weights of the two-ring chain") {
    Pipeline p(two_ring_model());
    CHECK(p.rho.rho.at({"g1", true}) == Rational(3, 14));
    CHECK(p.rho.rho.at({"g1", false}) == Rational(11, 14));
    CHECK(p.rho.rho.at({"g2", true}) == Rational(3, 14));
    CHECK(p.rho.rho.at({"g2", false}) == Rational(11, 14));
    for (const auto& id : p.gamma.curves)
        CHECK(p.rho.rho.at({id, true}) + p.rho.rho.at({id, false}) ==
              Rational(1));
    CHECK_FALSE(p.rho.verified.empty());
}

TEST_CASE("sigma forms of the two-ring chain are linear in t") {
    Pipeline p(two_ring_model());
    CHECK(p.sig.at({"g1", true}) == AffineForm{Rational(5, 14), Rational(0)});
    CHECK(p.sig.at({"g1", false}) == AffineForm{Rational(55, 42), Rational(0)});
    CHECK(p.sig.at({"g2", true}) == AffineForm{Rational(4, 7), Rational(0)});
    CHECK(p.sig.at({"g2", false}) == AffineForm{Rational(44, 21), Rational(0)});
    // Core labels carry the constant per-cycle modulus datum.
    CHECK(p.sig.at({"a_n", true}) == AffineForm{Rational(0), Rational(1, 8)});
    CHECK(p.sig.at({"a_n", false}) == AffineForm{Rational(0), Rational(1, 8)});
    CHECK(p.sig.at({"a_s", true}) == AffineForm{Rational(0), Rational(1, 8)});
    CHECK_THROWS_AS(p.sig.at({"nope", true}), ModelError);
}

TEST_CASE("threshold certificate of the two-ring model") {
    Pipeline p(two_ring_model());
    const auto cert = find_t_threshold(p.m, p.gamma, p.rho, p.v);
    CHECK(cert.t_star == Rational(119, 72));
    CHECK(cert.binding == "grotzsch:g1:-");
    CHECK(cert.verified);

    const Rational above = cert.t_star + 1;
    const Rational below = cert.t_star / 2;
    bool any_fails_below = false;
    for (const auto& ineq : cert.inequalities) {
        CHECK(ineq.holds_at(above));
        if (!ineq.holds_at(below)) any_fails_below = true;
    }
    CHECK(any_fails_below);
}

TEST_CASE("grotzsch certification at explicit parameters") {
    Pipeline p(two_ring_model());
    const auto cert = find_t_threshold(p.m, p.gamma, p.rho, p.v);

    const auto good =
        certify_grotzsch(p.m, p.gamma, p.rho, p.v, p.sig, cert.t_star + 1);
    CHECK(good.all_ok());
    REQUIRE(good.lines.size() == 1);
    CHECK(good.lines[0].name == "grotzsch:g1:-");
    // At t = 191/72: 2t/3 + 1/16 + 1 against 55t/42.
    CHECK(good.lines[0].lhs == Rational(1223, 432));
    CHECK(good.lines[0].rhs == Rational(10505, 3024));

    const auto bad =
        certify_grotzsch(p.m, p.gamma, p.rho, p.v, p.sig, cert.t_star / 2);
    CHECK_FALSE(bad.all_ok());
}

TEST_CASE("vacuous certificate for the empty chain") {
    Pipeline p(shi_model());
    CHECK(p.gamma.empty());
    CHECK(p.rho.rho.empty());
    const auto cert = find_t_threshold(p.m, p.gamma, p.rho, p.v);
    CHECK(cert.t_star == Rational(0));
    CHECK(cert.verified);
    // Only the constant core inequalities remain; all hold everywhere.
    for (const auto& ineq : cert.inequalities) {
        CHECK(ineq.holds_at(Rational(0)));
        CHECK(ineq.holds_at(Rational(100)));
    }
}

TEST_CASE("side weights stay positive on deeper ladder chains") {
    for (int chain = 1; chain <= 4; ++chain) {
        LadderSpec spec;
        spec.chain = chain;
        Pipeline p(ring_ladder(spec));
        REQUIRE(static_cast<int>(p.gamma.size()) == chain);
        for (const auto& id : p.gamma.curves) {
            const Rational plus = p.rho.rho.at({id, true});
            const Rational minus = p.rho.rho.at({id, false});
            CHECK(plus > 0);
            CHECK(minus > 0);
            CHECK(plus + minus == Rational(1));
        }
        const auto cert = find_t_threshold(p.m, p.gamma, p.rho, p.v);
        CHECK(cert.verified);
        for (const auto& ineq : cert.inequalities)
            CHECK(ineq.holds_at(cert.t_star + 1));
    }
}

TEST_CASE("affine form arithmetic") {
    const AffineForm f{Rational(2), Rational(-1)};
    const AffineForm g{Rational(1, 2), Rational(3)};
    CHECK((f + g) == AffineForm{Rational(5, 2), Rational(2)});
    CHECK((f - g) == AffineForm{Rational(3, 2), Rational(-4)});
    CHECK((f / Rational(2)) == AffineForm{Rational(1), Rational(-1, 2)});
    CHECK(f.eval(Rational(3, 2)) == Rational(2));

    Inequality ineq{"x", f, g, false};
    CHECK(ineq.margin_at(Rational(0)) == Rational(4));
    CHECK(ineq.holds_at(Rational(8, 3)));  // equality holds when non-strict
    Inequality strict{"y", f, g, true};
    CHECK_FALSE(strict.holds_at(Rational(8, 3)));
}
