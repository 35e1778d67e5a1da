#pragma once

#include "oforge/model.hpp"
#include "oforge/multicurve.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace oforge {

// A doubled boundary-curve label: one of the two sides of a curve. The "+"
// side is the adjacent piece listed first in the pieces array.
struct SideLabel {
    std::string curve;
    bool plus = true;

    auto operator<=>(const SideLabel&) const = default;
    std::string str() const { return curve + (plus ? ":+" : ":-"); }
};

// a*t + b with rational coefficients.
struct AffineForm {
    Rational a;
    Rational b;

    Rational eval(const Rational& t) const { return a * t + b; }
    AffineForm operator+(const AffineForm& o) const { return {a + o.a, b + o.b}; }
    AffineForm operator-(const AffineForm& o) const { return {a - o.a, b - o.b}; }
    AffineForm operator/(const Rational& d) const { return {a / d, b / d}; }
    bool operator==(const AffineForm&) const = default;
    std::string str() const;
};

struct RhoAssignment {
    // (curve in Gamma, side) -> weight; the two sides of each curve sum to 1.
    std::map<SideLabel, Rational> rho;
    // Verified strict inequalities, one pair per curve (see solve_rho).
    std::vector<std::string> verified;
};

// Side-splits the contraction vector v across the two pieces adjacent to
// each Gamma-curve. First-stratum curves use the slack construction
// delta = (v - Wv)/4; deeper strata use the forward-image quotient. All
// strict inequalities are re-verified exactly; violations throw ModelError.
RhoAssignment solve_rho(const CoverModel& m, const Multicurve& gamma,
                        const std::map<std::string, Rational>& v);

// Convenience: contraction_vector of the transition matrix, keyed by id.
std::map<std::string, Rational> contraction_vector_map(const CoverModel& m,
                                                       const Multicurve& gamma);

struct SigmaFunction {
    std::map<SideLabel, AffineForm> forms;
    const AffineForm& at(const SideLabel& l) const;
};

// Affine-in-t weights on the doubled curves of Gamma0 and Gamma: core
// labels carry the constant per-cycle sigma_modulus; labels whose side
// piece is periodic carry t*rho*v; the rest chase forward through the
// quotient sigma(f(curve))/deg.
SigmaFunction sigma(const CoverModel& m, const Multicurve& gamma,
                    const RhoAssignment& rho,
                    const std::map<std::string, Rational>& v);

struct Inequality {
    std::string name;
    AffineForm lhs;
    AffineForm rhs;
    bool strict = false;

    bool holds_at(const Rational& t) const;
    Rational margin_at(const Rational& t) const;  // rhs - lhs
};

// Every affine inequality of the certification pipeline: the per-label
// comparison against t*rho*v, the per-curve side sums, the side-component
// budget for each first-kind label, and the Grotzsch budget with the
// model's gap constants.
std::vector<Inequality> assemble_inequalities(
    const CoverModel& m, const Multicurve& gamma, const RhoAssignment& rho,
    const std::map<std::string, Rational>& v, const SigmaFunction& sig);

struct ThresholdCertificate {
    Rational t_star;
    std::string binding;  // name of the inequality attaining the bound
    std::vector<Inequality> inequalities;
    bool verified = false;  // all inequalities hold at t_star + 1
};

ThresholdCertificate find_t_threshold(const CoverModel& m,
                                      const Multicurve& gamma,
                                      const RhoAssignment& rho,
                                      const std::map<std::string, Rational>& v);

struct GrotzschLine {
    std::string name;
    Rational lhs;
    Rational rhs;
    bool ok = false;
};

struct GrotzschReport {
    Rational t;
    std::vector<GrotzschLine> lines;
    bool all_ok() const;
    std::string to_string() const;
};

// Evaluates the Grotzsch budget inequalities at a concrete t.
GrotzschReport certify_grotzsch(const CoverModel& m, const Multicurve& gamma,
                                const RhoAssignment& rho,
                                const std::map<std::string, Rational>& v,
                                const SigmaFunction& sig, const Rational& t);

}  // namespace oforge
