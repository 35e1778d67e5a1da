#pragma once

#include "oforge/matrix.hpp"
#include "oforge/model.hpp"

#include <string>
#include <vector>

namespace oforge {

// A set of Interior curve-class ids, kept sorted and duplicate-free.
struct Multicurve {
    std::vector<std::string> curves;

    static Multicurve of(std::vector<std::string> ids);

    bool contains(const std::string& id) const;
    bool empty() const { return curves.empty(); }
    std::size_t size() const { return curves.size(); }

    bool operator==(const Multicurve&) const = default;
};

// Entry (i,j) = sum over preimage components of curve j with class curve i
// of 1/degree. The empty multicurve yields the 0x0 matrix.
RatMatrix transition_matrix(const CoverModel& m, const Multicurve& gamma);

// True iff every curve-class preimage of a member is a member; Null,
// Peripheral, and core-curve classes are exempt.
bool is_stable(const CoverModel& m, const Multicurve& gamma);

// Strata of the canonical multicurve: strata[n] holds the curves first
// reached at pullback depth n+1 from the core curves. Pairwise disjoint.
std::vector<std::vector<std::string>> gamma_strata(const CoverModel& m);

// Union of the strata: the canonical stable multicurve generated by the
// core-curve pullbacks.
Multicurve generate_gamma(const CoverModel& m);

struct RefinementReport {
    Multicurve refined;
    double lambda_before = 0.0;
    double lambda_after = 0.0;
    bool lambda_preserved = false;
};

// Shrinks a stable multicurve to its recurrent part; the leading
// eigenvalue is preserved (checked within 2*tol).
RefinementReport essential_refinement(const CoverModel& m, const Multicurve& c0,
                                      double tol = 1e-9);

struct StableEntry {
    Multicurve curve;
    double lambda = 0.0;
};

// All stable subsets of the Interior-curve universe with their eigenvalue
// estimates, in mask order over the sorted universe. Throws ModelError
// when the universe exceeds cap.
std::vector<StableEntry> enumerate_stable(const CoverModel& m,
                                          std::size_t cap = 16,
                                          double tol = 1e-9);

}  // namespace oforge
