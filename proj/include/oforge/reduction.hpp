#pragma once

#include "oforge/decompose.hpp"
#include "oforge/matrix.hpp"
#include "oforge/model.hpp"
#include "oforge/multicurve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oforge {

struct SplitMulticurve {
    Multicurve c_gamma;  // members of the generated multicurve
    Multicurve c_s;      // members in strictly preperiodic pieces
    // Cycle representative -> per-step member sets, indexed by position in
    // the cycle. The union over steps is that cycle's part of the split.
    std::map<std::string, std::vector<Multicurve>> sigma;
};

// Partitions a stable multicurve by dynamical location. Throws ModelError
// when the multicurve is unstable or a member sits on a piece boundary
// without belonging to the generated multicurve.
SplitMulticurve split_multicurve(const CoverModel& m, const Multicurve& c);

struct CycleCheck {
    std::string representative;
    std::int64_t period = 1;
    bool block_structure_ok = false;      // step blocks sit one off-diagonal
    bool power_block_diagonal_ok = false; // W^p is block diagonal, cyclic products
    bool composed_matches_blocks = false; // renormalized pullback == block product
    double lambda_sigma = 0.0;            // sp(B0 B1 ... B_{p-1})
    double contribution = 0.0;            // lambda_sigma^{1/p}
};

struct ReductionReport {
    SplitMulticurve split;
    bool block_triangular_ok = false;  // below-diagonal blocks exactly zero
    bool cs_nilpotent = false;
    std::vector<CycleCheck> cycles;
    double lambda_c = 0.0;
    double lambda_c_gamma = 0.0;
    double max_formula = 0.0;
    bool identity_ok = false;  // |lambda_c - max_formula| <= tol

    bool all_ok() const;
    std::string to_string() const;
};

ReductionReport verify_reduction_identity(const CoverModel& m,
                                          const Multicurve& c,
                                          double tol = 1e-9);

struct CombinationReport {
    bool lhs_obstructed = false;
    std::optional<Multicurve> lhs_witness;
    bool rhs_obstructed = false;
    std::string rhs_witness;  // "gamma" or "<cycle>: id,id,..."
    bool agree = false;

    std::string to_string() const;
};

// Compares the direct obstruction check (stable-multicurve enumeration)
// with the decomposed check (contraction of the generated multicurve plus
// obstruction checks on every renormalized return map).
CombinationReport check_combination(const CoverModel& m, std::size_t cap = 16,
                                    double tol = 1e-9);

}  // namespace oforge
