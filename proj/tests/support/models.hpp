#pragma once

#include "oforge/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oforge::testsupport {

// Reads and parses a shipped model file from the models/ directory.
CoverModel load_model(const std::string& name);

inline CoverModel shi_model() { return load_model("SHI.model"); }
inline CoverModel two_ring_model() { return load_model("TWO-RING.model"); }

// Parameterized family of two-ring ladders: a north and a south rotation
// annulus joined by a chain of generated curves g1..g_chain, with pieces
// P_N, P_0..P_chain, P_S. Optional ingredients: a piece cycle of period
// 1..3 carrying step curves, a strictly preperiodic piece with a tail
// curve, and a degree-one self-curve forcing an obstruction.
struct LadderSpec {
    int chain = 2;  // 1..4
    // deg(f) on each chain curve (size = chain; default all 1).
    std::vector<std::int64_t> chain_degrees;
    // Coupling component degrees: pullback(g_{k+1}) gets a class-g_k
    // component of this degree in piece P_k (size = chain-1; default 4).
    std::vector<std::int64_t> couplings;
    // Piece cycle P_1 -> ... -> P_period -> P_1 (period 1 uses P_1, or P_0
    // when chain == 1). Requires chain >= period + 1 for period >= 2.
    int cycle_period = 1;
    // Step k holds the component degrees of the step-k curve inside the
    // pullback of the step-(k+1 mod period) curve. Empty = no step curves.
    std::vector<std::vector<std::int64_t>> step_degrees;
    // Adds a strictly preperiodic piece P_{period+1} mapping onto the last
    // cycle piece, carrying a tail curve w that appears as a degree-1
    // preimage component of the last step curve. Requires step curves and
    // chain >= period + 2.
    bool tail = false;
    // Adds a fixed self-curve of degree 1 in P_0 (an obstruction).
    bool obstructed = false;
};

CoverModel ring_ladder(const LadderSpec& spec);

// The ids of the step curves (u1..u_period), tail curve ("w") and
// obstruction curve ("s") used by ring_ladder.
std::vector<std::string> ladder_sigma_curves(const LadderSpec& spec);

// Gamma plus all sigma/tail/obstruction curves: the canonical stable
// multicurve exercised by the reduction tests.
std::vector<std::string> ladder_full_multicurve(const LadderSpec& spec);

}  // namespace oforge::testsupport
