#pragma once

#include "oforge/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace oforge {

enum class BoundaryClass { D0, D1, D2 };

struct PieceCycle {
    std::string representative;          // lexicographically smallest member
    std::int64_t period = 1;
    std::vector<std::string> members;    // cycle order, starting at representative

    bool operator==(const PieceCycle&) const = default;
};

struct PieceDynamics {
    std::map<std::string, std::string> map;          // f* on pieces
    std::vector<PieceCycle> cycles;                  // sorted by representative
    std::map<std::string, std::int64_t> tail_length; // steps to reach a cycle
    std::map<std::string, std::map<std::string, BoundaryClass>> boundary_class;
};

// Computes f*, its cycle decomposition, and the boundary classification.
// Throws ModelError when piece_map is not total or the piece dynamics
// violate the core-boundary preservation laws.
PieceDynamics piece_dynamics(const CoverModel& m);

enum class RenormKind { Siegel, Thurston, Homeomorphism };

std::string to_string(RenormKind k);

struct RotationDiskRecord {
    std::string source_cycle;   // annulus cycle id
    std::int64_t period = 1;    // annulus period / cycle period
    Rational rotation_number;
};

struct RenormalizedModel {
    PieceCycle base_cycle;
    RenormKind kind = RenormKind::Thurston;
    std::int64_t degree = 1;        // product of parallel degrees on the cycle
    std::int64_t marked_points = 0; // interior points + non-core boundary disks
    std::vector<RotationDiskRecord> rotation_disks;
    std::int64_t inherited_disk_count = 0;  // rotation disks inside cycle pieces
    std::vector<std::string> curve_universe;  // strictly interior, representative
    // Composed pullback of the return map for every universe curve.
    std::vector<std::pair<std::string, std::vector<PreimageComponent>>> pullback;
    std::vector<std::string> dropped_log;  // off-track components discarded
};

RenormalizedModel renormalize(const CoverModel& m, const PieceCycle& cycle);

struct SignatureEntry {
    std::string piece;
    // Orbifold weights >= 2, sorted; 0 encodes infinity. Empty + !known
    // means no portrait data was supplied.
    std::vector<std::int64_t> weights;
    bool known = false;
};

struct DecompositionReport {
    PieceDynamics dynamics;
    std::vector<RenormalizedModel> renorms;  // one per cycle, cycle order
    std::int64_t siegel_count = 0;
    bool siegel_bounds_ok = false;
    bool gamma_contracting = false;
    // When gamma is contracting no return map is a homeomorphism, so the
    // exceptional set is empty.
    bool no_homeomorphism_kinds = false;
    std::vector<SignatureEntry> signatures;  // Thurston pieces only
    bool no_2222_signature = true;
    std::string to_string() const;
};

DecompositionReport classify(const CoverModel& m, double tol = 1e-9);

// Graphviz digraph of f* with cycle members highlighted.
std::string dot_export(const CoverModel& m);

}  // namespace oforge
