#pragma once

#include "oforge/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oforge {

// Thrown on malformed model files: syntax errors (position-reported by the
// JSON layer), dangling identifiers, duplicate ids, schema violations.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CurveKind { Core, Interior };

struct CurveClass {
    std::string id;
    CurveKind kind = CurveKind::Interior;
    std::string annulus_cycle;  // Core: owning rotation-annulus cycle
    std::string piece;          // Interior: declared containing piece
    std::string label;

    bool operator==(const CurveClass&) const = default;
};

enum class TargetKind { Null, Peripheral, Curve };

// One component of f^{-1}(curve). `piece` names the piece containing the
// component; `at_boundary` marks the component that coincides with (or is
// parallel to) the curve's own boundary position, written "@boundary" in
// model files. `coincides` is set when the component literally equals a
// boundary curve (the D2/core case).
struct PreimageComponent {
    TargetKind target = TargetKind::Null;
    std::string target_curve;
    std::int64_t degree = 1;
    std::string piece;
    bool at_boundary = false;
    std::string coincides;

    bool operator==(const PreimageComponent&) const = default;
};

struct Piece {
    std::string id;
    std::vector<std::string> boundary;
    std::int64_t interior_marked_points = 0;
    std::int64_t rotation_disk_count = 0;

    bool operator==(const Piece&) const = default;
};

struct PieceMapRecord {
    std::string source;
    std::string image;
    std::int64_t parallel_degree = 1;

    bool operator==(const PieceMapRecord&) const = default;
};

struct RotationAnnulusCycle {
    std::string id;
    std::int64_t period = 1;
    Rational rotation_number;
    Rational modulus;
    // Per-cycle datum for the weight pipeline: the sigma value carried by
    // each doubled core-curve label. Defaults to modulus/4 when absent.
    Rational sigma_modulus;
    bool sigma_modulus_set = false;
    std::vector<std::string> core_curves;

    bool operator==(const RotationAnnulusCycle&) const = default;
};

// Critical-orbit datum for one marked point of a piece: a functional graph
// with local degrees, enough to compute orbifold signatures.
struct PortraitPoint {
    std::string id;
    std::string image;
    std::int64_t local_degree = 1;

    bool operator==(const PortraitPoint&) const = default;
};

struct CoverModel {
    std::int64_t degree = 2;
    bool claims_rational = false;
    bool claims_rational_set = false;
    std::int64_t rotation_disk_cycles = 0;
    std::vector<CurveClass> curves;
    std::vector<Piece> pieces;
    // Document order preserved for round-tripping.
    std::vector<std::pair<std::string, std::vector<PreimageComponent>>> pullback;
    std::vector<PieceMapRecord> piece_map;
    std::vector<RotationAnnulusCycle> annuli;
    std::vector<std::pair<std::string, std::vector<PortraitPoint>>>
        orbit_portraits;
    bool orbit_portraits_set = false;
    std::vector<std::pair<std::string, Rational>> grotzsch_constants;
    bool grotzsch_constants_set = false;

    bool operator==(const CoverModel&) const = default;

    // Lookups (linear scans; models are small).
    const CurveClass* curve(const std::string& id) const;
    const Piece* piece(const std::string& id) const;
    const RotationAnnulusCycle* annulus(const std::string& id) const;
    const PieceMapRecord* map_of(const std::string& piece_id) const;
    const std::vector<PreimageComponent>* pullback_of(
        const std::string& curve_id) const;

    bool is_core(const std::string& curve_id) const;
    std::set<std::string> gamma0() const;

    // Pieces listing the curve on their boundary, in pieces-array order.
    // The first entry is the "+" side, the second the "-" side.
    std::vector<std::string> adjacent_pieces(const std::string& curve_id) const;
    bool is_boundary_curve(const std::string& curve_id) const;

    // Interior curves declared inside the piece that bound no piece.
    std::vector<std::string> strictly_interior(const std::string& piece_id) const;

    // Forward image under f, derived from the pullback table. Boundary-type
    // curves are located by their "@boundary" component; strictly interior
    // curves by the unique curve whose pullback targets them. nullopt when
    // the image is missing or ambiguous.
    std::optional<std::string> forward_image(const std::string& curve_id) const;

    // Degree of f restricted to the curve: degree of the "@boundary"
    // component for boundary-type curves, otherwise the summed degree of
    // the components realizing forward_image.
    std::optional<std::int64_t> forward_degree(const std::string& curve_id) const;

    // Grotzsch constant for an annular-gap id, falling back to "default",
    // then to 1.
    Rational grotzsch_constant(const std::string& gap_id) const;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string location;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool all_passed() const;
    std::string to_string() const;
};

CoverModel parse_model(const std::string& text);
std::string serialize_model(const CoverModel& m);
ValidationReport validate_model(const CoverModel& m);

}  // namespace oforge
