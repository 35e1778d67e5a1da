#include "oforge/model.hpp"
#include "oforge/multicurve.hpp"
#include "oforge/spectral.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace oforge {

namespace {

void add(ValidationReport& rep, std::string name, bool passed,
         std::string location = "", std::string detail = "") {
    rep.checks.push_back(Check{std::move(name), passed, std::move(location),
                               std::move(detail)});
}

// Pieces on cycles of the piece map. Missing records leave a piece off-cycle.
std::set<std::string> periodic_pieces(const CoverModel& m) {
    std::set<std::string> periodic;
    for (const auto& p : m.pieces) {
        // Iterating #pieces steps lands on a cycle if one is reachable.
        std::string cur = p.id;
        bool broken = false;
        for (std::size_t i = 0; i < m.pieces.size(); ++i) {
            const auto* r = m.map_of(cur);
            if (!r) { broken = true; break; }
            cur = r->image;
        }
        if (broken) continue;
        // p is periodic iff the landing point's orbit returns to p.
        std::string probe = cur;
        for (std::size_t i = 0; i < m.pieces.size(); ++i) {
            if (probe == p.id) { periodic.insert(p.id); break; }
            const auto* r = m.map_of(probe);
            if (!r) break;
            probe = r->image;
        }
    }
    return periodic;
}

std::int64_t d0_count(const CoverModel& m, const Piece& p) {
    const auto cores = m.gamma0();
    std::int64_t n = 0;
    for (const auto& b : p.boundary)
        if (cores.count(b)) ++n;
    return n;
}

}  // namespace

ValidationReport validate_model(const CoverModel& m) {
    ValidationReport rep;
    const auto cores = m.gamma0();

    add(rep, "rotation-annulus-present", !m.annuli.empty(), "model",
        m.annuli.empty() ? "Herman model requires >=1 rotation annulus cycle"
                         : "");

    add(rep, "critical-budget",
        m.rotation_disk_cycles + 2 * std::int64_t(m.annuli.size()) <=
            2 * m.degree - 2,
        "model", "rotation_disk_cycles + 2*#annuli <= 2*degree - 2");

    // Degree-sum per curve: the preimage components of each curve account
    // for the full mapping degree.
    for (const auto& c : m.curves) {
        const auto* comps = m.pullback_of(c.id);
        std::int64_t total = 0;
        if (comps)
            for (const auto& pc : *comps) total += pc.degree;
        add(rep, "degree-sum", comps && total == m.degree, "curves." + c.id,
            comps ? "components sum to " + std::to_string(total) +
                        ", expected " + std::to_string(m.degree)
                  : "no pullback entry");
    }

    for (const auto& p : m.pieces) {
        const std::int64_t weight = p.interior_marked_points +
                                    std::int64_t(p.boundary.size()) +
                                    d0_count(m, p);
        add(rep, "piece-marking", weight >= 3, "pieces." + p.id,
            "marked weight " + std::to_string(weight) + " must be >= 3");
    }

    // Piece map totality (uniqueness is enforced at parse).
    for (const auto& p : m.pieces)
        add(rep, "piece-map-total", m.map_of(p.id) != nullptr, "pieces." + p.id,
            m.map_of(p.id) ? "" : "no piece_map record");

    // Annulus-cycle coherence: consecutive cores are coinciding degree-1
    // boundary components of each other's pullbacks.
    for (const auto& a : m.annuli) {
        bool ok = true;
        std::string why;
        for (std::size_t k = 0; k < a.core_curves.size(); ++k) {
            const std::string& cur = a.core_curves[k];
            const std::string& next = a.core_curves[(k + 1) % a.core_curves.size()];
            const auto* comps = m.pullback_of(next);
            bool found = false;
            if (comps)
                for (const auto& pc : *comps)
                    if (pc.target == TargetKind::Curve &&
                        pc.target_curve == cur && pc.at_boundary &&
                        pc.coincides == cur && pc.degree == 1)
                        found = true;
            if (!found) {
                ok = false;
                why = "'" + cur + "' is not a coinciding degree-1 component of '" +
                      next + "'";
                break;
            }
        }
        add(rep, "annulus-coherence", ok, "annuli." + a.id, why);
    }

    // Every boundary curve separates two distinct pieces.
    std::set<std::string> boundary_ids;
    for (const auto& p : m.pieces)
        for (const auto& b : p.boundary) boundary_ids.insert(b);
    for (const auto& id : boundary_ids) {
        const auto adj = m.adjacent_pieces(id);
        add(rep, "two-sided-boundary", adj.size() == 2, "curves." + id,
            "adjacent to " + std::to_string(adj.size()) + " pieces, expected 2");
    }

    // Interior boundary curves must declare one of their adjacent pieces.
    for (const auto& c : m.curves) {
        if (c.kind != CurveKind::Interior || !boundary_ids.count(c.id)) continue;
        const auto adj = m.adjacent_pieces(c.id);
        const bool ok = std::find(adj.begin(), adj.end(), c.piece) != adj.end();
        add(rep, "declared-piece-adjacent", ok, "curves." + c.id,
            ok ? "" : "declared piece '" + c.piece + "' is not adjacent");
    }

    // Forward map must be single-valued: boundary curves are located by a
    // unique "@boundary" component, other curves may appear as components
    // of at most one curve.
    for (const auto& c : m.curves) {
        std::set<std::string> parents;
        std::size_t boundary_marks = 0;
        for (const auto& [id, comps] : m.pullback)
            for (const auto& pc : comps)
                if (pc.target == TargetKind::Curve && pc.target_curve == c.id) {
                    parents.insert(id);
                    if (pc.at_boundary) ++boundary_marks;
                }
        if (boundary_ids.count(c.id)) {
            add(rep, "forward-map-boundary", boundary_marks == 1,
                "curves." + c.id,
                std::to_string(boundary_marks) +
                    " '@boundary' components, expected exactly 1");
        } else {
            add(rep, "forward-map-single-valued", parents.size() <= 1,
                "curves." + c.id,
                parents.size() <= 1
                    ? ""
                    : "appears as a component of " +
                          std::to_string(parents.size()) + " distinct curves");
        }
    }

    // Lemma-style piece dynamics checks: pieces carrying core boundary are
    // periodic, and the core-boundary count is preserved along the map.
    const auto periodic = periodic_pieces(m);
    for (const auto& p : m.pieces) {
        if (d0_count(m, p) > 0)
            add(rep, "core-boundary-periodic", periodic.count(p.id) > 0,
                "pieces." + p.id,
                "piece carries core boundary but is not periodic");
        const auto* r = m.map_of(p.id);
        if (r) {
            const Piece* img = m.piece(r->image);
            add(rep, "core-boundary-preserved",
                img && d0_count(m, p) == d0_count(m, *img), "pieces." + p.id,
                "core-boundary count must match the image piece");
        }
    }

    // Parallel-track degree bookkeeping: for each piece S with image T,
    // every curve of T's sphere has components inside S summing to the
    // parallel degree of S.
    for (const auto& r : m.piece_map) {
        const Piece* target = m.piece(r.image);
        if (!target) continue;
        std::vector<std::string> sphere = target->boundary;
        for (const auto& id : m.strictly_interior(r.image)) sphere.push_back(id);
        const Piece* source = m.piece(r.source);
        for (const auto& x : sphere) {
            const auto* comps = m.pullback_of(x);
            std::int64_t on_track = 0;
            if (comps)
                for (const auto& pc : *comps) {
                    if (pc.at_boundary) {
                        if (pc.target == TargetKind::Curve && source &&
                            std::find(source->boundary.begin(),
                                      source->boundary.end(),
                                      pc.target_curve) != source->boundary.end())
                            on_track += pc.degree;
                    } else if (pc.piece == r.source) {
                        on_track += pc.degree;
                    }
                }
            add(rep, "parallel-degree", on_track == r.parallel_degree,
                "pieces." + r.source + "/" + x,
                "on-track degree " + std::to_string(on_track) + ", expected " +
                    std::to_string(r.parallel_degree));
        }
    }

    // The piece boundaries are exactly the core curves plus the generated
    // canonical multicurve.
    try {
        const Multicurve gamma = generate_gamma(m);
        std::set<std::string> expected(cores);
        expected.insert(gamma.curves.begin(), gamma.curves.end());
        add(rep, "boundary-closure", boundary_ids == expected, "pieces",
            boundary_ids == expected
                ? ""
                : "piece boundaries differ from cores + generated multicurve");
    } catch (const ModelError& e) {
        add(rep, "boundary-closure", false, "pieces", e.what());
    }

    // Rationality hint: a model claiming to be realized by a rational map
    // admits no stable multicurve with eigenvalue above 1.
    if (m.claims_rational) {
        try {
            bool ok = true;
            std::string why;
            for (const auto& entry : enumerate_stable(m)) {
                if (entry.lambda > 1.0 + 1e-6) {
                    ok = false;
                    why = "stable multicurve with lambda > 1 found";
                    break;
                }
            }
            add(rep, "rationality-hint", ok, "model", why);
        } catch (const ModelError&) {
            add(rep, "rationality-hint", true, "model",
                "skipped: universe exceeds enumeration cap");
        }
    }

    return rep;
}

}  // namespace oforge
