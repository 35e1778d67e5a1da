#include "oforge/decompose.hpp"

#include "oforge/multicurve.hpp"
#include "oforge/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace oforge {

std::string to_string(RenormKind k) {
    switch (k) {
        case RenormKind::Siegel: return "Siegel";
        case RenormKind::Thurston: return "Thurston";
        case RenormKind::Homeomorphism: return "Homeomorphism";
    }
    return "?";
}

namespace {

std::int64_t d0_count(const CoverModel& m, const Piece& p) {
    const auto cores = m.gamma0();
    std::int64_t n = 0;
    for (const auto& b : p.boundary)
        if (cores.count(b)) ++n;
    return n;
}

BoundaryClass classify_boundary(const CoverModel& m, const std::string& curve) {
    if (m.is_core(curve)) return BoundaryClass::D0;
    // D2: the curve's own boundary component literally coincides with it.
    auto image = m.forward_image(curve);
    if (image) {
        const auto* comps = m.pullback_of(*image);
        if (comps)
            for (const auto& c : *comps)
                if (c.at_boundary && c.target == TargetKind::Curve &&
                    c.target_curve == curve && c.coincides == curve)
                    return BoundaryClass::D2;
    }
    return BoundaryClass::D1;
}

}  // namespace

PieceDynamics piece_dynamics(const CoverModel& m) {
    PieceDynamics dyn;
    for (const auto& p : m.pieces) {
        const auto* r = m.map_of(p.id);
        if (!r)
            throw ModelError("piece_dynamics: no piece_map record for '" +
                             p.id + "'");
        dyn.map[p.id] = r->image;
    }

    // Cycle membership: a piece is periodic iff iterating #pieces steps
    // from it can return to it.
    std::set<std::string> periodic;
    for (const auto& p : m.pieces) {
        std::string cur = p.id;
        for (std::size_t i = 0; i < m.pieces.size(); ++i) {
            cur = dyn.map.at(cur);
            if (cur == p.id) {
                periodic.insert(p.id);
                break;
            }
        }
    }
    std::set<std::string> assigned;
    for (const auto& id : periodic) {
        if (assigned.count(id)) continue;
        // Collect the cycle through id and rotate it to start at its
        // lexicographically smallest member.
        std::vector<std::string> members{id};
        for (std::string cur = dyn.map.at(id); cur != id; cur = dyn.map.at(cur))
            members.push_back(cur);
        auto smallest = std::min_element(members.begin(), members.end());
        std::rotate(members.begin(), smallest, members.end());
        for (const auto& s : members) assigned.insert(s);
        dyn.cycles.push_back(PieceCycle{members.front(),
                                        std::int64_t(members.size()),
                                        std::move(members)});
    }
    std::sort(dyn.cycles.begin(), dyn.cycles.end(),
              [](const PieceCycle& a, const PieceCycle& b) {
                  return a.representative < b.representative;
              });

    for (const auto& p : m.pieces) {
        std::int64_t steps = 0;
        std::string cur = p.id;
        while (!periodic.count(cur)) {
            cur = dyn.map.at(cur);
            ++steps;
            if (steps > std::int64_t(m.pieces.size()))
                throw ModelError("piece_dynamics: '" + p.id +
                                 "' never reaches a cycle");
        }
        dyn.tail_length[p.id] = steps;
    }

    for (const auto& p : m.pieces) {
        auto& row = dyn.boundary_class[p.id];
        for (const auto& b : p.boundary) row[b] = classify_boundary(m, b);
    }

    // Core-boundary laws, promoted to errors here.
    for (const auto& p : m.pieces) {
        if (d0_count(m, p) > 0 && !periodic.count(p.id))
            throw ModelError("piece_dynamics: '" + p.id +
                             "' has core boundary but is not periodic");
        const Piece* img = m.piece(dyn.map.at(p.id));
        if (!img || d0_count(m, p) != d0_count(m, *img))
            throw ModelError(
                "piece_dynamics: core-boundary count not preserved at '" +
                p.id + "'");
    }
    return dyn;
}

RenormalizedModel renormalize(const CoverModel& m, const PieceCycle& cycle) {
    RenormalizedModel r;
    r.base_cycle = cycle;
    const std::int64_t p = cycle.period;

    std::vector<std::int64_t> pd(p);
    for (std::int64_t k = 0; k < p; ++k) {
        const auto* rec = m.map_of(cycle.members[k]);
        if (!rec || rec->image != cycle.members[(k + 1) % p])
            throw ModelError("renormalize: cycle does not match piece_map at '" +
                             cycle.members[k] + "'");
        pd[k] = rec->parallel_degree;
    }
    r.degree = std::accumulate(pd.begin(), pd.end(), std::int64_t(1),
                               std::multiplies<>());

    const Piece* rep = m.piece(cycle.representative);
    const auto cores = m.gamma0();
    const Multicurve gamma = generate_gamma(m);

    std::int64_t d0 = 0;
    for (const auto& b : rep->boundary)
        if (cores.count(b)) ++d0;
    r.marked_points = rep->interior_marked_points +
                      (std::int64_t(rep->boundary.size()) - d0);

    for (const auto& member : cycle.members)
        r.inherited_disk_count += m.piece(member)->rotation_disk_count;

    // Rotation disks inherited from annulus cycles whose cores bound the
    // cycle pieces.
    std::set<std::string> seen_cycles;
    for (const auto& member : cycle.members)
        for (const auto& b : m.piece(member)->boundary) {
            const CurveClass* c = m.curve(b);
            if (!c || c->kind != CurveKind::Core) continue;
            if (!seen_cycles.insert(c->annulus_cycle).second) continue;
            const RotationAnnulusCycle* a = m.annulus(c->annulus_cycle);
            if (a->period % p != 0)
                throw ModelError("renormalize: annulus period " +
                                 std::to_string(a->period) +
                                 " not divisible by cycle period " +
                                 std::to_string(p));
            r.rotation_disks.push_back(
                RotationDiskRecord{a->id, a->period / p, a->rotation_number});
        }

    if (d0 > 0 || r.inherited_disk_count > 0)
        r.kind = RenormKind::Siegel;
    else if (r.degree == 1)
        r.kind = RenormKind::Homeomorphism;
    else
        r.kind = RenormKind::Thurston;

    r.curve_universe = m.strictly_interior(cycle.representative);
    std::sort(r.curve_universe.begin(), r.curve_universe.end());

    // Compose the pullback through one full cycle pass. Chains stay on the
    // parallel track; a chain hitting a boundary-system curve becomes
    // Peripheral, Null stays Null, and early-terminated chains absorb the
    // remaining parallel degrees so degree sums stay exact.
    auto is_sigma_curve = [&](const std::string& id) {
        return cores.count(id) || gamma.contains(id);
    };
    for (const auto& u : r.curve_universe) {
        struct Chain {
            std::string curve;
            std::int64_t degree;
        };
        std::vector<PreimageComponent> out;
        std::vector<Chain> frontier{{u, 1}};
        for (std::int64_t s = p - 1; s >= 0; --s) {
            const std::string& piece = cycle.members[s];
            const Piece* pc = m.piece(piece);
            std::int64_t remaining = 1;
            for (std::int64_t k = 0; k < s; ++k) remaining *= pd[k];
            std::vector<Chain> next;
            for (const auto& chain : frontier) {
                const auto* comps = m.pullback_of(chain.curve);
                if (!comps)
                    throw ModelError(
                        "renormalize: universe not closed under composition "
                        "at '" + chain.curve + "'");
                for (const auto& c : *comps) {
                    const std::int64_t d = chain.degree * c.degree;
                    if (c.at_boundary) {
                        if (std::find(pc->boundary.begin(), pc->boundary.end(),
                                      c.target_curve) != pc->boundary.end()) {
                            PreimageComponent t;
                            t.target = TargetKind::Peripheral;
                            t.degree = d * remaining;
                            t.piece = cycle.representative;
                            out.push_back(t);
                        } else {
                            r.dropped_log.push_back(
                                "pullback(" + chain.curve +
                                "): boundary component off '" + piece + "'");
                        }
                        continue;
                    }
                    if (c.piece != piece) {
                        r.dropped_log.push_back("pullback(" + chain.curve +
                                                "): component in '" + c.piece +
                                                "' off '" + piece + "'");
                        continue;
                    }
                    if (c.target == TargetKind::Null) {
                        PreimageComponent t;
                        t.target = TargetKind::Null;
                        t.degree = d * remaining;
                        t.piece = cycle.representative;
                        out.push_back(t);
                    } else if (c.target == TargetKind::Peripheral ||
                               is_sigma_curve(c.target_curve)) {
                        PreimageComponent t;
                        t.target = TargetKind::Peripheral;
                        t.degree = d * remaining;
                        t.piece = cycle.representative;
                        out.push_back(t);
                    } else {
                        next.push_back(Chain{c.target_curve, d});
                    }
                }
            }
            frontier = std::move(next);
        }
        for (const auto& chain : frontier) {
            PreimageComponent t;
            t.target = TargetKind::Curve;
            t.target_curve = chain.curve;
            t.degree = chain.degree;
            t.piece = cycle.representative;
            out.push_back(t);
        }
        // Degree-sum consistency of the composition.
        std::int64_t total = 0;
        for (const auto& c : out) total += c.degree;
        if (total != r.degree)
            throw ModelError("renormalize: composed degree sum " +
                             std::to_string(total) + " for '" + u +
                             "' differs from cycle degree " +
                             std::to_string(r.degree));
        r.pullback.emplace_back(u, std::move(out));
    }
    return r;
}

namespace {

// Orbifold weights from a critical-orbit portrait: nu(x) is the lcm of the
// path degrees of all backward orbits into x; 0 encodes infinity (a cycle
// of local degree > 1).
std::vector<std::int64_t> portrait_weights(
    const std::vector<PortraitPoint>& points) {
    std::map<std::string, Integer> nu;
    for (const auto& pt : points) nu[pt.id] = 1;
    const std::size_t rounds = 2 * points.size() + 2;
    bool changed = true;
    std::size_t round = 0;
    std::set<std::string> unstable;
    while (changed && round < rounds) {
        changed = false;
        ++round;
        for (const auto& pt : points) {
            auto it = nu.find(pt.image);
            if (it == nu.end()) continue;
            const Integer want = lcm(it->second, Integer(pt.local_degree) *
                                                     nu.at(pt.id));
            if (want != it->second) {
                it->second = want;
                changed = true;
                if (round == rounds) unstable.insert(pt.image);
            }
        }
    }
    if (changed) {
        // Still growing: mark everything reachable from a growing node as
        // infinite.
        for (std::size_t i = 0; i < points.size() + 1; ++i)
            for (const auto& pt : points)
                if (unstable.count(pt.id)) unstable.insert(pt.image);
        for (const auto& id : unstable) nu[id] = 0;
    }
    std::vector<std::int64_t> weights;
    for (const auto& [id, v] : nu)
        if (v == 0 || v >= 2)
            weights.push_back(v == 0 ? 0 : static_cast<std::int64_t>(v));
    std::sort(weights.begin(), weights.end());
    return weights;
}

}  // namespace

DecompositionReport classify(const CoverModel& m, double tol) {
    DecompositionReport rep;
    rep.dynamics = piece_dynamics(m);
    for (const auto& cycle : rep.dynamics.cycles)
        rep.renorms.push_back(renormalize(m, cycle));

    for (const auto& r : rep.renorms)
        if (r.kind == RenormKind::Siegel) ++rep.siegel_count;
    const std::int64_t upper =
        2 * std::int64_t(m.annuli.size()) + m.rotation_disk_cycles;
    rep.siegel_bounds_ok = rep.siegel_count >= 2 && rep.siegel_count <= upper;

    const Multicurve gamma = generate_gamma(m);
    rep.gamma_contracting = is_contracting(transition_matrix(m, gamma));
    rep.no_homeomorphism_kinds = true;
    for (const auto& r : rep.renorms)
        if (r.kind == RenormKind::Homeomorphism) rep.no_homeomorphism_kinds = false;

    for (const auto& r : rep.renorms) {
        if (r.kind != RenormKind::Thurston) continue;
        SignatureEntry e;
        e.piece = r.base_cycle.representative;
        for (const auto& [piece, points] : m.orbit_portraits)
            if (piece == r.base_cycle.representative) {
                e.weights = portrait_weights(points);
                e.known = true;
            }
        if (e.known &&
            e.weights == std::vector<std::int64_t>{2, 2, 2, 2})
            rep.no_2222_signature = false;
        rep.signatures.push_back(std::move(e));
    }
    (void)tol;
    return rep;
}

std::string DecompositionReport::to_string() const {
    std::ostringstream os;
    os << "cycles: " << dynamics.cycles.size() << '\n';
    for (const auto& r : renorms) {
        os << "  cycle " << r.base_cycle.representative << " period "
           << r.base_cycle.period << " kind " << oforge::to_string(r.kind)
           << " degree " << r.degree << " marked " << r.marked_points
           << " rotation-disks " << r.rotation_disks.size() << '\n';
    }
    os << "siegel-count: " << siegel_count
       << (siegel_bounds_ok ? " (within bounds)" : " (OUT OF BOUNDS)") << '\n';
    os << "gamma-contracting: " << (gamma_contracting ? "yes" : "no") << '\n';
    if (gamma_contracting)
        os << "exceptional-set-empty: " << (no_homeomorphism_kinds ? "yes" : "NO")
           << '\n';
    for (const auto& s : signatures) {
        os << "signature " << s.piece << ": ";
        if (!s.known) {
            os << "unknown";
        } else {
            os << '(';
            for (std::size_t i = 0; i < s.weights.size(); ++i) {
                if (i) os << ',';
                if (s.weights[i] == 0)
                    os << "inf";
                else
                    os << s.weights[i];
            }
            os << ')';
        }
        os << '\n';
    }
    return os.str();
}

std::string dot_export(const CoverModel& m) {
    PieceDynamics dyn = piece_dynamics(m);
    std::set<std::string> on_cycle;
    for (const auto& c : dyn.cycles)
        for (const auto& s : c.members) on_cycle.insert(s);
    std::ostringstream os;
    os << "digraph piece_map {\n";
    std::vector<std::string> ids;
    for (const auto& p : m.pieces) ids.push_back(p.id);
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) {
        os << "  \"" << id << "\"";
        if (on_cycle.count(id))
            os << " [style=bold, color=red]";
        os << ";\n";
    }
    for (const auto& id : ids) {
        os << "  \"" << id << "\" -> \"" << dyn.map.at(id) << "\"";
        if (on_cycle.count(id)) os << " [color=red]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace oforge
