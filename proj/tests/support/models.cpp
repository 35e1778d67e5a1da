#include "models.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oforge::testsupport {

CoverModel load_model(const std::string& name) {
    const std::string path = std::string(MODELS_DIR) + "/" + name;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

namespace {

std::string gname(int k) { return "g" + std::to_string(k); }
std::string pname(int k) { return "P_" + std::to_string(k); }
std::string uname(int k) { return "u" + std::to_string(k); }

PreimageComponent curve_comp(const std::string& target, std::int64_t deg,
                             const std::string& piece) {
    PreimageComponent c;
    c.target = TargetKind::Curve;
    c.target_curve = target;
    c.degree = deg;
    c.piece = piece;
    return c;
}

PreimageComponent boundary_comp(const std::string& target, std::int64_t deg,
                                bool coincides) {
    PreimageComponent c;
    c.target = TargetKind::Curve;
    c.target_curve = target;
    c.degree = deg;
    c.at_boundary = true;
    if (coincides) c.coincides = target;
    return c;
}

PreimageComponent null_comp(std::int64_t deg, const std::string& piece) {
    PreimageComponent c;
    c.target = TargetKind::Null;
    c.degree = deg;
    c.piece = piece;
    return c;
}

void check_spec(const LadderSpec& spec) {
    if (spec.chain < 1 || spec.chain > 4)
        throw std::invalid_argument("ring_ladder: chain must be 1..4");
    if (spec.cycle_period < 1 || spec.cycle_period > 3)
        throw std::invalid_argument("ring_ladder: cycle_period must be 1..3");
    const bool steps = !spec.step_degrees.empty();
    if (steps &&
        static_cast<int>(spec.step_degrees.size()) != spec.cycle_period)
        throw std::invalid_argument(
            "ring_ladder: step_degrees must have cycle_period entries");
    if (spec.cycle_period >= 2 && spec.chain < spec.cycle_period + 1)
        throw std::invalid_argument(
            "ring_ladder: cycle needs chain >= period + 1");
    if (spec.tail && (!steps || spec.chain < spec.cycle_period + 2))
        throw std::invalid_argument(
            "ring_ladder: tail needs step curves and chain >= period + 2");
    if (!spec.chain_degrees.empty() &&
        static_cast<int>(spec.chain_degrees.size()) != spec.chain)
        throw std::invalid_argument(
            "ring_ladder: chain_degrees must have chain entries");
    if (!spec.couplings.empty() &&
        static_cast<int>(spec.couplings.size()) != spec.chain - 1)
        throw std::invalid_argument(
            "ring_ladder: couplings must have chain - 1 entries");
}

}  // namespace

CoverModel ring_ladder(const LadderSpec& spec) {
    check_spec(spec);
    const int m = spec.chain;
    const int p = spec.cycle_period;
    const bool steps = !spec.step_degrees.empty();

    std::vector<std::int64_t> e = spec.chain_degrees;
    if (e.empty()) e.assign(m, 1);
    std::vector<std::int64_t> d = spec.couplings;
    if (d.empty()) d.assign(m > 0 ? m - 1 : 0, 4);

    CoverModel mod;
    mod.rotation_disk_cycles = 0;

    auto add_core = [&](const std::string& id, const std::string& cyc) {
        CurveClass c;
        c.id = id;
        c.kind = CurveKind::Core;
        c.annulus_cycle = cyc;
        mod.curves.push_back(c);
    };
    auto add_interior = [&](const std::string& id, const std::string& piece) {
        CurveClass c;
        c.id = id;
        c.kind = CurveKind::Interior;
        c.piece = piece;
        mod.curves.push_back(c);
    };

    add_core("a_n", "A_N");
    add_core("a_s", "A_S");
    for (int k = 1; k <= m; ++k) add_interior(gname(k), pname(k - 1));

    std::vector<std::string> host(p);
    if (steps) {
        if (p == 1) {
            host[0] = (m >= 2) ? pname(1) : pname(0);
        } else {
            for (int k = 0; k < p; ++k) host[k] = pname(k + 1);
        }
        for (int k = 0; k < p; ++k) add_interior(uname(k + 1), host[k]);
    }
    if (spec.tail) add_interior("w", pname(p + 1));
    if (spec.obstructed) add_interior("s", pname(0));

    auto add_piece = [&](const std::string& id,
                         std::vector<std::string> boundary) {
        Piece q;
        q.id = id;
        q.boundary = std::move(boundary);
        q.interior_marked_points = 1;
        q.rotation_disk_count = 0;
        mod.pieces.push_back(q);
    };
    add_piece("P_N", {"a_n"});
    add_piece(pname(0), {"a_n", gname(1)});
    for (int k = 1; k <= m - 1; ++k)
        add_piece(pname(k), {gname(k), gname(k + 1)});
    add_piece(pname(m), {gname(m), "a_s"});
    add_piece("P_S", {"a_s"});

    std::map<std::string, std::string> img;
    img["P_N"] = "P_N";
    img["P_S"] = "P_S";
    for (int k = 0; k <= m; ++k) img[pname(k)] = pname(k);
    if (p >= 2) {
        for (int k = 1; k < p; ++k) img[pname(k)] = pname(k + 1);
        img[pname(p)] = pname(1);
    }
    if (spec.tail) img[pname(p + 1)] = pname(p);

    std::map<std::string, std::vector<PreimageComponent>> pb;
    for (const auto& c : mod.curves) pb[c.id];

    pb["a_n"].push_back(boundary_comp("a_n", 1, true));
    pb["a_n"].push_back(boundary_comp(gname(1), e[0], false));
    pb["a_s"].push_back(boundary_comp("a_s", 1, true));
    for (int k = 1; k <= m - 1; ++k) {
        pb[gname(k)].push_back(boundary_comp(gname(k + 1), e[k], false));
        pb[gname(k + 1)].push_back(curve_comp(gname(k), d[k - 1], pname(k)));
    }
    if (steps) {
        for (int k = 0; k < p; ++k) {
            const std::string dst = uname((k + 1) % p + 1);
            for (std::int64_t deg : spec.step_degrees[k])
                pb[dst].push_back(curve_comp(uname(k + 1), deg, host[k]));
        }
    }
    if (spec.tail) pb[uname(p)].push_back(curve_comp("w", 1, pname(p + 1)));
    if (spec.obstructed) pb["s"].push_back(curve_comp("s", 1, pname(0)));

    std::set<std::string> boundary_ids;
    std::map<std::string, std::set<std::string>> sphere;
    for (const auto& q : mod.pieces) {
        sphere[q.id].insert(q.boundary.begin(), q.boundary.end());
        boundary_ids.insert(q.boundary.begin(), q.boundary.end());
    }
    for (const auto& c : mod.curves)
        if (c.kind == CurveKind::Interior && !boundary_ids.count(c.id))
            sphere[c.piece].insert(c.id);

    auto on_track = [&](const Piece& q, const std::string& x) {
        std::int64_t total = 0;
        const std::set<std::string> bd(q.boundary.begin(), q.boundary.end());
        for (const auto& c : pb[x]) {
            if (c.at_boundary) {
                if (bd.count(c.target_curve)) total += c.degree;
            } else if (c.piece == q.id) {
                total += c.degree;
            }
        }
        return total;
    };

    std::map<std::string, std::int64_t> pd;
    for (const auto& q : mod.pieces) {
        std::int64_t best = 1;
        for (const auto& x : sphere[img[q.id]])
            best = std::max(best, on_track(q, x));
        pd[q.id] = best;
    }
    for (const auto& q : mod.pieces)
        for (const auto& x : sphere[img[q.id]]) {
            const std::int64_t deficit = pd[q.id] - on_track(q, x);
            if (deficit > 0) pb[x].push_back(null_comp(deficit, q.id));
        }

    auto total_of = [&](const std::string& x) {
        std::int64_t total = 0;
        for (const auto& c : pb[x]) total += c.degree;
        return total;
    };
    std::int64_t degree = 3;
    for (const auto& c : mod.curves)
        degree = std::max(degree, total_of(c.id));
    for (const auto& c : mod.curves) {
        const std::int64_t deficit = degree - total_of(c.id);
        if (deficit == 0) continue;
        const Piece* safe = nullptr;
        for (const auto& q : mod.pieces)
            if (!sphere[img[q.id]].count(c.id)) {
                safe = &q;
                break;
            }
        if (!safe)
            throw std::logic_error("ring_ladder: no junk piece for " + c.id);
        pb[c.id].push_back(null_comp(deficit, safe->id));
    }
    mod.degree = degree;

    for (const auto& c : mod.curves) mod.pullback.emplace_back(c.id, pb[c.id]);

    for (const auto& q : mod.pieces) {
        PieceMapRecord r;
        r.source = q.id;
        r.image = img[q.id];
        r.parallel_degree = pd[q.id];
        mod.piece_map.push_back(r);
    }

    auto add_annulus = [&](const std::string& id, const Rational& rot,
                           const std::string& core) {
        RotationAnnulusCycle a;
        a.id = id;
        a.period = 1;
        a.rotation_number = rot;
        a.modulus = Rational(1, 2);
        a.sigma_modulus = a.modulus / 4;
        a.core_curves = {core};
        mod.annuli.push_back(a);
    };
    add_annulus("A_N", Rational(1, 3), "a_n");
    add_annulus("A_S", Rational(2, 5), "a_s");

    return mod;
}

std::vector<std::string> ladder_sigma_curves(const LadderSpec& spec) {
    std::vector<std::string> out;
    if (!spec.step_degrees.empty())
        for (int k = 1; k <= spec.cycle_period; ++k) out.push_back(uname(k));
    if (spec.tail) out.push_back("w");
    if (spec.obstructed) out.push_back("s");
    return out;
}

std::vector<std::string> ladder_full_multicurve(const LadderSpec& spec) {
    std::vector<std::string> out;
    for (int k = 1; k <= spec.chain; ++k) out.push_back(gname(k));
    for (const auto& id : ladder_sigma_curves(spec)) out.push_back(id);
    return out;
}

}  // namespace oforge::testsupport
