#include "oforge/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace oforge {

using ordered_json = nlohmann::ordered_json;

const CurveClass* CoverModel::curve(const std::string& id) const {
    for (const auto& c : curves)
        if (c.id == id) return &c;
    return nullptr;
}

const Piece* CoverModel::piece(const std::string& id) const {
    for (const auto& p : pieces)
        if (p.id == id) return &p;
    return nullptr;
}

const RotationAnnulusCycle* CoverModel::annulus(const std::string& id) const {
    for (const auto& a : annuli)
        if (a.id == id) return &a;
    return nullptr;
}

const PieceMapRecord* CoverModel::map_of(const std::string& piece_id) const {
    for (const auto& r : piece_map)
        if (r.source == piece_id) return &r;
    return nullptr;
}

const std::vector<PreimageComponent>* CoverModel::pullback_of(
    const std::string& curve_id) const {
    for (const auto& [id, comps] : pullback)
        if (id == curve_id) return &comps;
    return nullptr;
}

bool CoverModel::is_core(const std::string& curve_id) const {
    const CurveClass* c = curve(curve_id);
    return c && c->kind == CurveKind::Core;
}

std::set<std::string> CoverModel::gamma0() const {
    std::set<std::string> out;
    for (const auto& c : curves)
        if (c.kind == CurveKind::Core) out.insert(c.id);
    return out;
}

std::vector<std::string> CoverModel::adjacent_pieces(
    const std::string& curve_id) const {
    std::vector<std::string> out;
    for (const auto& p : pieces)
        if (std::find(p.boundary.begin(), p.boundary.end(), curve_id) !=
            p.boundary.end())
            out.push_back(p.id);
    return out;
}

bool CoverModel::is_boundary_curve(const std::string& curve_id) const {
    return !adjacent_pieces(curve_id).empty();
}

std::vector<std::string> CoverModel::strictly_interior(
    const std::string& piece_id) const {
    std::vector<std::string> out;
    for (const auto& c : curves)
        if (c.kind == CurveKind::Interior && c.piece == piece_id &&
            !is_boundary_curve(c.id))
            out.push_back(c.id);
    return out;
}

std::optional<std::string> CoverModel::forward_image(
    const std::string& curve_id) const {
    std::optional<std::string> found;
    if (is_boundary_curve(curve_id)) {
        for (const auto& [id, comps] : pullback)
            for (const auto& comp : comps)
                if (comp.at_boundary && comp.target == TargetKind::Curve &&
                    comp.target_curve == curve_id) {
                    if (found && *found != id) return std::nullopt;
                    found = id;
                }
        return found;
    }
    for (const auto& [id, comps] : pullback)
        for (const auto& comp : comps)
            if (comp.target == TargetKind::Curve &&
                comp.target_curve == curve_id) {
                if (found && *found != id) return std::nullopt;
                found = id;
            }
    return found;
}

std::optional<std::int64_t> CoverModel::forward_degree(
    const std::string& curve_id) const {
    auto image = forward_image(curve_id);
    if (!image) return std::nullopt;
    const auto* comps = pullback_of(*image);
    if (!comps) return std::nullopt;
    const bool boundary = is_boundary_curve(curve_id);
    std::int64_t total = 0;
    for (const auto& comp : *comps) {
        if (comp.target != TargetKind::Curve || comp.target_curve != curve_id)
            continue;
        if (boundary) {
            if (comp.at_boundary) return comp.degree;
        } else {
            total += comp.degree;
        }
    }
    if (boundary || total == 0) return std::nullopt;
    return total;
}

Rational CoverModel::grotzsch_constant(const std::string& gap_id) const {
    for (const auto& [id, value] : grotzsch_constants)
        if (id == gap_id) return value;
    for (const auto& [id, value] : grotzsch_constants)
        if (id == "default") return value;
    return Rational(1);
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.passed; });
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.passed ? "PASS" : "FAIL") << ' ' << c.name;
        if (!c.location.empty()) os << " @ " << c.location;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << '\n';
    }
    return os.str();
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ModelError(where + ": " + what);
}

std::string get_string(const ordered_json& j, const std::string& key,
                       const std::string& where) {
    if (!j.contains(key)) fail(where, "missing field '" + key + "'");
    if (!j[key].is_string()) fail(where, "field '" + key + "' must be a string");
    return j[key].get<std::string>();
}

std::int64_t get_int(const ordered_json& j, const std::string& key,
                     const std::string& where, std::int64_t min_value) {
    if (!j.contains(key)) fail(where, "missing field '" + key + "'");
    if (!j[key].is_number_integer())
        fail(where, "field '" + key + "' must be an integer");
    const std::int64_t v = j[key].get<std::int64_t>();
    if (v < min_value)
        fail(where, "field '" + key + "' must be >= " +
                        std::to_string(min_value));
    return v;
}

Rational get_rational(const ordered_json& j, const std::string& key,
                      const std::string& where) {
    const std::string s = get_string(j, key, where);
    auto r = parse_rational(s);
    if (!r) fail(where, "field '" + key + "' is not a rational: '" + s + "'");
    return *r;
}

PreimageComponent parse_component(const ordered_json& j,
                                  const std::string& where) {
    if (!j.is_object()) fail(where, "component must be an object");
    PreimageComponent c;
    const std::string target = get_string(j, "target", where);
    if (target == "null") {
        c.target = TargetKind::Null;
    } else if (target == "peripheral") {
        c.target = TargetKind::Peripheral;
    } else if (target.rfind("curve:", 0) == 0) {
        c.target = TargetKind::Curve;
        c.target_curve = target.substr(6);
        if (c.target_curve.empty()) fail(where, "empty curve target");
    } else {
        fail(where, "unknown target '" + target + "'");
    }
    c.degree = get_int(j, "degree", where, 1);
    const std::string piece = get_string(j, "piece", where);
    if (piece == "@boundary") {
        c.at_boundary = true;
    } else {
        c.piece = piece;
    }
    if (j.contains("coincides")) {
        c.coincides = get_string(j, "coincides", where);
        if (c.target != TargetKind::Curve || c.target_curve != c.coincides)
            fail(where, "coincides must match the Curve target");
        if (!c.at_boundary)
            fail(where, "coinciding component must have piece '@boundary'");
    }
    return c;
}

void check_duplicates(const std::vector<std::string>& ids,
                      const std::string& what) {
    std::set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            fail(what, "duplicate id '" + id + "'");
}

}  // namespace

CoverModel parse_model(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelError(std::string("syntax error: ") + e.what());
    }
    if (!j.is_object()) fail("model", "top level must be an object");

    CoverModel m;
    m.degree = get_int(j, "degree", "model", 2);
    if (j.contains("claims_rational")) {
        if (!j["claims_rational"].is_boolean())
            fail("model", "claims_rational must be a boolean");
        m.claims_rational = j["claims_rational"].get<bool>();
        m.claims_rational_set = true;
    }
    m.rotation_disk_cycles = get_int(j, "rotation_disk_cycles", "model", 0);

    if (!j.contains("curves") || !j["curves"].is_array())
        fail("model", "missing 'curves' array");
    for (const auto& cj : j["curves"]) {
        const std::string where = "curves[" + std::to_string(m.curves.size()) + "]";
        CurveClass c;
        c.id = get_string(cj, "id", where);
        const std::string kind = get_string(cj, "kind", where);
        if (kind == "core") {
            c.kind = CurveKind::Core;
            c.annulus_cycle = get_string(cj, "annulus_cycle", where);
        } else if (kind == "interior") {
            c.kind = CurveKind::Interior;
            c.piece = get_string(cj, "piece", where);
        } else {
            fail(where, "unknown kind '" + kind + "'");
        }
        if (cj.contains("label")) c.label = get_string(cj, "label", where);
        m.curves.push_back(std::move(c));
    }

    if (!j.contains("pieces") || !j["pieces"].is_array())
        fail("model", "missing 'pieces' array");
    for (const auto& pj : j["pieces"]) {
        const std::string where = "pieces[" + std::to_string(m.pieces.size()) + "]";
        Piece p;
        p.id = get_string(pj, "id", where);
        if (!pj.contains("boundary") || !pj["boundary"].is_array())
            fail(where, "missing 'boundary' array");
        for (const auto& b : pj["boundary"]) {
            if (!b.is_string()) fail(where, "boundary entries must be strings");
            p.boundary.push_back(b.get<std::string>());
        }
        check_duplicates(p.boundary, where + ".boundary");
        p.interior_marked_points = get_int(pj, "interior_marked_points", where, 0);
        p.rotation_disk_count = get_int(pj, "rotation_disk_count", where, 0);
        m.pieces.push_back(std::move(p));
    }

    if (!j.contains("pullback") || !j["pullback"].is_object())
        fail("model", "missing 'pullback' object");
    for (const auto& [key, value] : j["pullback"].items()) {
        if (!value.is_array()) fail("pullback." + key, "must be an array");
        std::vector<PreimageComponent> comps;
        for (const auto& cj : value)
            comps.push_back(parse_component(
                cj, "pullback." + key + "[" + std::to_string(comps.size()) + "]"));
        m.pullback.emplace_back(key, std::move(comps));
    }

    if (!j.contains("piece_map") || !j["piece_map"].is_array())
        fail("model", "missing 'piece_map' array");
    for (const auto& rj : j["piece_map"]) {
        const std::string where =
            "piece_map[" + std::to_string(m.piece_map.size()) + "]";
        PieceMapRecord r;
        r.source = get_string(rj, "source", where);
        r.image = get_string(rj, "image", where);
        r.parallel_degree = get_int(rj, "parallel_degree", where, 1);
        m.piece_map.push_back(std::move(r));
    }

    if (!j.contains("annuli") || !j["annuli"].is_array())
        fail("model", "missing 'annuli' array");
    for (const auto& aj : j["annuli"]) {
        const std::string where = "annuli[" + std::to_string(m.annuli.size()) + "]";
        RotationAnnulusCycle a;
        a.id = get_string(aj, "id", where);
        a.period = get_int(aj, "period", where, 1);
        a.rotation_number = get_rational(aj, "rotation_number", where);
        if (a.rotation_number <= 0 || a.rotation_number >= 1)
            fail(where, "rotation_number must lie in (0,1)");
        a.modulus = get_rational(aj, "modulus", where);
        if (a.modulus <= 0) fail(where, "modulus must be positive");
        if (aj.contains("sigma_modulus")) {
            a.sigma_modulus = get_rational(aj, "sigma_modulus", where);
            if (a.sigma_modulus <= 0)
                fail(where, "sigma_modulus must be positive");
            a.sigma_modulus_set = true;
        } else {
            a.sigma_modulus = a.modulus / 4;
        }
        if (!aj.contains("core_curves") || !aj["core_curves"].is_array())
            fail(where, "missing 'core_curves' array");
        for (const auto& c : aj["core_curves"]) {
            if (!c.is_string()) fail(where, "core_curves entries must be strings");
            a.core_curves.push_back(c.get<std::string>());
        }
        if (static_cast<std::int64_t>(a.core_curves.size()) != a.period)
            fail(where, "core_curves length must equal period");
        m.annuli.push_back(std::move(a));
    }

    if (j.contains("orbit_portraits")) {
        if (!j["orbit_portraits"].is_object())
            fail("model", "orbit_portraits must be an object");
        m.orbit_portraits_set = true;
        for (const auto& [key, value] : j["orbit_portraits"].items()) {
            if (!value.is_array())
                fail("orbit_portraits." + key, "must be an array");
            std::vector<PortraitPoint> points;
            for (const auto& pj : value) {
                const std::string where = "orbit_portraits." + key + "[" +
                                          std::to_string(points.size()) + "]";
                PortraitPoint p;
                p.id = get_string(pj, "id", where);
                p.image = get_string(pj, "image", where);
                p.local_degree = get_int(pj, "local_degree", where, 1);
                points.push_back(std::move(p));
            }
            m.orbit_portraits.emplace_back(key, std::move(points));
        }
    }

    if (j.contains("grotzsch_constants")) {
        if (!j["grotzsch_constants"].is_object())
            fail("model", "grotzsch_constants must be an object");
        m.grotzsch_constants_set = true;
        for (const auto& [key, value] : j["grotzsch_constants"].items()) {
            if (!value.is_string())
                fail("grotzsch_constants." + key, "must be a rational string");
            auto r = parse_rational(value.get<std::string>());
            if (!r || *r < 0)
                fail("grotzsch_constants." + key,
                     "must be a nonnegative rational");
            m.grotzsch_constants.emplace_back(key, *r);
        }
    }

    // Cross-reference resolution.
    {
        std::vector<std::string> ids;
        for (const auto& c : m.curves) ids.push_back(c.id);
        check_duplicates(ids, "curves");
        ids.clear();
        for (const auto& p : m.pieces) ids.push_back(p.id);
        check_duplicates(ids, "pieces");
        ids.clear();
        for (const auto& a : m.annuli) ids.push_back(a.id);
        check_duplicates(ids, "annuli");
        ids.clear();
        for (const auto& r : m.piece_map) ids.push_back(r.source);
        check_duplicates(ids, "piece_map");
    }
    auto need_curve = [&m](const std::string& id, const std::string& where) {
        if (!m.curve(id)) fail(where, "dangling curve id '" + id + "'");
    };
    auto need_piece = [&m](const std::string& id, const std::string& where) {
        if (!m.piece(id)) fail(where, "dangling piece id '" + id + "'");
    };
    for (const auto& c : m.curves) {
        if (c.kind == CurveKind::Core) {
            if (!m.annulus(c.annulus_cycle))
                fail("curves." + c.id,
                     "dangling annulus cycle id '" + c.annulus_cycle + "'");
        } else {
            need_piece(c.piece, "curves." + c.id);
        }
    }
    for (const auto& p : m.pieces)
        for (const auto& b : p.boundary) need_curve(b, "pieces." + p.id);
    for (const auto& [id, comps] : m.pullback) {
        need_curve(id, "pullback");
        for (const auto& comp : comps) {
            if (comp.target == TargetKind::Curve)
                need_curve(comp.target_curve, "pullback." + id);
            if (!comp.at_boundary) need_piece(comp.piece, "pullback." + id);
        }
    }
    for (const auto& r : m.piece_map) {
        need_piece(r.source, "piece_map");
        need_piece(r.image, "piece_map." + r.source);
    }
    for (const auto& a : m.annuli)
        for (const auto& c : a.core_curves) {
            need_curve(c, "annuli." + a.id);
            const CurveClass* cc = m.curve(c);
            if (cc->kind != CurveKind::Core || cc->annulus_cycle != a.id)
                fail("annuli." + a.id,
                     "core curve '" + c + "' is not a core of this cycle");
        }
    for (const auto& [key, points] : m.orbit_portraits)
        need_piece(key, "orbit_portraits");

    if (m.annuli.empty())
        fail("model", "Herman model requires >=1 rotation annulus cycle");

    return m;
}

std::string serialize_model(const CoverModel& m) {
    ordered_json j;
    j["degree"] = m.degree;
    if (m.claims_rational_set) j["claims_rational"] = m.claims_rational;
    j["rotation_disk_cycles"] = m.rotation_disk_cycles;

    j["curves"] = ordered_json::array();
    for (const auto& c : m.curves) {
        ordered_json cj;
        cj["id"] = c.id;
        if (c.kind == CurveKind::Core) {
            cj["kind"] = "core";
            cj["annulus_cycle"] = c.annulus_cycle;
        } else {
            cj["kind"] = "interior";
            cj["piece"] = c.piece;
        }
        if (!c.label.empty()) cj["label"] = c.label;
        j["curves"].push_back(std::move(cj));
    }

    j["pieces"] = ordered_json::array();
    for (const auto& p : m.pieces) {
        ordered_json pj;
        pj["id"] = p.id;
        pj["boundary"] = p.boundary;
        pj["interior_marked_points"] = p.interior_marked_points;
        pj["rotation_disk_count"] = p.rotation_disk_count;
        j["pieces"].push_back(std::move(pj));
    }

    j["pullback"] = ordered_json::object();
    for (const auto& [id, comps] : m.pullback) {
        ordered_json arr = ordered_json::array();
        for (const auto& c : comps) {
            ordered_json cj;
            switch (c.target) {
                case TargetKind::Null: cj["target"] = "null"; break;
                case TargetKind::Peripheral: cj["target"] = "peripheral"; break;
                case TargetKind::Curve:
                    cj["target"] = "curve:" + c.target_curve;
                    break;
            }
            cj["degree"] = c.degree;
            cj["piece"] = c.at_boundary ? std::string("@boundary") : c.piece;
            if (!c.coincides.empty()) cj["coincides"] = c.coincides;
            arr.push_back(std::move(cj));
        }
        j["pullback"][id] = std::move(arr);
    }

    j["piece_map"] = ordered_json::array();
    for (const auto& r : m.piece_map) {
        ordered_json rj;
        rj["source"] = r.source;
        rj["image"] = r.image;
        rj["parallel_degree"] = r.parallel_degree;
        j["piece_map"].push_back(std::move(rj));
    }

    j["annuli"] = ordered_json::array();
    for (const auto& a : m.annuli) {
        ordered_json aj;
        aj["id"] = a.id;
        aj["period"] = a.period;
        aj["rotation_number"] = format_rational(a.rotation_number);
        aj["modulus"] = format_rational(a.modulus);
        if (a.sigma_modulus_set)
            aj["sigma_modulus"] = format_rational(a.sigma_modulus);
        aj["core_curves"] = a.core_curves;
        j["annuli"].push_back(std::move(aj));
    }

    if (m.orbit_portraits_set) {
        j["orbit_portraits"] = ordered_json::object();
        for (const auto& [key, points] : m.orbit_portraits) {
            ordered_json arr = ordered_json::array();
            for (const auto& p : points) {
                ordered_json pj;
                pj["id"] = p.id;
                pj["image"] = p.image;
                pj["local_degree"] = p.local_degree;
                arr.push_back(std::move(pj));
            }
            j["orbit_portraits"][key] = std::move(arr);
        }
    }

    if (m.grotzsch_constants_set) {
        j["grotzsch_constants"] = ordered_json::object();
        for (const auto& [key, value] : m.grotzsch_constants)
            j["grotzsch_constants"][key] = format_rational(value);
    }

    return j.dump(2) + "\n";
}

}  // namespace oforge
