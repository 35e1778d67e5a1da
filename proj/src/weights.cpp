#include "oforge/weights.hpp"

#include "oforge/decompose.hpp"
#include "oforge/spectral.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace oforge {

std::string AffineForm::str() const {
    std::ostringstream os;
    os << format_rational(a) << "*t";
    if (b != 0) os << " + " << format_rational(b);
    return os.str();
}

const AffineForm& SigmaFunction::at(const SideLabel& l) const {
    auto it = forms.find(l);
    if (it == forms.end())
        throw ModelError("sigma: no form for label " + l.str());
    return it->second;
}

bool Inequality::holds_at(const Rational& t) const {
    const Rational margin = margin_at(t);
    return strict ? margin > 0 : margin >= 0;
}

Rational Inequality::margin_at(const Rational& t) const {
    return (rhs - lhs).eval(t);
}

namespace {

// The two pieces adjacent to a boundary curve; first listed is the "+" side.
std::pair<std::string, std::string> sides_of(const CoverModel& m,
                                             const std::string& curve) {
    const auto adj = m.adjacent_pieces(curve);
    if (adj.size() != 2)
        throw ModelError("weights: curve '" + curve +
                         "' does not separate two pieces");
    return {adj[0], adj[1]};
}

std::string side_piece(const CoverModel& m, const SideLabel& l) {
    const auto [plus, minus] = sides_of(m, l.curve);
    return l.plus ? plus : minus;
}

struct SideComponent {
    std::string parent;  // curve whose pullback holds the component
    std::int64_t degree;
};

// Non-boundary preimage components homotopic to the label's curve, lying
// in the label's side piece.
std::vector<SideComponent> side_components(const CoverModel& m,
                                           const SideLabel& l) {
    const std::string piece = side_piece(m, l);
    std::vector<SideComponent> out;
    for (const auto& [parent, comps] : m.pullback)
        for (const auto& c : comps)
            if (!c.at_boundary && c.target == TargetKind::Curve &&
                c.target_curve == l.curve && c.piece == piece)
                out.push_back(SideComponent{parent, c.degree});
    return out;
}

std::map<std::string, std::size_t> strata_index(const CoverModel& m) {
    std::map<std::string, std::size_t> idx;
    const auto strata = gamma_strata(m);
    for (std::size_t k = 0; k < strata.size(); ++k)
        for (const auto& id : strata[k]) idx[id] = k;
    return idx;
}

Rational rho_at(const RhoAssignment& rho, const SideLabel& l) {
    auto it = rho.rho.find(l);
    if (it == rho.rho.end())
        throw ModelError("weights: no rho for label " + l.str());
    return it->second;
}

Rational v_at(const std::map<std::string, Rational>& v, const std::string& id) {
    auto it = v.find(id);
    if (it == v.end())
        throw ModelError("weights: no contraction-vector entry for '" + id + "'");
    return it->second;
}

}  // namespace

std::map<std::string, Rational> contraction_vector_map(const CoverModel& m,
                                                       const Multicurve& gamma) {
    const auto v = contraction_vector(transition_matrix(m, gamma));
    std::map<std::string, Rational> out;
    for (std::size_t i = 0; i < gamma.curves.size(); ++i)
        out[gamma.curves[i]] = v[i];
    return out;
}

RhoAssignment solve_rho(const CoverModel& m, const Multicurve& gamma,
                        const std::map<std::string, Rational>& v) {
    RhoAssignment out;
    const auto strata = strata_index(m);

    auto side_sum = [&](const SideLabel& l) {
        Rational sum;
        for (const auto& sc : side_components(m, l))
            if (gamma.contains(sc.parent))
                sum += v_at(v, sc.parent) / sc.degree;
        return sum;
    };
    auto wv = [&](const std::string& id) {
        // (Wv)(id): every Gamma-pullback component homotopic to id,
        // including the boundary-coinciding one.
        Rational sum;
        for (const auto& [parent, comps] : m.pullback) {
            if (!gamma.contains(parent)) continue;
            for (const auto& c : comps)
                if (c.target == TargetKind::Curve && c.target_curve == id)
                    sum += v_at(v, parent) / c.degree;
        }
        return sum;
    };

    // Strata must be processed shallow-first so forward images are ready.
    std::vector<std::string> order = gamma.curves;
    std::sort(order.begin(), order.end(),
              [&](const std::string& a, const std::string& b) {
                  const auto ka = strata.at(a), kb = strata.at(b);
                  return ka != kb ? ka < kb : a < b;
              });

    for (const auto& id : order) {
        if (!strata.count(id))
            throw ModelError("solve_rho: '" + id +
                             "' is not in the generated multicurve strata");
        const SideLabel plus{id, true}, minus{id, false};
        const Rational total = wv(id);
        const Rational vg = v_at(v, id);
        if (total >= vg)
            throw ModelError("solve_rho: Wv < v fails at '" + id + "'");
        if (strata.at(id) == 0) {
            // First stratum: split with slack delta on each side.
            const Rational delta = (vg - total) / 4;
            const Rational denom = total + 2 * delta;
            out.rho[plus] = (side_sum(plus) + delta) / denom;
            out.rho[minus] = (side_sum(minus) + delta) / denom;
        } else {
            const auto image = m.forward_image(id);
            const auto fdeg = m.forward_degree(id);
            if (!image || !fdeg || !gamma.contains(*image))
                throw ModelError("solve_rho: deeper-stratum curve '" + id +
                                 "' has no forward image in the multicurve");
            const Rational lead = v_at(v, *image) / *fdeg;
            out.rho[plus] =
                (lead * rho_at(out, SideLabel{*image, true}) + side_sum(plus)) /
                total;
            out.rho[minus] =
                (lead * rho_at(out, SideLabel{*image, false}) + side_sum(minus)) /
                total;
        }
        // Exact re-verification of the defining strict inequalities.
        if (out.rho[plus] + out.rho[minus] != 1)
            throw ModelError("solve_rho: sides of '" + id + "' do not sum to 1");
        if (out.rho[plus] <= 0 || out.rho[minus] <= 0)
            throw ModelError("solve_rho: nonpositive rho at '" + id + "'");
        for (const SideLabel& l : {plus, minus}) {
            Rational lhs = side_sum(l);
            if (strata.at(id) > 0) {
                const auto image = *m.forward_image(id);
                lhs += v_at(v, image) / *m.forward_degree(id) *
                       rho_at(out, SideLabel{image, l.plus});
            }
            const Rational rhs = vg * rho_at(out, l);
            if (!(lhs < rhs))
                throw ModelError("solve_rho: strict inequality fails at " +
                                 l.str());
            out.verified.push_back(l.str() + ": " + format_rational(lhs) +
                                   " < " + format_rational(rhs));
        }
    }
    return out;
}

SigmaFunction sigma(const CoverModel& m, const Multicurve& gamma,
                    const RhoAssignment& rho,
                    const std::map<std::string, Rational>& v) {
    SigmaFunction sig;
    const PieceDynamics dyn = piece_dynamics(m);
    std::set<std::string> periodic;
    for (const auto& c : dyn.cycles)
        for (const auto& s : c.members) periodic.insert(s);

    for (const auto& c : m.curves) {
        if (c.kind != CurveKind::Core) continue;
        const RotationAnnulusCycle* a = m.annulus(c.annulus_cycle);
        sig.forms[SideLabel{c.id, true}] = AffineForm{0, a->sigma_modulus};
        sig.forms[SideLabel{c.id, false}] = AffineForm{0, a->sigma_modulus};
    }

    struct Pending {
        SideLabel label;
        SideLabel image;
        Rational degree;
    };
    std::vector<Pending> pending;
    for (const auto& id : gamma.curves) {
        for (const bool plus : {true, false}) {
            const SideLabel l{id, plus};
            const bool d1 = !side_components(m, l).empty();
            if (d1 || periodic.count(side_piece(m, l))) {
                sig.forms[l] = AffineForm{rho_at(rho, l) * v_at(v, id), 0};
            } else {
                const auto image = m.forward_image(id);
                const auto fdeg = m.forward_degree(id);
                if (!image || !fdeg)
                    throw ModelError("sigma: no forward image for '" + id + "'");
                pending.push_back(Pending{l, SideLabel{*image, plus},
                                          Rational(*fdeg)});
            }
        }
    }
    // Forward chases resolve in at most #curves passes; anything left is a
    // cycle without terminal data.
    for (std::size_t pass = 0; pass <= m.curves.size() && !pending.empty();
         ++pass) {
        std::vector<Pending> next;
        for (const auto& p : pending) {
            auto it = sig.forms.find(p.image);
            if (it != sig.forms.end())
                sig.forms[p.label] = it->second / p.degree;
            else
                next.push_back(p);
        }
        if (next.size() == pending.size())
            throw ModelError("sigma: forward chase does not terminate at " +
                             next.front().label.str());
        pending = std::move(next);
    }
    if (!pending.empty())
        throw ModelError("sigma: forward chase exceeded the piece bound");
    return sig;
}

std::vector<Inequality> assemble_inequalities(
    const CoverModel& m, const Multicurve& gamma, const RhoAssignment& rho,
    const std::map<std::string, Rational>& v, const SigmaFunction& sig) {
    std::vector<Inequality> out;
    const auto cores = m.gamma0();

    // Each label is dominated by its t*rho*v budget.
    for (const auto& id : gamma.curves)
        for (const bool plus : {true, false}) {
            const SideLabel l{id, plus};
            out.push_back(Inequality{"budget:" + l.str(), sig.at(l),
                                     AffineForm{rho_at(rho, l) * v_at(v, id), 0},
                                     false});
        }

    // The two sides of a curve together fit under t*v, and under the
    // annulus modulus for core curves.
    for (const auto& id : gamma.curves) {
        out.push_back(Inequality{
            "pair:" + id,
            sig.at(SideLabel{id, true}) + sig.at(SideLabel{id, false}),
            AffineForm{v_at(v, id), 0}, false});
    }
    for (const auto& id : cores) {
        const CurveClass* c = m.curve(id);
        const RotationAnnulusCycle* a = m.annulus(c->annulus_cycle);
        out.push_back(Inequality{"pair:" + id,
                                 AffineForm{0, 2 * a->sigma_modulus},
                                 AffineForm{0, a->modulus}, false});
    }

    // Side-component budgets and the Grotzsch budget, one per first-kind
    // label (a label with a parallel preimage component on its side).
    for (const auto& id : gamma.curves) {
        const auto image = m.forward_image(id);
        const auto fdeg = m.forward_degree(id);
        for (const bool plus : {true, false}) {
            const SideLabel l{id, plus};
            const auto comps = side_components(m, l);
            if (comps.empty()) continue;
            AffineForm gamma_part{0, 0};
            AffineForm full_part{0, 0};
            for (const auto& sc : comps) {
                if (!gamma.contains(sc.parent) && !cores.count(sc.parent))
                    throw ModelError("weights: side component parent '" +
                                     sc.parent + "' carries no sigma label");
                const AffineForm both = sig.at(SideLabel{sc.parent, true}) +
                                        sig.at(SideLabel{sc.parent, false});
                full_part = full_part + both / Rational(sc.degree);
                if (gamma.contains(sc.parent))
                    gamma_part = gamma_part + both / Rational(sc.degree);
            }
            if (!image || !fdeg)
                throw ModelError("weights: no forward image for '" + id + "'");
            const AffineForm forward =
                sig.at(SideLabel{*image, plus}) / Rational(*fdeg);
            if (gamma.contains(*image)) gamma_part = gamma_part + forward;
            out.push_back(Inequality{"side-budget:" + l.str(), gamma_part,
                                     sig.at(l), true});
            AffineForm grotzsch = full_part + forward;
            for (std::size_t k = 0; k < comps.size(); ++k) {
                const std::string gap =
                    id + (plus ? ":+:" : ":-:") + std::to_string(k);
                grotzsch = grotzsch + AffineForm{0, m.grotzsch_constant(gap)};
            }
            out.push_back(
                Inequality{"grotzsch:" + l.str(), grotzsch, sig.at(l), true});
        }
    }
    return out;
}

ThresholdCertificate find_t_threshold(const CoverModel& m,
                                      const Multicurve& gamma,
                                      const RhoAssignment& rho,
                                      const std::map<std::string, Rational>& v) {
    const SigmaFunction sig = sigma(m, gamma, rho, v);
    ThresholdCertificate cert;
    cert.inequalities = assemble_inequalities(m, gamma, rho, v, sig);
    cert.t_star = 0;
    for (const auto& ineq : cert.inequalities) {
        const AffineForm diff = ineq.rhs - ineq.lhs;  // holds iff diff(t) >= 0
        if (diff.a < 0)
            throw ModelError("find_t_threshold: negative slope in '" +
                             ineq.name + "'");
        if (diff.a == 0) {
            if (diff.b < 0 || (diff.b == 0 && ineq.strict))
                throw ModelError("find_t_threshold: constant-false '" +
                                 ineq.name + "'");
            continue;
        }
        const Rational bound = -diff.b / diff.a;
        if (bound > cert.t_star) {
            cert.t_star = bound;
            cert.binding = ineq.name;
        }
    }
    const Rational probe = cert.t_star + 1;
    cert.verified = std::all_of(
        cert.inequalities.begin(), cert.inequalities.end(),
        [&](const Inequality& i) { return i.holds_at(probe); });
    return cert;
}

bool GrotzschReport::all_ok() const {
    return std::all_of(lines.begin(), lines.end(),
                       [](const GrotzschLine& l) { return l.ok; });
}

std::string GrotzschReport::to_string() const {
    std::ostringstream os;
    os << "t = " << format_rational(t) << '\n';
    for (const auto& l : lines)
        os << (l.ok ? "PASS" : "FAIL") << ' ' << l.name << ": "
           << format_rational(l.lhs) << " < " << format_rational(l.rhs) << '\n';
    return os.str();
}

GrotzschReport certify_grotzsch(const CoverModel& m, const Multicurve& gamma,
                                const RhoAssignment& rho,
                                const std::map<std::string, Rational>& v,
                                const SigmaFunction& sig, const Rational& t) {
    GrotzschReport rep;
    rep.t = t;
    for (const auto& ineq : assemble_inequalities(m, gamma, rho, v, sig)) {
        if (ineq.name.rfind("grotzsch:", 0) != 0) continue;
        GrotzschLine line;
        line.name = ineq.name;
        line.lhs = ineq.lhs.eval(t);
        line.rhs = ineq.rhs.eval(t);
        line.ok = line.lhs < line.rhs;
        rep.lines.push_back(std::move(line));
    }
    return rep;
}

}  // namespace oforge
