#include "oforge/multicurve.hpp"

#include "oforge/spectral.hpp"

#include <algorithm>
#include <set>

namespace oforge {

Multicurve Multicurve::of(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return Multicurve{std::move(ids)};
}

bool Multicurve::contains(const std::string& id) const {
    return std::binary_search(curves.begin(), curves.end(), id);
}

RatMatrix transition_matrix(const CoverModel& m, const Multicurve& gamma) {
    const std::size_t n = gamma.size();
    RatMatrix w(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto* comps = m.pullback_of(gamma.curves[j]);
        if (!m.curve(gamma.curves[j]))
            throw ModelError("transition_matrix: unknown curve id '" +
                             gamma.curves[j] + "'");
        if (!comps) continue;
        for (const auto& c : *comps) {
            if (c.target != TargetKind::Curve) continue;
            auto it = std::lower_bound(gamma.curves.begin(), gamma.curves.end(),
                                       c.target_curve);
            if (it == gamma.curves.end() || *it != c.target_curve) continue;
            const std::size_t i =
                static_cast<std::size_t>(it - gamma.curves.begin());
            w.at(i, j) += Rational(1, c.degree);
        }
    }
    return w;
}

bool is_stable(const CoverModel& m, const Multicurve& gamma) {
    for (const auto& id : gamma.curves) {
        const auto* comps = m.pullback_of(id);
        if (!comps) continue;
        for (const auto& c : *comps) {
            if (c.target != TargetKind::Curve) continue;
            if (m.is_core(c.target_curve)) continue;
            if (!gamma.contains(c.target_curve)) return false;
        }
    }
    return true;
}

namespace {

// Interior curve classes among the preimage components of `id`.
std::vector<std::string> interior_targets(const CoverModel& m,
                                          const std::string& id) {
    const auto* comps = m.pullback_of(id);
    if (!comps)
        throw ModelError("curve universe not pullback-closed: no pullback "
                         "entry for '" + id + "'");
    std::vector<std::string> out;
    for (const auto& c : *comps)
        if (c.target == TargetKind::Curve && !m.is_core(c.target_curve))
            out.push_back(c.target_curve);
    return out;
}

}  // namespace

std::vector<std::vector<std::string>> gamma_strata(const CoverModel& m) {
    std::vector<std::vector<std::string>> strata;
    std::set<std::string> seen;
    const std::set<std::string> roots = m.gamma0();
    std::vector<std::string> frontier(roots.begin(), roots.end());
    while (!frontier.empty()) {
        std::set<std::string> next;
        for (const auto& id : frontier)
            for (const auto& t : interior_targets(m, id))
                if (!seen.count(t)) next.insert(t);
        frontier.assign(next.begin(), next.end());
        seen.insert(next.begin(), next.end());
        if (!frontier.empty()) strata.emplace_back(frontier);
    }
    return strata;
}

Multicurve generate_gamma(const CoverModel& m) {
    std::vector<std::string> all;
    for (const auto& s : gamma_strata(m)) all.insert(all.end(), s.begin(), s.end());
    return Multicurve::of(std::move(all));
}

RefinementReport essential_refinement(const CoverModel& m, const Multicurve& c0,
                                      double tol) {
    if (!is_stable(m, c0))
        throw ModelError("essential_refinement: multicurve is not stable");
    RefinementReport rep;
    rep.lambda_before = power_lambda(transition_matrix(m, c0), tol);
    Multicurve current = c0;
    for (;;) {
        std::vector<std::string> next;
        for (const auto& id : current.curves) {
            const auto* comps = m.pullback_of(id);
            if (!comps) continue;
            for (const auto& c : *comps)
                if (c.target == TargetKind::Curve && !m.is_core(c.target_curve))
                    next.push_back(c.target_curve);
        }
        Multicurve refined = Multicurve::of(std::move(next));
        if (refined == current) break;
        current = std::move(refined);
    }
    rep.refined = std::move(current);
    rep.lambda_after = power_lambda(transition_matrix(m, rep.refined), tol);
    rep.lambda_preserved =
        std::abs(rep.lambda_after - rep.lambda_before) <= 2 * tol;
    return rep;
}

std::vector<StableEntry> enumerate_stable(const CoverModel& m, std::size_t cap,
                                          double tol) {
    std::vector<std::string> universe;
    for (const auto& c : m.curves)
        if (c.kind == CurveKind::Interior) universe.push_back(c.id);
    std::sort(universe.begin(), universe.end());
    if (universe.size() > cap)
        throw ModelError("enumerate_stable: " + std::to_string(universe.size()) +
                         " interior curves exceed cap " + std::to_string(cap));
    std::vector<StableEntry> out;
    const std::size_t masks = std::size_t(1) << universe.size();
    for (std::size_t mask = 0; mask < masks; ++mask) {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (mask & (std::size_t(1) << i)) ids.push_back(universe[i]);
        Multicurve mc = Multicurve::of(std::move(ids));
        if (!is_stable(m, mc)) continue;
        const double lambda = power_lambda(transition_matrix(m, mc), tol);
        out.push_back(StableEntry{std::move(mc), lambda});
    }
    return out;
}

}  // namespace oforge
