#include "oforge/reduction.hpp"

#include "oforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oforge {

SplitMulticurve split_multicurve(const CoverModel& m, const Multicurve& c) {
    if (!is_stable(m, c))
        throw ModelError("split_multicurve: multicurve is not stable");
    const Multicurve gamma = generate_gamma(m);
    const PieceDynamics dyn = piece_dynamics(m);

    SplitMulticurve split;
    std::vector<std::string> in_gamma, in_tails;
    std::map<std::string, std::vector<std::vector<std::string>>> per_cycle;
    for (const auto& id : c.curves) {
        if (gamma.contains(id)) {
            in_gamma.push_back(id);
            continue;
        }
        const CurveClass* cc = m.curve(id);
        if (!cc || cc->kind != CurveKind::Interior)
            throw ModelError("split_multicurve: unknown or core member '" + id +
                             "'");
        if (m.is_boundary_curve(id))
            throw ModelError("split_multicurve: member '" + id +
                             "' lies on a piece boundary");
        const PieceCycle* home = nullptr;
        std::size_t step = 0;
        for (const auto& cycle : dyn.cycles) {
            auto it = std::find(cycle.members.begin(), cycle.members.end(),
                                cc->piece);
            if (it != cycle.members.end()) {
                home = &cycle;
                step = static_cast<std::size_t>(it - cycle.members.begin());
                break;
            }
        }
        if (!home) {
            in_tails.push_back(id);
            continue;
        }
        auto& steps = per_cycle[home->representative];
        steps.resize(static_cast<std::size_t>(home->period));
        steps[step].push_back(id);
    }
    split.c_gamma = Multicurve::of(std::move(in_gamma));
    split.c_s = Multicurve::of(std::move(in_tails));
    for (auto& [rep, steps] : per_cycle) {
        std::vector<Multicurve> out;
        for (auto& s : steps) out.push_back(Multicurve::of(std::move(s)));
        split.sigma[rep] = std::move(out);
    }
    return split;
}

namespace {

// Transition matrix of the composed return map over the given curve ids.
RatMatrix composed_transition(const RenormalizedModel& r,
                              const std::vector<std::string>& ids) {
    RatMatrix w(ids.size(), ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
        const std::vector<PreimageComponent>* comps = nullptr;
        for (const auto& [id, list] : r.pullback)
            if (id == ids[j]) comps = &list;
        if (!comps)
            throw ModelError("composed pullback missing for '" + ids[j] + "'");
        for (const auto& c : *comps) {
            if (c.target != TargetKind::Curve) continue;
            auto it = std::find(ids.begin(), ids.end(), c.target_curve);
            if (it == ids.end()) continue;
            w.at(static_cast<std::size_t>(it - ids.begin()), j) +=
                Rational(1, c.degree);
        }
    }
    return w;
}

RatMatrix submatrix(const RatMatrix& w, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
    RatMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out.at(i, j) = w.at(rows[i], cols[j]);
    return out;
}

}  // namespace

bool ReductionReport::all_ok() const {
    if (!block_triangular_ok || !cs_nilpotent || !identity_ok) return false;
    for (const auto& c : cycles)
        if (!c.block_structure_ok || !c.power_block_diagonal_ok ||
            !c.composed_matches_blocks)
            return false;
    return true;
}

ReductionReport verify_reduction_identity(const CoverModel& m,
                                          const Multicurve& c, double tol) {
    ReductionReport rep;
    rep.split = split_multicurve(m, c);
    const PieceDynamics dyn = piece_dynamics(m);
    const RatMatrix w = transition_matrix(m, c);
    const double ptol = tol / 8;

    // Reordered index: C_Gamma, C_s, then each cycle step by step.
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < c.curves.size(); ++i) pos[c.curves[i]] = i;
    std::vector<std::size_t> order;
    std::vector<std::size_t> block;  // block id per reordered index
    auto push_block = [&](const std::vector<std::string>& ids, std::size_t b) {
        for (const auto& id : ids) {
            order.push_back(pos.at(id));
            block.push_back(b);
        }
    };
    push_block(rep.split.c_gamma.curves, 0);
    push_block(rep.split.c_s.curves, 1);
    std::size_t next_block = 2;
    std::vector<std::pair<std::string, std::size_t>> cycle_blocks;
    for (const auto& [rep_id, steps] : rep.split.sigma) {
        cycle_blocks.emplace_back(rep_id, next_block);
        for (const auto& s : steps) push_block(s.curves, next_block);
        ++next_block;
    }

    RatMatrix wo(order.size(), order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = 0; j < order.size(); ++j)
            wo.at(i, j) = w.at(order[i], order[j]);

    rep.block_triangular_ok = true;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = 0; j < order.size(); ++j)
            if (block[i] > block[j] && wo.at(i, j) != 0)
                rep.block_triangular_ok = false;

    {
        std::vector<std::size_t> cs_idx;
        for (const auto& id : rep.split.c_s.curves) cs_idx.push_back(pos.at(id));
        rep.cs_nilpotent = is_nilpotent(submatrix(w, cs_idx, cs_idx));
    }

    rep.lambda_c = power_lambda(w, ptol);
    rep.lambda_c_gamma =
        power_lambda(transition_matrix(m, rep.split.c_gamma), ptol);
    rep.max_formula = rep.lambda_c_gamma;

    for (const auto& [rep_id, steps] : rep.split.sigma) {
        const PieceCycle* cycle = nullptr;
        for (const auto& cy : dyn.cycles)
            if (cy.representative == rep_id) cycle = &cy;
        if (!cycle) throw ModelError("split cycle not found: " + rep_id);
        const std::size_t p = static_cast<std::size_t>(cycle->period);

        CycleCheck check;
        check.representative = rep_id;
        check.period = cycle->period;

        std::vector<std::vector<std::size_t>> step_idx(p);
        for (std::size_t k = 0; k < p; ++k)
            for (const auto& id : steps[k].curves)
                step_idx[k].push_back(pos.at(id));

        // Step blocks may only sit one position off the cyclic diagonal.
        check.block_structure_ok = true;
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) {
                if (b == (a + 1) % p) continue;
                for (std::size_t i : step_idx[a])
                    for (std::size_t j : step_idx[b])
                        if (w.at(i, j) != 0) check.block_structure_ok = false;
            }

        std::vector<RatMatrix> blocks(p);
        for (std::size_t k = 0; k < p; ++k)
            blocks[k] = submatrix(w, step_idx[k], step_idx[(k + 1) % p]);

        // W_nu^p must be block diagonal with the cyclic products on the
        // diagonal.
        std::vector<std::size_t> all_idx;
        for (const auto& s : step_idx)
            all_idx.insert(all_idx.end(), s.begin(), s.end());
        RatMatrix wn = submatrix(w, all_idx, all_idx);
        RatMatrix wp = RatMatrix::identity(wn.rows());
        for (std::size_t k = 0; k < p; ++k) wp = wp * wn;
        check.power_block_diagonal_ok = true;
        std::size_t row_base = 0;
        for (std::size_t a = 0; a < p; ++a) {
            RatMatrix prod = RatMatrix::identity(step_idx[a].size());
            for (std::size_t k = 0; k < p; ++k)
                prod = prod * blocks[(a + k) % p];
            std::size_t col_base = 0;
            for (std::size_t b = 0; b < p; ++b) {
                for (std::size_t i = 0; i < step_idx[a].size(); ++i)
                    for (std::size_t j = 0; j < step_idx[b].size(); ++j) {
                        const Rational& got = wp.at(row_base + i, col_base + j);
                        const Rational want =
                            (a == b) ? prod.at(i, j) : Rational(0);
                        if (got != want) check.power_block_diagonal_ok = false;
                    }
                col_base += step_idx[b].size();
            }
            row_base += step_idx[a].size();
        }

        RatMatrix round_trip = RatMatrix::identity(step_idx[0].size());
        for (std::size_t k = 0; k < p; ++k) round_trip = round_trip * blocks[k];
        check.lambda_sigma = power_lambda(round_trip, ptol);
        check.contribution =
            p == 1 ? check.lambda_sigma
                   : std::pow(check.lambda_sigma, 1.0 / double(p));

        const RenormalizedModel ren = renormalize(m, *cycle);
        const RatMatrix composed = composed_transition(ren, steps[0].curves);
        check.composed_matches_blocks = (composed == round_trip);

        rep.max_formula = std::max(rep.max_formula, check.contribution);
        rep.cycles.push_back(std::move(check));
    }

    rep.identity_ok = std::abs(rep.lambda_c - rep.max_formula) <= tol;
    return rep;
}

std::string ReductionReport::to_string() const {
    std::ostringstream os;
    auto flag = [](bool b) { return b ? "PASS" : "FAIL"; };
    os << "block-triangular: " << flag(block_triangular_ok) << '\n';
    os << "tail-block-nilpotent: " << flag(cs_nilpotent) << '\n';
    for (const auto& c : cycles) {
        os << "cycle " << c.representative << " (period " << c.period << "): "
           << "off-diagonal " << flag(c.block_structure_ok) << ", power "
           << flag(c.power_block_diagonal_ok) << ", composed "
           << flag(c.composed_matches_blocks) << ", lambda " << c.lambda_sigma
           << ", contribution " << c.contribution << '\n';
    }
    os << "lambda(C) = " << lambda_c << ", lambda(C_Gamma) = " << lambda_c_gamma
       << ", max formula = " << max_formula << ": " << flag(identity_ok)
       << '\n';
    return os.str();
}

CombinationReport check_combination(const CoverModel& m, std::size_t cap,
                                    double tol) {
    CombinationReport rep;
    for (const auto& entry : enumerate_stable(m, cap, tol)) {
        if (!is_contracting(transition_matrix(m, entry.curve))) {
            rep.lhs_obstructed = true;
            rep.lhs_witness = entry.curve;
            break;
        }
    }

    const Multicurve gamma = generate_gamma(m);
    if (!is_contracting(transition_matrix(m, gamma))) {
        rep.rhs_obstructed = true;
        rep.rhs_witness = "gamma";
    } else {
        const PieceDynamics dyn = piece_dynamics(m);
        for (const auto& cycle : dyn.cycles) {
            if (rep.rhs_obstructed) break;
            const RenormalizedModel ren = renormalize(m, cycle);
            const auto& universe = ren.curve_universe;
            if (universe.size() > cap)
                throw ModelError("check_combination: renormalized universe "
                                 "exceeds cap");
            const std::size_t masks = std::size_t(1) << universe.size();
            for (std::size_t mask = 0; mask < masks && !rep.rhs_obstructed;
                 ++mask) {
                std::vector<std::string> ids;
                for (std::size_t i = 0; i < universe.size(); ++i)
                    if (mask & (std::size_t(1) << i)) ids.push_back(universe[i]);
                // Stability with respect to the composed pullback.
                bool stable = true;
                for (const auto& id : ids) {
                    for (const auto& [pid, comps] : ren.pullback) {
                        if (pid != id) continue;
                        for (const auto& c : comps)
                            if (c.target == TargetKind::Curve &&
                                std::find(ids.begin(), ids.end(),
                                          c.target_curve) == ids.end())
                                stable = false;
                    }
                }
                if (!stable) continue;
                if (!is_contracting(composed_transition(ren, ids))) {
                    rep.rhs_obstructed = true;
                    std::string desc = cycle.representative + ":";
                    for (const auto& id : ids) desc += " " + id;
                    rep.rhs_witness = desc;
                }
            }
        }
    }
    rep.agree = rep.lhs_obstructed == rep.rhs_obstructed;
    return rep;
}

std::string CombinationReport::to_string() const {
    std::ostringstream os;
    os << "direct: " << (lhs_obstructed ? "obstructed" : "unobstructed");
    if (lhs_witness) {
        os << " [witness:";
        for (const auto& id : lhs_witness->curves) os << ' ' << id;
        os << ']';
    }
    os << '\n';
    os << "decomposed: " << (rhs_obstructed ? "obstructed" : "unobstructed");
    if (!rhs_witness.empty()) os << " [witness: " << rhs_witness << ']';
    os << '\n';
    os << "agreement: " << (agree ? "yes" : "NO") << '\n';
    return os.str();
}

}  // namespace oforge
