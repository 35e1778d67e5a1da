#include "oforge/decompose.hpp"
#include "oforge/model.hpp"
#include "oforge/multicurve.hpp"
#include "oforge/reduction.hpp"
#include "oforge/spectral.hpp"
#include "oforge/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::ordered_json;
using namespace oforge;

int log_level() {
    const char* env = std::getenv("OBSTRUCTION_FORGE_LOG");
    if (!env || !*env) return 0;
    return std::atoi(env) > 0 ? std::atoi(env) : 1;
}

void log_line(const std::string& msg) {
    if (log_level() > 0) std::cerr << "[oforge] " << msg << '\n';
}

CoverModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot read model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    log_line("parsing " + path);
    return parse_model(buf.str());
}

ordered_json matrix_json(const RatMatrix& w) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < w.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < w.cols(); ++j)
            row.push_back(format_rational(w.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct Options {
    std::string model_path;
    double tol = 1e-9;
    std::size_t cap = 16;
    std::string output = "text";
    bool dot = false;
    std::string curves;  // reduce only
};

int run_validate(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    const ValidationReport rep = validate_model(m);
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "validate";
        j["all_passed"] = rep.all_passed();
        j["checks"] = ordered_json::array();
        for (const auto& c : rep.checks)
            j["checks"].push_back({{"name", c.name},
                                   {"passed", c.passed},
                                   {"location", c.location},
                                   {"detail", c.detail}});
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << rep.to_string();
        std::cout << (rep.all_passed() ? "all checks passed\n"
                                       : "validation failed\n");
    }
    return rep.all_passed() ? 0 : 1;
}

int run_gamma(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    const Multicurve gamma = generate_gamma(m);
    const RatMatrix w = transition_matrix(m, gamma);
    const bool contracting = is_contracting(w);
    std::vector<Rational> v;
    if (contracting) v = contraction_vector(w);
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "gamma";
        j["curves"] = gamma.curves;
        j["transition_matrix"] = matrix_json(w);
        j["lambda"] = power_lambda(w, opt.tol);
        j["contracting"] = contracting;
        if (contracting) {
            ordered_json vec = ordered_json::array();
            for (const auto& x : v) vec.push_back(format_rational(x));
            j["contraction_vector"] = vec;
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "gamma:";
        for (const auto& id : gamma.curves) std::cout << ' ' << id;
        if (gamma.empty()) std::cout << " (empty)";
        std::cout << '\n';
        if (!gamma.empty())
            std::cout << "transition matrix:\n" << w.to_string() << '\n';
        std::cout << "lambda estimate: " << power_lambda(w, opt.tol) << '\n';
        std::cout << "contracting (exact): " << (contracting ? "yes" : "no")
                  << '\n';
        if (contracting && !v.empty()) {
            std::cout << "contraction vector:";
            for (const auto& x : v) std::cout << ' ' << format_rational(x);
            std::cout << '\n';
        }
    }
    return contracting ? 0 : 1;
}

int run_obstruction(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    const auto entries = enumerate_stable(m, opt.cap, opt.tol);
    const StableEntry* witness = nullptr;
    for (const auto& e : entries)
        if (!is_contracting(transition_matrix(m, e.curve))) {
            witness = &e;
            break;
        }
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "obstruction";
        j["obstructed"] = witness != nullptr;
        j["stable_count"] = entries.size();
        if (witness) {
            j["witness"] = witness->curve.curves;
            j["witness_lambda"] = witness->lambda;
        }
        std::cout << j.dump(2) << '\n';
    } else if (witness) {
        std::cout << "obstructed; witness:";
        for (const auto& id : witness->curve.curves) std::cout << ' ' << id;
        std::cout << " (lambda ~ " << witness->lambda << ")\n";
    } else {
        if (entries.size() == 1)
            std::cout << "unobstructed; only stable multicurve is empty\n";
        else
            std::cout << "unobstructed; all " << entries.size()
                      << " stable multicurves are contracting\n";
    }
    return witness ? 1 : 0;
}

int run_decompose(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    if (opt.dot || opt.output == "dot") {
        std::cout << dot_export(m);
        return 0;
    }
    const DecompositionReport rep = classify(m, opt.tol);
    bool ok = rep.siegel_bounds_ok && rep.no_2222_signature;
    if (rep.gamma_contracting && !rep.no_homeomorphism_kinds) ok = false;
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "decompose";
        j["cycles"] = ordered_json::array();
        for (const auto& r : rep.renorms) {
            ordered_json c;
            c["representative"] = r.base_cycle.representative;
            c["period"] = r.base_cycle.period;
            c["members"] = r.base_cycle.members;
            c["kind"] = to_string(r.kind);
            c["degree"] = r.degree;
            c["marked_points"] = r.marked_points;
            c["rotation_disks"] = ordered_json::array();
            for (const auto& d : r.rotation_disks)
                c["rotation_disks"].push_back(
                    {{"source_cycle", d.source_cycle},
                     {"period", d.period},
                     {"rotation_number", format_rational(d.rotation_number)}});
            j["cycles"].push_back(std::move(c));
        }
        j["siegel_count"] = rep.siegel_count;
        j["siegel_bounds_ok"] = rep.siegel_bounds_ok;
        j["gamma_contracting"] = rep.gamma_contracting;
        j["no_homeomorphism_kinds"] = rep.no_homeomorphism_kinds;
        j["ok"] = ok;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << rep.to_string();
    }
    return ok ? 0 : 1;
}

int run_reduce(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    std::vector<std::string> ids;
    std::stringstream ss(opt.curves);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ids.push_back(tok);
    if (ids.empty() && !opt.curves.empty())
        throw ModelError("malformed multicurve argument '" + opt.curves + "'");
    const Multicurve c = Multicurve::of(ids);
    const ReductionReport rep = verify_reduction_identity(m, c, opt.tol);
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "reduce";
        j["multicurve"] = c.curves;
        j["block_triangular"] = rep.block_triangular_ok;
        j["tail_block_nilpotent"] = rep.cs_nilpotent;
        j["cycles"] = ordered_json::array();
        for (const auto& cc : rep.cycles)
            j["cycles"].push_back({{"representative", cc.representative},
                                   {"period", cc.period},
                                   {"block_structure_ok", cc.block_structure_ok},
                                   {"power_block_diagonal_ok",
                                    cc.power_block_diagonal_ok},
                                   {"composed_matches_blocks",
                                    cc.composed_matches_blocks},
                                   {"lambda_sigma", cc.lambda_sigma},
                                   {"contribution", cc.contribution}});
        j["lambda_c"] = rep.lambda_c;
        j["lambda_c_gamma"] = rep.lambda_c_gamma;
        j["max_formula"] = rep.max_formula;
        j["identity_ok"] = rep.identity_ok;
        j["all_ok"] = rep.all_ok();
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << rep.to_string();
    }
    return rep.all_ok() ? 0 : 1;
}

int run_combine(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    const CombinationReport rep = check_combination(m, opt.cap, opt.tol);
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "combine";
        j["direct_obstructed"] = rep.lhs_obstructed;
        if (rep.lhs_witness) j["direct_witness"] = rep.lhs_witness->curves;
        j["decomposed_obstructed"] = rep.rhs_obstructed;
        if (!rep.rhs_witness.empty()) j["decomposed_witness"] = rep.rhs_witness;
        j["agree"] = rep.agree;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << rep.to_string();
    }
    return rep.agree && !rep.lhs_obstructed ? 0 : 1;
}

int run_certify(const Options& opt) {
    const CoverModel m = load(opt.model_path);
    const Multicurve gamma = generate_gamma(m);
    if (!is_contracting(transition_matrix(m, gamma))) {
        std::cout << "cannot certify: generated multicurve is not contracting\n";
        return 1;
    }
    const auto v = contraction_vector_map(m, gamma);
    const RhoAssignment rho = solve_rho(m, gamma, v);
    const ThresholdCertificate cert = find_t_threshold(m, gamma, rho, v);
    const SigmaFunction sig = sigma(m, gamma, rho, v);
    const GrotzschReport grep =
        certify_grotzsch(m, gamma, rho, v, sig, cert.t_star + 1);
    const bool ok = cert.verified && grep.all_ok();
    if (opt.output == "structured") {
        ordered_json j;
        j["command"] = "certify";
        j["gamma"] = gamma.curves;
        ordered_json rj = ordered_json::object();
        for (const auto& [label, value] : rho.rho)
            rj[label.str()] = format_rational(value);
        j["rho"] = std::move(rj);
        j["t_star"] = format_rational(cert.t_star);
        j["binding"] = cert.binding;
        j["verified_at_t_star_plus_1"] = cert.verified;
        j["grotzsch_all_ok"] = grep.all_ok();
        j["ok"] = ok;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "rho:\n";
        for (const auto& [label, value] : rho.rho)
            std::cout << "  " << label.str() << " = " << format_rational(value)
                      << '\n';
        std::cout << "t* = " << format_rational(cert.t_star);
        if (!cert.binding.empty()) std::cout << " (binding: " << cert.binding << ")";
        std::cout << '\n';
        std::cout << "certified at t*+1: " << (cert.verified ? "yes" : "NO")
                  << '\n';
        std::cout << grep.to_string();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial curve-system analyzer for branched covers "
                 "with rotation annuli"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool with_dot) {
        sub->add_option("model", opt.model_path, "model file")->required();
        sub->add_option("--tol", opt.tol, "eigenvalue tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--cap", opt.cap, "enumeration cap")
            ->check(CLI::PositiveNumber);
        sub->add_option("--output", opt.output, "output format")
            ->check(CLI::IsMember({"text", "structured", "dot"}));
        if (with_dot) sub->add_flag("--dot", opt.dot, "emit a Graphviz digraph");
    };

    auto* validate = app.add_subcommand("validate", "run all model checks");
    add_common(validate, false);
    auto* gamma = app.add_subcommand(
        "gamma", "generate the canonical multicurve and its certificate");
    add_common(gamma, false);
    auto* obstruction = app.add_subcommand(
        "obstruction", "search the stable multicurves for an obstruction");
    add_common(obstruction, false);
    auto* decompose =
        app.add_subcommand("decompose", "piece dynamics and renormalizations");
    add_common(decompose, true);
    auto* reduce = app.add_subcommand(
        "reduce", "verify the eigenvalue reduction for a multicurve");
    add_common(reduce, false);
    reduce->add_option("curves", opt.curves,
                       "comma-separated multicurve member ids");
    auto* combine = app.add_subcommand(
        "combine", "compare direct and decomposed obstruction checks");
    add_common(combine, false);
    auto* certify =
        app.add_subcommand("certify", "weight pipeline and threshold");
    add_common(certify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (validate->parsed()) return run_validate(opt);
        if (gamma->parsed()) return run_gamma(opt);
        if (obstruction->parsed()) return run_obstruction(opt);
        if (decompose->parsed()) return run_decompose(opt);
        if (reduce->parsed()) return run_reduce(opt);
        if (combine->parsed()) return run_combine(opt);
        if (certify->parsed()) return run_certify(opt);
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
