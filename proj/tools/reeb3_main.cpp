// reeb3 — command-line front end.
//
// Decides whether a unit vector field sin(theta(z)) E1 + cos(theta(z)) E2 on
// the flat 3-torus is a positive rescaling of a Reeb vector field, and when
// it is, synthesizes the contact form together with a numerically verified
// certificate. Subcommands cover the decision, the synthesis, volume
// identities, straightening diffeomorphisms, screw-equivariant synthesis,
// the open-manifold gallery and the randomized wedge-identity suite.
//
// Exit codes: 0 accepted/success, 2 rejected (witness in report.json),
// 3 numerically borderline, 1 operational error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reeb3/circle_map.hpp"
#include "reeb3/criterion.hpp"
#include "reeb3/diffeo.hpp"
#include "reeb3/forms_trig.hpp"
#include "reeb3/forms_z.hpp"
#include "reeb3/open_models.hpp"
#include "reeb3/report.hpp"
#include "reeb3/solver.hpp"
#include "reeb3/synthesis.hpp"
#include "reeb3/theta_expr.hpp"

using namespace reeb3;

namespace {

struct CommonOptions {
    std::string theta_expr;
    std::string theta_csv;
    int grid = 2048;
    double delta = kDefaultDelta;
    double eta = kDefaultEta;
    double tol = kDecisionTol;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_theta) {
    auto* expr = cmd->add_option("--theta", opt.theta_expr,
                                 "angle profile, e.g. \"z + 1.5*sin(z)\"");
    auto* csv = cmd->add_option("--theta-csv", opt.theta_csv,
                                "CSV file with columns z,theta (z increasing in [0, 2*pi))");
    expr->excludes(csv);
    (void)needs_theta; // presence is validated in load_theta
    cmd->add_option("--grid", opt.grid, "grid size N (default 2048)")
        ->check(CLI::Range(kMinGridSize, 1 << 20));
    cmd->add_option("--delta", opt.delta, "tube margin delta (default pi/64)");
    cmd->add_option("--eta", opt.eta, "slope floor eta (default 1e-3)");
    cmd->add_option("--tol", opt.tol, "decision tolerance (default 1e-7)");
    cmd->add_option("--out", opt.out_dir, "output directory (default .)");
    cmd->add_option("--seed", opt.seed, "seed for randomized suites (default 0)");
}

CircleMap load_theta_csv(const std::string& path, int grid) {
    std::ifstream in(path);
    require(bool(in), ErrorCode::InvalidInput, "cannot open " + path);
    std::vector<double> zs, ths;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (std::isalpha(static_cast<unsigned char>(line[line.find_first_not_of(" \t")])))
            continue; // header row
        std::istringstream row(line);
        double z, th;
        char comma;
        if (!(row >> z >> comma >> th))
            fail(ErrorCode::InvalidInput, "malformed CSV row: " + line);
        zs.push_back(z);
        ths.push_back(th);
    }
    require(zs.size() >= 65, ErrorCode::InvalidInput, "need at least 65 CSV samples");
    for (std::size_t j = 1; j < zs.size(); ++j)
        require(zs[j] > zs[j - 1], ErrorCode::InvalidInput, "z column must increase strictly");
    require(zs.front() >= 0.0 && zs.back() < kTwoPi, ErrorCode::InvalidInput,
            "z column must lie in [0, 2*pi)");

    // unwrap the sampled values, close the period, then resample onto the
    // uniform grid through the monotone-cubic interpolant of the lift
    std::vector<double> closed_z = zs, closed_th = ths;
    closed_z.push_back(zs.front() + kTwoPi);
    closed_th.push_back(ths.front());
    std::vector<double> lift(closed_th.size());
    lift[0] = closed_th[0];
    for (std::size_t j = 1; j < closed_th.size(); ++j) {
        double d = std::fmod(closed_th[j] - closed_th[j - 1], kTwoPi);
        if (d >= kPi) d -= kTwoPi;
        if (d < -kPi) d += kTwoPi;
        if (std::abs(d) >= kPi / 2.0)
            fail(ErrorCode::AmbiguousLift, "CSV jump too large at row " + std::to_string(j));
        lift[j] = lift[j - 1] + d;
    }
    const double gap = lift.back() - lift.front();
    const double deg = std::round(gap / kTwoPi);
    require(std::abs(gap - kTwoPi * deg) < kPi / 2.0, ErrorCode::AmbiguousLift,
            "CSV endpoint gap not near a multiple of 2*pi");
    lift.back() = lift.front() + kTwoPi * deg;

    // monotone-cubic interpolation on the (non-uniform) nodes
    std::vector<double> slope(lift.size(), 0.0);
    auto sec = [&](std::size_t j) {
        return (lift[j + 1] - lift[j]) / (closed_z[j + 1] - closed_z[j]);
    };
    for (std::size_t j = 0; j < lift.size(); ++j) {
        const std::size_t nseg = lift.size() - 1;
        const double sl = sec((j + nseg - 1) % nseg);
        const double sr = sec(j % nseg);
        slope[j] = (sl * sr <= 0.0) ? 0.0 : 2.0 * sl * sr / (sl + sr);
    }
    std::vector<double> samples(std::size_t(grid) + 1);
    std::size_t cell = 0;
    for (int j = 0; j <= grid; ++j) {
        double t = kTwoPi * double(j) / double(grid) + closed_z.front();
        if (t >= closed_z.back()) t = closed_z.back();
        while (cell + 2 < closed_z.size() && closed_z[cell + 1] < t) ++cell;
        const double h = closed_z[cell + 1] - closed_z[cell];
        samples[std::size_t(j)] = hermite(closed_z[cell], h, lift[cell], lift[cell + 1],
                                          slope[cell], slope[cell + 1], t);
    }
    samples[std::size_t(grid)] = samples[0] + kTwoPi * deg;
    return CircleMap(std::move(samples), 1e-9);
}

CircleMap load_theta(const CommonOptions& opt) {
    require(!opt.theta_expr.empty() || !opt.theta_csv.empty(), ErrorCode::InvalidInput,
            "provide --theta or --theta-csv");
    if (!opt.theta_expr.empty()) return parse_theta(opt.theta_expr).sample(opt.grid);
    return load_theta_csv(opt.theta_csv, opt.grid);
}

Json decision_json(const ReebDecision& dec) {
    Json j = Json::object();
    j.set("verdict", verdict_name(dec.verdict));
    j.set("degree", std::int64_t(dec.degree));
    j.set("max_drawdown", dec.max_drawdown);
    j.set("margin", dec.margin);
    if (!dec.reason.empty()) j.set("reason", dec.reason);
    if (dec.witness) {
        Json w = Json::object();
        w.set("a", dec.witness->a);
        w.set("b", dec.witness->b);
        w.set("drop", dec.witness->drop);
        j.set("witness", std::move(w));
    }
    return j;
}

Json certificate_json(const ReebCertificate& cert) {
    Json j = Json::object();
    j.set("w", std::int64_t(cert.winding));
    j.set("n_value", cert.n_value);
    j.set("delta", cert.phi.delta);
    j.set("eta", cert.phi.eta);
    j.set("perturbed_input", cert.perturbed_input);
    Json res = Json::object();
    res.set("I_residual", cert.residuals.I_residual);
    res.set("f_periodicity", cert.residuals.f_periodicity);
    res.set("reeb_alpha", cert.residuals.reeb_alpha);
    res.set("reeb_contraction", cert.residuals.reeb_contraction);
    res.set("min_contact_density", cert.residuals.min_contact_density);
    j.set("residuals", std::move(res));
    return j;
}

struct RunOutput {
    Json report = Json::object();
    std::vector<ResidualEntry> residual_table;
    int exit_code = 0;

    std::vector<double> z, theta, phi, f, g, density;
};

void fill_curves_from_theta(RunOutput& out, const CircleMap& theta) {
    const int n = theta.grid_size();
    out.z.resize(n + 1);
    out.theta.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        out.z[j] = theta.node(j);
        out.theta[j] = theta.samples()[j];
    }
    out.density = contact_density(angle_one_form(theta));
}

void fill_curves_from_certificate(RunOutput& out, const ReebCertificate& cert) {
    fill_curves_from_theta(out, cert.theta);
    const int n = cert.theta.grid_size();
    out.phi.resize(n + 1);
    for (int j = 0; j <= n; ++j) out.phi[j] = cert.phi.map.samples()[j];
    out.f = cert.f;
    out.g = cert.g;
    out.density = contact_density(detail::certificate_form(cert.phi, cert.g));
}

// assembles the full report (status, payload, residual table, provenance)
void emit(const CommonOptions& opt, RunOutput& out, const std::string& status,
          const std::string& command) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    bool all_pass = true;
    for (const auto& e : out.residual_table) all_pass = all_pass && e.pass();

    Json report = Json::object();
    report.set("status", (status == "ok" && !all_pass) ? "FAILED" : status);
    report.set("command", command);
    report.set("residual_table", residual_table_json(out.residual_table));
    Json prov = Json::object();
    prov.set("grid", std::int64_t(opt.grid));
    prov.set("delta", opt.delta);
    prov.set("eta", opt.eta);
    prov.set("decision_tol", opt.tol);
    prov.set("seed", std::int64_t(opt.seed));
    report.set("provenance", std::move(prov));
    // payload fields collected by the subcommand
    report.set("data", std::move(out.report));

    write_text_file((fs::path(opt.out_dir) / "report.json").string(), report.dump());
    if (!out.z.empty()) {
        write_curves_csv((fs::path(opt.out_dir) / "curves.csv").string(), out.z, out.theta,
                         out.phi, out.f, out.g, out.density);
    }
}

int run_check(const CommonOptions& opt) {
    RunOutput out;
    CircleMap theta = load_theta(opt);
    fill_curves_from_theta(out, theta);
    ReebDecision dec = decide(theta, opt.tol);
    out.report.set("decision", decision_json(dec));
    emit(opt, out, "ok", "check");
    return dec.verdict == Verdict::ConformallyReeb ? 0 : 2;
}

int run_synthesize(const CommonOptions& opt, bool with_straighten) {
    RunOutput out;
    CircleMap theta = load_theta(opt);
    fill_curves_from_theta(out, theta);
    ReebDecision dec = decide(theta, opt.tol);
    out.report.set("decision", decision_json(dec));
    if (dec.verdict != Verdict::ConformallyReeb) {
        emit(opt, out, "ok", "synthesize");
        return 2;
    }
    SynthesisOptions sopt;
    sopt.delta = opt.delta;
    sopt.eta = opt.eta;
    sopt.decision_tol = opt.tol;
    ReebCertificate cert = synthesize_certificate(theta, sopt);
    fill_curves_from_certificate(out, cert);
    out.report.set("certificate", certificate_json(cert));

    Json vol = Json::object();
    vol.set("vol_torus", volume_z(angle_one_form(cert.theta)));
    vol.set("vol_quotient", volume_z(angle_one_form(cert.theta)));
    vol.set("n_value", cert.n_value);
    vol.set("w", std::int64_t(cert.winding));
    out.report.set("volume", std::move(vol));

    out.residual_table = {
        {"I_residual", cert.residuals.I_residual, 1e-10},
        {"f_periodicity", cert.residuals.f_periodicity, 1e-9},
        {"reeb_alpha", cert.residuals.reeb_alpha, 1e-8},
        {"reeb_contraction", cert.residuals.reeb_contraction, 1e-7},
        {"ode_residual", cert.residuals.ode_residual, 1e-7},
        {"min_contact_density_positive", cert.residuals.min_contact_density > 0.0 ? 0.0 : 1.0,
         0.5},
        {"gray_min_density_positive", cert.residuals.gray_min_density > 0.0 ? 0.0 : 1.0, 0.5},
    };
    if (with_straighten) {
        out.report.set("std_pullback_residual", std_pullback_residual(double(cert.winding), 1000,
                                                                      opt.seed));
        const double sr = straightening_residual(cert, 1000, opt.seed);
        out.report.set("straightening_residual", sr);
        out.residual_table.push_back({"straightening_residual", sr, 1e-6});
    }
    emit(opt, out, "ok", with_straighten ? "straighten" : "synthesize");
    return 0;
}

int run_volume(const CommonOptions& opt) {
    RunOutput out;
    CircleMap theta = load_theta(opt);
    fill_curves_from_theta(out, theta);
    const double vol = volume_z(angle_one_form(theta));
    const double expect = kTwoPi * double(theta.degree()) * kFiberArea;
    Json vol_json = Json::object();
    vol_json.set("vol_torus", vol);
    vol_json.set("vol_quotient", vol);
    vol_json.set("n_value", kTwoPi * double(theta.degree()));
    vol_json.set("w", std::int64_t(theta.degree()));
    vol_json.set("winding_identity_residual", std::abs(vol - expect));
    out.report.set("volume", std::move(vol_json));

    auto cmp = check_connection_volume_independence(theta);
    Json conn = Json::object();
    conn.set("volume_difference", cmp.volume_difference);
    conn.set("wadsley_pairing", cmp.wadsley_second.pairing);
    conn.set("wadsley_contraction", cmp.wadsley_second.contraction);
    conn.set("second_form_admissible", cmp.second_admissible);
    out.report.set("connection_independence", std::move(conn));

    out.residual_table = {
        {"volume_winding_identity", std::abs(vol - expect), 1e-8},
        {"connection_volume_difference", cmp.volume_difference, 1e-10},
    };
    emit(opt, out, "ok", "volume");
    return 0;
}

int run_equivariant(const CommonOptions& opt, int order, double rot) {
    CommonOptions adjusted = opt;
    if (adjusted.grid % order != 0) {
        adjusted.grid += order - adjusted.grid % order; // align the seam with the grid
    }
    RunOutput out;
    CircleMap theta = load_theta(adjusted);
    fill_curves_from_theta(out, theta);
    ScrewData screw{kTwoPi / double(order), rot, order};

    ReebDecision dec = decide(theta, adjusted.tol);
    out.report.set("decision", decision_json(dec));
    if (dec.verdict != Verdict::ConformallyReeb) {
        emit(adjusted, out, "ok", "equivariant");
        return 2;
    }

    PhiFunction phi = build_equivariant_phi(theta, screw, adjusted.delta, adjusted.eta,
                                            Bias::Neutral);
    const double seam_resid = equivariance_residual(phi.map, screw);
    const double c1 = seam_c1_mismatch(phi.map, screw);
    auto cov = covering_volume(theta, screw);

    Json eq = Json::object();
    eq.set("order", std::int64_t(order));
    eq.set("lambda", screw.lambda);
    eq.set("rot", screw.phi);
    eq.set("seam_residual", seam_resid);
    eq.set("seam_c1_mismatch", c1);
    eq.set("grid", std::int64_t(adjusted.grid));
    out.report.set("equivariant", std::move(eq));

    Json vol = Json::object();
    vol.set("vol_torus", cov.vol_torus);
    vol.set("vol_quotient", cov.vol_quotient);
    vol.set("n_value", kTwoPi * double(theta.degree()));
    vol.set("w", std::int64_t(theta.degree()));
    out.report.set("volume", std::move(vol));

    const int n = theta.grid_size();
    out.phi.resize(n + 1);
    for (int j = 0; j <= n; ++j) out.phi[j] = phi.map.samples()[j];

    out.residual_table = {
        {"equivariance_seam", seam_resid, 1e-9},
        {"seam_c1_mismatch", c1, 1e-6},
        {"covering_volume_identity",
         std::abs(cov.vol_quotient * order - cov.vol_torus), 1e-10},
    };
    emit(adjusted, out, "ok", "equivariant");
    return 0;
}

int run_examples(const CommonOptions& opt, double eps) {
    RunOutput out;
    auto spec = default_open_theta();
    auto rep1 = build_example_i(spec, eps);
    Json e1 = Json::object();
    e1.set("eps", eps);
    e1.set("min_alpha_X", rep1.min_alpha_X);
    e1.set("contraction_residual", rep1.contraction_residual);
    e1.set("min_nondegeneracy", rep1.min_nondegeneracy);
    e1.set("proportionality_residual", rep1.proportionality_residual);
    out.report.set("constructive_example", std::move(e1));

    auto rep2 = check_example_ii();
    Json e2 = Json::object();
    e2.set("min_inner_product", rep2.min_inner_product);
    e2.set("certified_lower_bound", rep2.certified_lower_bound);
    e2.set("min_phi_prime", rep2.min_phi_prime);
    e2.set("phi_prime_at_zero", rep2.phi_prime_at_zero);
    e2.set("transversality_pairing", rep2.transversality_pairing);
    out.report.set("transversality_example", std::move(e2));

    out.residual_table = {
        {"example_i_alpha_floor", std::max(0.0, eps - 1e-8 - rep1.min_alpha_X), 0.0},
        {"example_i_contraction", rep1.contraction_residual, 1e-10},
        {"example_i_nondegeneracy", rep1.min_nondegeneracy > 0.0 ? 0.0 : 1.0, 0.5},
        {"example_ii_transversality", rep2.min_inner_product > 0.70711 ? 0.0 : 1.0, 0.5},
    };
    emit(opt, out, "ok", "examples");
    return 0;
}

int run_identity31(const CommonOptions& opt, int trials) {
    RunOutput out;
    std::mt19937_64 rng(opt.seed);
    double worst_point = 0.0, worst_int = 0.0, worst_exact = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto a = TrigOneForm::random(3, rng, 0.5);
        auto b = TrigOneForm::random(3, rng, 0.5);
        auto res = check_identity_31(a, b);
        worst_point = std::max(worst_point, res.pointwise);
        worst_int = std::max(worst_int, res.integral);
        worst_exact = std::max(worst_exact, res.exact_term_integral);
    }
    Json j = Json::object();
    j.set("trials", std::int64_t(trials));
    j.set("worst_pointwise_residual", worst_point);
    j.set("worst_integral_residual", worst_int);
    j.set("worst_exact_term_integral", worst_exact);
    out.report.set("identity31", std::move(j));
    out.residual_table = {
        {"pointwise_residual", worst_point, 1e-10},
        {"integral_residual", worst_int, 1e-10},
        {"exact_term_integral", worst_exact, 1e-10},
    };
    emit(opt, out, "ok", "identity31");
    return 0;
}

int fail_report(const CommonOptions& opt, const std::string& command, const Error& e) {
    RunOutput out;
    Json err = Json::object();
    err.set("code", error_code_name(e.code()));
    err.set("message", e.what());
    out.report.set("error", std::move(err));
    try {
        emit(opt, out, "FAILED", command);
    } catch (...) {
        // unable to write the report; the exit code still signals the failure
    }
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Borderline ? 3 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformally-Reeb decision and synthesis for geodesic fields on the flat 3-torus"};
    app.require_subcommand(1);

    CommonOptions opt;
    double eps = 0.1;
    int order = 2;
    double rot = kPi;
    int trials = 50;

    auto* c_check = app.add_subcommand("check", "decide the criterion");
    add_common(c_check, opt, true);
    auto* c_synth = app.add_subcommand("synthesize", "decide and build a verified certificate");
    add_common(c_synth, opt, true);
    auto* c_vol = app.add_subcommand("volume", "volume identities and connection independence");
    add_common(c_vol, opt, true);
    auto* c_str = app.add_subcommand("straighten", "certificate plus straightening residuals");
    add_common(c_str, opt, true);
    auto* c_eq = app.add_subcommand("equivariant", "screw-equivariant synthesis");
    add_common(c_eq, opt, true);
    c_eq->add_option("--order", order, "group order m")->check(CLI::Range(1, 64));
    c_eq->add_option("--rot", rot, "rotation angle of the screw generator");
    auto* c_ex = app.add_subcommand("examples", "open-manifold gallery");
    add_common(c_ex, opt, false);
    c_ex->add_option("--eps", eps, "eps for the constructive example (default 0.1)");
    auto* c_id = app.add_subcommand("identity31", "randomized wedge-identity suite");
    add_common(c_id, opt, false);
    c_id->add_option("--trials", trials, "number of random pairs (default 50)");

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (c_check->parsed()) return run_check(opt);
        if (c_synth->parsed()) return run_synthesize(opt, false);
        if (c_vol->parsed()) return run_volume(opt);
        if (c_str->parsed()) return run_synthesize(opt, true);
        if (c_eq->parsed()) return run_equivariant(opt, order, rot);
        if (c_ex->parsed()) return run_examples(opt, eps);
        if (c_id->parsed()) return run_identity31(opt, trials);
    } catch (const Error& e) {
        return fail_report(opt, command, e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
