#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hyperwave/artifacts.hpp"
#include "hyperwave/cauchy.hpp"
#include "hyperwave/characteristics.hpp"
#include "hyperwave/config.hpp"
#include "hyperwave/genericity.hpp"
#include "hyperwave/operator_box.hpp"
#include "hyperwave/solver.hpp"

namespace hw = hyperwave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;          // operational error
constexpr int kExitNegativeResult = 2; // verified mathematical negative

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

hw::RunConfig load_config(const std::string& path) { return hw::RunConfig::from_file(path); }

hw::GenericityCertificate run_certify(const hw::RunConfig& cfg, const std::string& mode,
                                      long samples, std::uint64_t rng_seed) {
    hw::CertifyOptions opt;
    if (mode == "sampled") opt.sampled = hw::SampledMode{samples, rng_seed};
    opt.budget = cfg.get_int("tolerances", "ii_budget", 1000000);
    return hw::certify(cfg.seed(), opt);
}

nlohmann::ordered_json cert_artifact(const hw::RunConfig& cfg,
                                     const hw::GenericityCertificate& cert) {
    auto j = cert.to_json();
    j["config_hash"] = cfg.hash_hex();
    j["version"] = hw::kVersion;
    return j;
}

int cmd_genericity(const std::string& config_path, const std::string& mode, long samples,
                   std::uint64_t rng_seed, const std::string& out) {
    Timer timer;
    auto cfg = load_config(config_path);
    auto cert = run_certify(cfg, mode, samples, rng_seed);
    hw::write_artifact(out, cert_artifact(cfg, cert), cfg, timer.ms());
    std::cout << "certificate: " << (cert.holds() ? "generic" : (cert.refuted() ? "refuted" : "partially-verified"))
              << " -> " << out << "\n";
    return cert.refuted() ? kExitNegativeResult : kExitOk;
}

int cmd_charset(const std::string& config_path, int box_n, int box_j, const std::string& out) {
    Timer timer;
    auto cfg = load_config(config_path);
    auto seed = cfg.seed();
    hw::LatticeBox box{box_n, box_j};
    auto cs = hw::enumerate_characteristics(seed, box);
    auto gamma = hw::build_gamma(seed);
    auto algebra = hw::build_algebra(gamma, hw::bound_B(seed.b(), seed.d()));
    std::vector<hw::ComponentReport> reports{
        hw::connected_components(cs, gamma, hw::AdjacencyMode::GammaStep),
        hw::connected_components(cs, algebra, hw::AdjacencyMode::AlgebraStep)};
    auto profile = hw::diophantine_profile(seed, box);
    auto j = hw::charset_to_json(cs, reports, profile);
    j["config_hash"] = cfg.hash_hex();
    j["version"] = hw::kVersion;
    hw::write_artifact(out, j, cfg, timer.ms());

    std::string csv_path = out.substr(0, out.find_last_of('.')) + "_profile.csv";
    std::ostringstream csv;
    csv << "N,m\n";
    for (const auto& [N, m] : profile.table) {
        char line[64];
        std::snprintf(line, sizeof line, "%d,%.17g\n", N, m);
        csv << line;
    }
    hw::write_text_artifact(csv_path, csv.str(), cfg, timer.ms());

    bool ok = true;
    for (const auto& rep : reports) ok = ok && hw::verify_prop2_bound(rep);
    std::cout << "characteristics: " << cs.size() << " points, max component "
              << reports[0].max_size << " (bound " << reports[0].bound << ") -> " << out << "\n";
    return ok ? kExitOk : kExitNegativeResult;
}

int cmd_gap(const std::string& config_path, int N, double delta, double eps,
            const std::string& out) {
    Timer timer;
    auto cfg = load_config(config_path);
    auto base = cfg.seed();
    auto seed = base.with_amplitudes(std::vector<double>(base.b(), delta));
    int j_radius = cfg.get_int("boxes", "gap_j", std::max(2 * N, 8));
    auto profile = hw::diophantine_profile(seed, hw::LatticeBox{std::max(N, 3), j_radius});
    auto op = hw::assemble_FprimeN(seed, seed.omega0_double(), N, j_radius, cfg.h_terms());
    auto report = hw::gap_prop3(seed, op, eps, profile.q);
    auto j = report.to_json();
    j["config_hash"] = cfg.hash_hex();
    j["version"] = hw::kVersion;
    j["fitted_q"] = profile.q;
    j["fitted_cprime"] = profile.cprime;
    hw::write_artifact(out, j, cfg, timer.ms());
    std::cout << "gap: inverse norm " << report.inverse_norm << " vs bound " << report.bound
              << " -> " << (report.pass ? "pass" : "fail") << " -> " << out << "\n";
    return report.pass ? kExitOk : kExitNegativeResult;
}

int cmd_solve(const std::string& config_path, std::optional<double> delta_override, double tol,
              int max_iter, const std::string& cert_path, const std::string& out,
              const std::string& transversality_grid) {
    Timer timer;
    auto cfg = load_config(config_path);
    auto seed = cfg.seed();
    if (delta_override)
        seed = seed.with_amplitudes(std::vector<double>(seed.b(), *delta_override));

    // Dependency auto-resolution: a missing certificate is computed inline.
    nlohmann::ordered_json cert_json;
    bool refuted = false;
    if (!cert_path.empty() && std::filesystem::exists(cert_path)) {
        cert_json = hw::load_artifact(cert_path);
        if (cert_json.value("config_hash", "") != cfg.hash_hex())
            throw std::runtime_error("solve: certificate config hash does not match this config");
        refuted = cert_json.value("generic", "") == "refuted";
    } else {
        auto cert = run_certify(cfg, "exhaustive", 0, cfg.rng_seed());
        cert_json = cert_artifact(cfg, cert);
        refuted = cert.refuted();
    }
    if (refuted) {
        std::cout << "solve: seed is non-generic (refuted certificate); not solving\n";
        return kExitNegativeResult;
    }

    hw::SolveOptions opt;
    opt.box = cfg.solver_box();
    opt.tol = tol > 0 ? tol : cfg.newton_tol();
    opt.max_iter = max_iter > 0 ? max_iter : cfg.max_iter();
    opt.rho = cfg.rho();
    auto art = hw::solve(seed, cfg.h_terms(), opt);

    auto j = art.to_json();
    j["config_hash"] = cfg.hash_hex();
    j["version"] = hw::kVersion;
    j["delta"] = seed.delta();
    j["certificate_hash"] = hw::fnv1a64_hex(cert_json.dump());
    j["certificate"] = cert_json;
    hw::write_artifact(out, j, cfg, timer.ms());
    std::cout << "solve: " << (art.converged ? "converged" : art.failure_reason) << ", residual "
              << art.residual_norm << " in " << art.iterations << " iterations -> " << out << "\n";

    if (!transversality_grid.empty()) {
        std::vector<double> grid;
        std::istringstream is(transversality_grid);
        double x;
        while (is >> x) grid.push_back(x);
        auto rep = hw::transversality(seed, cfg.h_terms(), grid);
        auto tj = rep.to_json();
        tj["config_hash"] = cfg.hash_hex();
        tj["version"] = hw::kVersion;
        std::string tpath = out.substr(0, out.find_last_of('.')) + "_transversality.json";
        hw::write_artifact(tpath, tj, cfg, timer.ms());
        std::cout << "transversality: rescaled slope " << rep.slope_rescaled << " -> " << tpath
                  << "\n";
    }
    return art.converged ? kExitOk : kExitNegativeResult;
}

int cmd_evolve(const std::string& config_path, std::optional<double> delta_override, double A,
               const std::string& out) {
    Timer timer;
    auto cfg = load_config(config_path);
    auto seed = cfg.seed();
    auto params = cfg.cauchy_params();
    if (delta_override) {
        params.delta = *delta_override;
        if (!cfg.has("cauchy", "dt")) params.dt = hw::default_dt(params.delta);
    }
    double perturb_amp = cfg.get_double("cauchy", "perturb_amp", 0.0);
    int perturb_modes = cfg.get_int("cauchy", "perturb_modes", 0);
    hw::CauchySimulator sim(
        params, hw::CauchySimulator::seed_data(params, seed, perturb_amp, perturb_modes,
                                               cfg.rng_seed()));
    double T = params.delta > 0 ? std::pow(params.delta, -A)
                                : cfg.get_double("cauchy", "T", 100.0);
    double K = cfg.get_double("cauchy", "excess_K", 10.0);
    auto rep = hw::lifetime_run(sim, T, A, K, cfg.get_int("cauchy", "checkpoints", 512));

    hw::write_text_artifact(out, rep.to_csv(), cfg, timer.ms());
    auto j = rep.to_json();
    j["config_hash"] = cfg.hash_hex();
    j["version"] = hw::kVersion;
    std::string jpath = out.substr(0, out.find_last_of('.')) + ".json";
    hw::write_artifact(jpath, j, cfg, timer.ms());
    std::cout << "evolve: T=" << T << " max excess " << rep.max_excess << " (threshold "
              << rep.pass_threshold << ") -> " << (rep.pass ? "pass" : "fail") << " -> " << out
              << "\n";
    if (rep.blew_up) {
        std::cout << "evolve: blow-up at t=" << rep.blowup_time << "\n";
        return kExitNegativeResult;
    }
    return rep.pass ? kExitOk : kExitNegativeResult;
}

int cmd_measure(const std::string& config_path, long samples, std::uint64_t rng_seed,
                const std::string& out) {
    Timer timer;
    auto cfg = load_config(config_path);
    auto seed = cfg.seed();
    nlohmann::ordered_json j;
    j["config_hash"] = cfg.hash_hex();
    j["version"] = hw::kVersion;

    auto est = hw::nongeneric_measure_estimate(seed.d(), seed.b(), seed.p(), samples, rng_seed);
    j["nongeneric"] = {{"samples", est.samples},
                       {"violations", est.violations},
                       {"fraction", est.fraction()}};

    if (seed.p() % 2 == 0) {
        hw::LatticeBox box{cfg.get_int("boxes", "charset_n", 12),
                           cfg.get_int("boxes", "charset_j", 16)};
        auto prop1 = hw::measure_estimate_prop1(seed, box, {0.1, 0.03, 0.01}, 1.0,
                                                std::min(samples, 10000L), rng_seed);
        nlohmann::ordered_json p1;
        p1["samples"] = prop1.samples;
        p1["eps"] = prop1.eps;
        p1["pass_fraction"] = prop1.pass_fraction;
        j["block_gap_measure"] = std::move(p1);
    }
    hw::write_artifact(out, j, cfg, timer.ms());
    std::cout << "measure: non-generic fraction " << est.fraction() << " -> " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-periodic solutions and almost-global existence toolkit for the nonlinear "
                 "wave equation on the torus"};
    app.require_subcommand(1);

    std::string config_path, out, mode = "exhaustive", cert_path, tgrid;
    long samples = 500;
    std::uint64_t rng_seed = 1;
    int box_n = 30, box_j = 45, N = 4, max_iter = 0;
    double delta = -1, eps = 0.1, tol = -1, A = 1.5;

    auto* g = app.add_subcommand("genericity", "certify or refute the genericity conditions");
    g->add_option("--config", config_path)->required();
    g->add_option("--mode", mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
    g->add_option("--samples", samples);
    g->add_option("--seed", rng_seed);
    g->add_option("--out", out)->required();

    auto* c = app.add_subcommand("charset", "enumerate characteristics, components, small divisors");
    c->add_option("--config", config_path)->required();
    c->add_option("--box-n", box_n);
    c->add_option("--box-j", box_j);
    c->add_option("--out", out)->required();

    auto* gp = app.add_subcommand("gap", "spectral gap of the truncated linearized operator");
    gp->add_option("--config", config_path)->required();
    gp->add_option("--N", N);
    gp->add_option("--delta", delta)->required();
    gp->add_option("--eps", eps);
    gp->add_option("--out", out)->required();

    auto* s = app.add_subcommand("solve", "Newton construction of a quasi-periodic solution");
    s->add_option("--config", config_path)->required();
    s->add_option("--delta", delta);
    s->add_option("--tol", tol);
    s->add_option("--max-iter", max_iter);
    s->add_option("--cert", cert_path);
    s->add_option("--transversality-grid", tgrid);
    s->add_option("--out", out)->required();

    auto* e = app.add_subcommand("evolve", "integrate the Cauchy problem over the long horizon");
    e->add_option("--config", config_path)->required();
    e->add_option("--delta", delta);
    e->add_option("--A", A);
    e->add_option("--out", out)->required();

    auto* m = app.add_subcommand("measure", "Monte Carlo measure diagnostics");
    m->add_option("--config", config_path)->required();
    m->add_option("--samples", samples);
    m->add_option("--seed", rng_seed);
    m->add_option("--out", out)->required();

    hw::ReportInputs inputs;
    std::string report_dir;
    auto* r = app.add_subcommand("report", "cross-linked summary and plot CSVs");
    r->add_option("--certificate", inputs.certificate);
    r->add_option("--charset", inputs.charset);
    r->add_option("--gap", inputs.gap);
    r->add_option("--solution", inputs.solutions);
    r->add_option("--lifetime-csv", inputs.lifetime_csv);
    r->add_option("--lifetime-json", inputs.lifetime_json);
    r->add_option("--transversality", inputs.transversality);
    r->add_option("--out", report_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (g->parsed()) return cmd_genericity(config_path, mode, samples, rng_seed, out);
        if (c->parsed()) return cmd_charset(config_path, box_n, box_j, out);
        if (gp->parsed()) return cmd_gap(config_path, N, delta, eps, out);
        if (s->parsed())
            return cmd_solve(config_path, delta > 0 ? std::optional<double>(delta) : std::nullopt,
                             tol, max_iter, cert_path, out, tgrid);
        if (e->parsed())
            return cmd_evolve(config_path, delta >= 0 ? std::optional<double>(delta) : std::nullopt,
                              A, out);
        if (m->parsed()) return cmd_measure(config_path, samples, rng_seed, out);
        if (r->parsed()) {
            hw::emit_report(inputs, report_dir);
            std::cout << "report -> " << report_dir << "/summary.txt\n";
            return kExitOk;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
