// Experiment runner for quasistatic critical-point evolutions of the
// cohesive fracture model. Subcommands: run, oracle1d, refine, check.
// Exit codes: 0 success, 2 validation failure, 3 convergence failure.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qevolve/diagnostics.hpp"
#include "qevolve/experiment.hpp"
#include "qevolve/fracture/oracle1d.hpp"
#include "qevolve/log.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override)
{
    qevolve::RunConfig cfg = qevolve::load_config_file(config_path);
    if (!out_override.empty())
        cfg.out_dir = out_override;
    const qevolve::Manifest manifest = qevolve::run_experiment(cfg);
    std::printf("wrote %zu files to %s\n", manifest.files.size(),
                manifest.out_dir.c_str());
    for (const auto& f : manifest.files)
        std::printf("  %s  %llu bytes  fnv1a64=%s\n", f.path.c_str(),
                    static_cast<unsigned long long>(f.bytes), f.fnv1a64.c_str());
    return 0;
}

int cmd_oracle1d(double t, double R, double ell, double kappa)
{
    const auto o = qevolve::fracture::analytic_1d_oracle(t, ell, R, kappa);
    std::printf("phase=%s slope=%.17g jump=%.17g total_energy=%.17g\n",
                qevolve::fracture::to_string(o.phase).c_str(), o.slope, o.jump,
                o.total_energy);
    return 0;
}

int cmd_refine(const std::string& config_path, int levels, const std::string& mode)
{
    const qevolve::RunConfig cfg = qevolve::load_config_file(config_path);
    qevolve::RefineMode m = qevolve::RefineMode::both;
    if (mode == "delta")
        m = qevolve::RefineMode::delta_only;
    else if (mode == "h")
        m = qevolve::RefineMode::h_only;
    else if (mode != "both")
        throw qevolve::ArgumentError("mode must be both, delta, or h");
    const auto rows = qevolve::refinement_study(cfg, levels, m);
    std::printf("%12s %12s %14s %16s %16s %16s %14s\n", "h", "delta",
                "initiation", "final_elastic", "final_crack", "final_total",
                "sup_diff_prev");
    for (const auto& r : rows) {
        if (r.initiation_time)
            std::printf("%12.6g %12.6g %14.6g %16.8g %16.8g %16.8g %14.6g\n",
                        r.h, r.delta, *r.initiation_time, r.final_elastic,
                        r.final_crack, r.final_total, r.sup_diff_prev);
        else
            std::printf("%12.6g %12.6g %14s %16.8g %16.8g %16.8g %14.6g\n", r.h,
                        r.delta, "none", r.final_elastic, r.final_crack,
                        r.final_total, r.sup_diff_prev);
    }
    return 0;
}

int cmd_check(const std::string& trajectory_path)
{
    const auto loaded = qevolve::load_trajectory_file(trajectory_path);
    const auto& cfg = loaded.config;
    const auto& traj = loaded.trajectory;

    qevolve::fracture::FractureModel model(
        qevolve::fracture::build_mesh(cfg.dim, cfg.ell, cfg.N),
        {cfg.R, cfg.kappa, cfg.eta()});
    const auto load = model.load_path(cfg.load, cfg.T);

    bool ok = true;
    const auto report = [&](const char* name, bool pass, double value) {
        std::printf("[%s] %-22s %.6g\n", pass ? "PASS" : "FAIL", name, value);
        ok = ok && pass;
    };

    double worst_feas = 0.0, worst_kkt = 0.0, worst_stat = 0.0, worst_mono = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const qevolve::Vec f = load.eval(traj.times[i]);
        worst_feas = std::max(
            worst_feas, qevolve::dist2(model.constraint().apply(traj.states[i]), f));
        const auto stat =
            qevolve::diagnostics::stationarity_residual(traj.states[i], model,
                                                        cfg.jump_tol);
        worst_stat = std::max(
            worst_stat, stat.worst() / (1.0 + qevolve::norm2(traj.states[i])));
        worst_kkt = std::max(worst_kkt, traj.ledger[i].kkt_residual);
        worst_mono = std::max(worst_mono, traj.ledger[i].monotonicity_violation);
    }
    report("feasibility", worst_feas <= cfg.tol_feas, worst_feas);
    report("stationarity", worst_stat <= 1e-6, worst_stat);
    report("kkt_residual", worst_kkt <= 1e-6 * (1.0 + traj.sup_state_norm()),
           worst_kkt);
    report("monotonicity", worst_mono <= 1e-12, worst_mono);

    double c1 = 0.0;
    for (const auto& q : traj.multipliers)
        c1 = std::max(c1, qevolve::norm2(q));
    const double fdot = qevolve::load_rate_l2(load);
    const auto en = qevolve::check_energy_inequality(
        traj, load, 10.0 * (c1 * fdot + fdot * fdot));
    report("energy_inequality", en.pass, en.max_gap);

    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"quasistatic critical-point evolution of cohesive fracture"};
    app.require_subcommand(1);

    std::string config_path, out_override, trajectory_path, mode = "both";
    double t = 0.0, R = 1.0, ell = 0.5, kappa = 1.0;
    int levels = 2;

    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "config JSON file")->required();
    run->add_option("--out", out_override, "output directory override");

    auto* oracle = app.add_subcommand("oracle1d", "analytic 1D critical-point branch");
    oracle->add_option("--t", t, "time")->required();
    oracle->add_option("--R", R, "cohesive range")->required();
    oracle->add_option("--ell", ell, "half-width")->required();
    oracle->add_option("--kappa", kappa, "stiffness")->required();

    auto* refine = app.add_subcommand("refine", "refinement study");
    refine->add_option("config", config_path, "config JSON file")->required();
    refine->add_option("--levels", levels, "number of levels")->required();
    refine->add_option("--mode", mode, "both | delta | h");

    auto* check = app.add_subcommand("check", "re-verify a stored trajectory");
    check->add_option("trajectory", trajectory_path, "trajectory JSON file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, out_override);
        if (oracle->parsed())
            return cmd_oracle1d(t, R, ell, kappa);
        if (refine->parsed())
            return cmd_refine(config_path, levels, mode);
        if (check->parsed())
            return cmd_check(trajectory_path);
    } catch (const qevolve::ConvergenceError& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
