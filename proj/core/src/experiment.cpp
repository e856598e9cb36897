#include "qevolve/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qevolve/log.hpp"

namespace qevolve {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt17(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file(const fs::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + p.string() + "'");
    out << content;
}

} // namespace

std::string fnv1a64_hex(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double load_rate_l2(const LoadPath& load)
{
    // Simpson quadrature of |f-dot(t)|^2 over [0, T]
    const int panels = 64;
    const double T = load.horizon;
    if (T <= 0.0)
        return 0.0;
    const double dt = T / panels;
    double acc = 0.0;
    const auto sq = [&](double t) {
        const Vec r = load.rate(t);
        return dot(r, r);
    };
    for (int k = 0; k < panels; ++k) {
        const double a = k * dt;
        acc += dt / 6.0 * (sq(a) + 4.0 * sq(a + 0.5 * dt) + sq(a + dt));
    }
    return std::sqrt(acc);
}

ExperimentResult run_evolution(const RunConfig& cfg)
{
    fracture::FractureMesh mesh = fracture::build_mesh(cfg.dim, cfg.ell, cfg.N);
    fracture::FractureParams params{cfg.R, cfg.kappa, cfg.eta()};
    fracture::FractureModel model(std::move(mesh), params);
    const int n = model.dim();

    const EnergyModel em = model.energy_model();
    Dissipation psi = Dissipation::off(n);
    if (cfg.alpha) {
        Vec w = cfg.psi_weights ? *cfg.psi_weights
                                : Vec(static_cast<std::size_t>(n), 1.0);
        QEVOLVE_REQUIRE(static_cast<int>(w.size()) == n,
                        "psi_weights must have one entry per DOF");
        psi = Dissipation::weighted_l1(std::move(w));
    }
    const DofSelection constraint = model.constraint();
    const LoadPath load = model.load_path(cfg.load, cfg.T);

    EvolutionOptions opts;
    opts.inner.max_iter = cfg.max_inner;
    opts.inner.solver_max_iter = cfg.max_solver;
    opts.inner.probe_seed = cfg.seed ^ 0x5eedULL;
    opts.inner.probe_samples = 100;

    const Vec v0(static_cast<std::size_t>(n), 0.0);
    const auto t_start = std::chrono::steady_clock::now();
    DiscreteEvolution traj =
        discrete_evolution(em, psi, constraint, load, v0, cfg.delta,
                           cfg.tol_inner_effective(), cfg.tol_feas, &opts);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();

    double c1 = 0.0;
    for (const auto& q : traj.multipliers)
        c1 = std::max(c1, norm2(q));
    const double fdot = load_rate_l2(load);
    const double slack_coeff = 10.0 * (c1 * fdot + fdot * fdot);
    EnergyInequalityReport energy_report =
        check_energy_inequality(traj, load, slack_coeff);

    std::vector<diagnostics::StationarityReport> stationarity;
    stationarity.reserve(traj.states.size());
    for (const auto& s : traj.states)
        stationarity.push_back(
            diagnostics::stationarity_residual(s, model, cfg.jump_tol));

    log_info("run: %d steps in %.2fs, slack_coeff=%.4g", traj.steps() - 1, wall,
             slack_coeff);

    return ExperimentResult{cfg,
                            std::move(model),
                            std::move(traj),
                            std::move(psi),
                            slack_coeff,
                            std::move(energy_report),
                            std::move(stationarity),
                            wall};
}

std::string trajectory_to_json(const ExperimentResult& res)
{
    json j;
    j["config"] = json::parse(config_to_json(res.config));
    j["times"] = res.trajectory.times;
    json states = json::array();
    for (const auto& s : res.trajectory.states)
        states.push_back(s);
    j["states"] = std::move(states);
    json mult = json::array();
    for (const auto& q : res.trajectory.multipliers)
        mult.push_back(q);
    j["multipliers"] = std::move(mult);
    json ledger = json::array();
    for (const auto& row : res.trajectory.ledger) {
        json r;
        r["step"] = row.step;
        r["t"] = row.t;
        r["energy"] = row.energy;
        r["psi_increment"] = row.psi_increment;
        r["virtual_power"] = row.virtual_power;
        r["inner_iterations"] = row.inner_iterations;
        r["inner_residual"] = row.inner_residual;
        r["monotonicity_violation"] = row.monotonicity_violation;
        r["kkt_residual"] = row.kkt_residual;
        r["feasibility"] = row.feasibility;
        ledger.push_back(std::move(r));
    }
    j["ledger"] = std::move(ledger);
    return j.dump(1);
}

LoadedTrajectory load_trajectory_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("", "cannot open trajectory file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError("", std::string("invalid trajectory JSON: ") + e.what());
    }
    LoadedTrajectory out;
    out.config = parse_config(j.at("config").dump());
    out.trajectory.delta = out.config.delta;
    out.trajectory.times = j.at("times").get<std::vector<double>>();
    for (const auto& s : j.at("states"))
        out.trajectory.states.push_back(s.get<Vec>());
    for (const auto& q : j.at("multipliers"))
        out.trajectory.multipliers.push_back(q.get<Vec>());
    for (const auto& r : j.at("ledger")) {
        LedgerRow row;
        row.step = r.at("step").get<int>();
        row.t = r.at("t").get<double>();
        row.energy = r.at("energy").get<double>();
        row.psi_increment = r.at("psi_increment").get<double>();
        row.virtual_power = r.at("virtual_power").get<double>();
        row.inner_iterations = r.at("inner_iterations").get<int>();
        row.inner_residual = r.at("inner_residual").get<double>();
        row.monotonicity_violation = r.at("monotonicity_violation").get<double>();
        row.kkt_residual = r.at("kkt_residual").get<double>();
        row.feasibility = r.at("feasibility").get<double>();
        out.trajectory.ledger.push_back(row);
    }
    return out;
}

namespace {

std::string energies_csv(const ExperimentResult& res)
{
    std::string csv =
        "step,t,elastic,crack,total,psi_variation_cum,virtual_power_cum,inner_iters\n";
    double psi_cum = 0.0, pow_cum = 0.0;
    for (std::size_t i = 0; i < res.trajectory.states.size(); ++i) {
        const auto eb = res.model.fracture_energy(res.trajectory.states[i]);
        const auto& row = res.trajectory.ledger[i];
        psi_cum += row.psi_increment;
        pow_cum += row.virtual_power;
        csv += std::to_string(row.step) + "," + fmt17(row.t) + "," +
               fmt17(eb.elastic) + "," + fmt17(eb.crack) + "," + fmt17(eb.total) +
               "," + fmt17(psi_cum) + "," + fmt17(pow_cum) + "," +
               std::to_string(row.inner_iterations) + "\n";
    }
    return csv;
}

std::string stationarity_json(const ExperimentResult& res)
{
    json j;
    j["jump_tol"] = res.config.jump_tol;
    json arr = json::array();
    for (std::size_t i = 0; i < res.stationarity.size(); ++i) {
        const auto& s = res.stationarity[i];
        json r;
        r["t"] = res.trajectory.times[i];
        r["max_flux_gap"] = s.max_flux_gap;
        r["max_constraint_violation"] = s.max_constraint_violation;
        r["max_flux_law_error"] = s.max_flux_law_error;
        r["interior_residual"] = s.interior_residual;
        r["max_abs_jump"] = res.model.max_abs_jump(res.trajectory.states[i]);
        arr.push_back(std::move(r));
    }
    j["stationarity"] = std::move(arr);
    json en;
    en["slack_coeff"] = res.slack_coeff;
    en["slack"] = res.energy_report.slack;
    en["max_gap"] = res.energy_report.max_gap;
    en["pass"] = res.energy_report.pass;
    en["dissipative"] = res.energy_report.dissipative;
    en["worst"] = {{"i", res.energy_report.worst.i},
                   {"j", res.energy_report.worst.j},
                   {"lhs_minus_rhs", res.energy_report.worst.lhs_minus_rhs},
                   {"balance_gap", res.energy_report.worst.balance_gap}};
    j["energy_inequality"] = std::move(en);
    j["sup_state_norm"] = res.trajectory.sup_state_norm();
    j["sup_multiplier_norm"] = res.trajectory.sup_multiplier_norm();
    return j.dump(1);
}

void append_poly(std::string& svg, const std::vector<std::pair<double, double>>& pts,
                 const char* style)
{
    svg += "<polyline fill=\"none\" ";
    svg += style;
    svg += " points=\"";
    char buf[64];
    for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof(buf), "%.4f,%.4f ", x, y);
        svg += buf;
    }
    svg += "\"/>\n";
}

std::string snapshot_svg_1d(const ExperimentResult& res, std::size_t step,
                            double vmax)
{
    const auto& mesh = res.model.mesh();
    const auto& v = res.trajectory.states[step];
    const double W = 640, H = 400, pad = 40;
    const double xs = (W - 2 * pad) / (2 * mesh.ell);
    const double ys = (H - 2 * pad) / (2 * vmax);
    const auto px = [&](double x) { return pad + x * xs; };
    const auto py = [&](double u) { return H / 2 - u * ys; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
                      "height=\"400\" viewBox=\"0 0 640 400\">\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#999\"/>\n",
                  pad, H / 2, W - pad, H / 2);
    svg += buf;
    const int N = mesh.n;
    std::vector<std::pair<double, double>> left, right;
    for (int i = 0; i <= N; ++i)
        left.push_back({px(mesh.nodes[static_cast<std::size_t>(i)][0]),
                        py(v[static_cast<std::size_t>(i)])});
    for (int i = N + 1; i <= 2 * N + 1; ++i)
        right.push_back({px(mesh.nodes[static_cast<std::size_t>(i)][0]),
                         py(v[static_cast<std::size_t>(i)])});
    append_poly(svg, left, "stroke=\"#1f4e9c\" stroke-width=\"2\"");
    append_poly(svg, right, "stroke=\"#9c1f1f\" stroke-width=\"2\"");
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"10\" y=\"20\" font-size=\"14\">t = %.4f</text>\n",
                  res.trajectory.times[step]);
    svg += buf;
    svg += "</svg>\n";
    return svg;
}

std::string snapshot_svg_2d(const ExperimentResult& res, std::size_t step,
                            double vmax)
{
    const auto& mesh = res.model.mesh();
    const auto& v = res.trajectory.states[step];
    const double W = 480, H = 480, pad = 30;
    const double scale = (W - 2 * pad) / (2 * mesh.ell);
    const auto px = [&](double x) { return pad + x * scale; };
    const auto py = [&](double y) { return H - pad - y * scale; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" "
                      "height=\"480\" viewBox=\"0 0 480 480\">\n";
    char buf[256];
    for (const auto& e : mesh.elements) {
        double mean = (v[static_cast<std::size_t>(e[0])] +
                       v[static_cast<std::size_t>(e[1])] +
                       v[static_cast<std::size_t>(e[2])]) /
                      3.0;
        double s = vmax > 0.0 ? std::clamp(mean / vmax, -1.0, 1.0) : 0.0;
        const int r = static_cast<int>(255.0 * std::min(1.0, 1.0 + s));
        const int g = static_cast<int>(255.0 * (1.0 - std::abs(s)));
        const int b = static_cast<int>(255.0 * std::min(1.0, 1.0 - s));
        std::snprintf(
            buf, sizeof(buf),
            "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" "
            "fill=\"rgb(%d,%d,%d)\"/>\n",
            px(mesh.nodes[static_cast<std::size_t>(e[0])][0]),
            py(mesh.nodes[static_cast<std::size_t>(e[0])][1]),
            px(mesh.nodes[static_cast<std::size_t>(e[1])][0]),
            py(mesh.nodes[static_cast<std::size_t>(e[1])][1]),
            px(mesh.nodes[static_cast<std::size_t>(e[2])][0]),
            py(mesh.nodes[static_cast<std::size_t>(e[2])][1]), r, g, b);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"10\" y=\"20\" font-size=\"14\">t = %.4f</text>\n",
                  res.trajectory.times[step]);
    svg += buf;
    svg += "</svg>\n";
    return svg;
}

} // namespace

Manifest run_experiment(const RunConfig& cfg)
{
    ExperimentResult res = run_evolution(cfg);

    const fs::path out(cfg.out_dir);
    fs::create_directories(out / "snapshots");

    Manifest manifest;
    manifest.out_dir = cfg.out_dir;
    const auto emit = [&](const std::string& rel, const std::string& content) {
        write_file(out / rel, content);
        manifest.files.push_back(
            {rel, static_cast<std::uint64_t>(content.size()), fnv1a64_hex(content)});
    };

    emit("energies.csv", energies_csv(res));
    emit("trajectory.json", trajectory_to_json(res));
    emit("stationarity.json", stationarity_json(res));

    double vmax = 1e-12;
    for (const auto& s : res.trajectory.states)
        vmax = std::max(vmax, norm_inf(s));
    for (std::size_t i = 0; i < res.trajectory.states.size(); ++i) {
        const std::string rel = "snapshots/step_" + std::to_string(i) + ".svg";
        emit(rel, res.config.dim == 1 ? snapshot_svg_1d(res, i, vmax)
                                      : snapshot_svg_2d(res, i, vmax));
    }

    json mj;
    mj["out_dir"] = manifest.out_dir;
    json files = json::array();
    for (const auto& f : manifest.files)
        files.push_back(
            {{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
    mj["files"] = std::move(files);
    write_file(out / "manifest.json", mj.dump(1));
    return manifest;
}

namespace {

// node of the level-l mesh -> node of the refined mesh (N doubled `ref` times)
int map_node(const fracture::FractureMesh& coarse, int id, int ref)
{
    const int f = 1 << ref;
    const int Nc = coarse.n;
    const int Nf = Nc * f;
    if (coarse.dim == 1) {
        if (id <= Nc)
            return id * f; // left block
        const int k = id - (Nc + 1);
        return (Nf + 1) + k * f; // right block
    }
    const int Mc = 2 * Nc + 1;
    const int Mf = 2 * Nf + 1;
    const int offc = (Nc + 1) * Mc;
    const int offf = (Nf + 1) * Mf;
    const int block = id < offc ? 0 : 1;
    const int local = block == 0 ? id : id - offc;
    const int c = local / Mc;
    const int r = local % Mc;
    return block * offf + (c * f) * Mf + r * f;
}

} // namespace

std::vector<RefinementRow> refinement_study(const RunConfig& cfg, int levels,
                                            RefineMode mode)
{
    QEVOLVE_REQUIRE(levels >= 2, "refinement_study: need at least 2 levels");
    std::vector<RefinementRow> rows;
    std::vector<ExperimentResult> results;
    for (int l = 0; l < levels; ++l) {
        RunConfig c = cfg;
        const int f = 1 << l;
        if (mode != RefineMode::h_only)
            c.delta = cfg.delta / f;
        if (mode != RefineMode::delta_only)
            c.N = cfg.N * f;
        results.push_back(run_evolution(c));
        const ExperimentResult& res = results.back();

        RefinementRow row;
        row.h = res.model.mesh().h;
        row.delta = c.delta;
        row.initiation_time = diagnostics::crack_initiation_time(
            res.trajectory, res.model, c.jump_tol);
        const auto eb = res.model.fracture_energy(res.trajectory.states.back());
        row.final_elastic = eb.elastic;
        row.final_crack = eb.crack;
        row.final_total = eb.total;
        row.sup_state_norm = res.trajectory.sup_state_norm();

        if (l > 0) {
            const ExperimentResult& prev = results[static_cast<std::size_t>(l) - 1];
            const int tstride = mode == RefineMode::h_only ? 1 : 2;
            const int nref = mode == RefineMode::delta_only ? 0 : 1;
            double sup = 0.0;
            for (std::size_t i = 0; i < prev.trajectory.times.size(); ++i) {
                const std::size_t j = i * static_cast<std::size_t>(tstride);
                if (j >= res.trajectory.times.size())
                    break;
                const Vec& uc = prev.trajectory.states[i];
                const Vec& uf = res.trajectory.states[j];
                for (int id = 0; id < static_cast<int>(uc.size()); ++id) {
                    const int jd = map_node(prev.model.mesh(), id, nref);
                    sup = std::max(sup,
                                   std::abs(uc[static_cast<std::size_t>(id)] -
                                            uf[static_cast<std::size_t>(jd)]));
                }
            }
            row.sup_diff_prev = sup;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qevolve
