#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qevolve/config.hpp"
#include "qevolve/diagnostics.hpp"
#include "qevolve/evolution.hpp"

namespace qevolve {

struct ManifestEntry {
    std::string path; // relative to the output directory
    std::uint64_t bytes = 0;
    std::string fnv1a64; // hex checksum
};

struct Manifest {
    std::string out_dir;
    std::vector<ManifestEntry> files;
};

/// In-memory result of a run, before/independent of serialization.
struct ExperimentResult {
    RunConfig config;
    fracture::FractureModel model;
    DiscreteEvolution trajectory;
    Dissipation psi;
    double slack_coeff = 0.0;             // 10*(C1*|fdot| + |fdot|^2), run-estimated
    EnergyInequalityReport energy_report;
    std::vector<diagnostics::StationarityReport> stationarity;
    double wall_seconds = 0.0;
};

/// Runs the evolution for a config without touching the filesystem.
ExperimentResult run_evolution(const RunConfig& cfg);

/// Runs and writes energies.csv, trajectory.json, stationarity.json and
/// snapshots/step_<i>.svg under cfg.out_dir; returns the manifest
/// (also written as manifest.json). Deterministic given config and seed.
Manifest run_experiment(const RunConfig& cfg);

/// L2-in-time norm of the constraint rate, by Simpson quadrature.
double load_rate_l2(const LoadPath& load);

/// FNV-1a 64-bit checksum, hex-encoded.
std::string fnv1a64_hex(const std::string& bytes);

std::string trajectory_to_json(const ExperimentResult& res);

struct LoadedTrajectory {
    RunConfig config;
    DiscreteEvolution trajectory;
};
LoadedTrajectory load_trajectory_file(const std::string& path);

enum class RefineMode { both, delta_only, h_only };

struct RefinementRow {
    double h = 0.0;
    double delta = 0.0;
    std::optional<double> initiation_time;
    double final_elastic = 0.0;
    double final_crack = 0.0;
    double final_total = 0.0;
    double sup_state_norm = 0.0;
    /// Sup over coarse grid times and coarse nodes of the state difference
    /// against the previous level; 0 for the first row.
    double sup_diff_prev = 0.0;
};

/// Reruns the same experiment at refined resolution (halving delta, h, or
/// both per level) and tabulates the observables.
std::vector<RefinementRow> refinement_study(const RunConfig& cfg, int levels,
                                            RefineMode mode = RefineMode::both);

} // namespace qevolve
