#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qevolve/fracture/model.hpp"
#include "qevolve/vec.hpp"

namespace qevolve {

/// One experiment: geometry, material, load, time grid, tolerances, output.
struct RunConfig {
    int dim = 1;
    double ell = 0.5;
    int N = 40;
    double R = 1.0;
    double kappa = 1.0;
    std::optional<double> eta_override;
    fracture::LoadKind load = fracture::LoadKind::w1d;
    double T = 1.0;
    double delta = 0.02;
    double tol_inner = 0.0; // 0: default by dimension (1e-13 / 5e-14)
    double tol_feas = 1e-6;
    bool alpha = false;
    std::optional<Vec> psi_weights; // defaults to all-ones when alpha is set
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    double jump_tol = 1e-8;
    int max_inner = 2000000;
    int max_solver = 500000;

    double eta(double /*ell unused*/ = 0) const
    {
        return eta_override ? *eta_override
                            : fracture::FractureParams::default_eta(R, ell);
    }
    double tol_inner_effective() const
    {
        if (tol_inner > 0.0)
            return tol_inner;
        return dim == 1 ? 1e-13 : 5e-14;
    }
};

/// Strict JSON parse: unknown keys are rejected, every error names the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

std::string config_to_json(const RunConfig& cfg);

} // namespace qevolve
