#pragma once

#include <optional>
#include <vector>

#include "qevolve/evolution.hpp"
#include "qevolve/fracture/model.hpp"

namespace qevolve::diagnostics {

using fracture::FractureModel;

struct PairResidual {
    int pair = 0;
    double jump = 0.0;
    bool open = false;              // |jump| > jump_tol
    double flux_left = 0.0;         // interface reaction (K v)_L / w
    double flux_right = 0.0;        // -(K v)_R / w
    double flux_gap = 0.0;          // |flux_left - flux_right|
    double constraint_violation = 0; // (|flux| - kappa g'(0))_+ on closed pairs
    double flux_law_error = 0.0;    // |flux - kappa g'(|jump|) sign(jump)| on open pairs
};

struct StationarityReport {
    std::vector<PairResidual> pairs;
    double max_flux_gap = 0.0;
    double max_constraint_violation = 0.0;
    double max_flux_law_error = 0.0;
    double interior_residual = 0.0; // max |(K v)_i| over free non-interface DOFs

    double worst() const
    {
        return std::max(std::max(max_flux_gap, max_constraint_violation),
                        std::max(max_flux_law_error, interior_residual));
    }
};

/// Pointwise check of the stationarity system: discrete interface fluxes from
/// assembled reactions, flux continuity, the stress constraint on closed
/// pairs, the cohesive flux law on open pairs, and interior harmonicity.
StationarityReport stationarity_residual(const Vec& v, const FractureModel& fr,
                                         double jump_tol);

/// First grid time with an interface opening above jump_tol; nullopt if the
/// trajectory never opens.
std::optional<double> crack_initiation_time(const DiscreteEvolution& traj,
                                            const FractureModel& fr,
                                            double jump_tol);

/// <q, f-dot> evaluated through the regular lift: v^T K w for a rate field w
/// continuous across the interface (exact for P1 fields). Throws if the rate
/// field jumps.
double virtual_power(const Vec& v, const Vec& rate_field,
                     const FractureModel& fr);

/// Largest deviation of any state column from its x2-average (2D meshes);
/// zero for 1D.
double x2_invariance_defect(const Vec& v, const fracture::FractureMesh& mesh);

} // namespace qevolve::diagnostics
