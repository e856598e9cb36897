#pragma once

#include <functional>
#include <string>

#include "qevolve/constraint.hpp"
#include "qevolve/energy_model.hpp"
#include "qevolve/fracture/mesh.hpp"
#include "qevolve/sparse.hpp"

namespace qevolve::fracture {

struct FractureParams {
    double R = 1.0;     // cohesive range
    double kappa = 1.0; // interface stiffness; scales the crack term
    double eta = 0.0;   // convexification parameter

    /// eta = 1/(2R) + max{4, 4 sqrt(ell)}: enough to dominate the concave
    /// part of the cohesive density on the meshes used here.
    static double default_eta(double R, double ell)
    {
        return 1.0 / (2.0 * R) + std::max(4.0, 4.0 * std::sqrt(ell));
    }
};

enum class LoadKind { w1, w2, w1d };

LoadKind load_kind_from_string(const std::string& s);
std::string to_string(LoadKind k);

/// Boundary datum of the chosen load on the Dirichlet DOFs at time t.
Vec boundary_load(LoadKind kind, double t, const FractureMesh& mesh);
/// Its time derivative (the loads are linear in t).
Vec boundary_load_rate(LoadKind kind, double t, const FractureMesh& mesh);
/// The load evaluated at every node: a mesh field continuous across the
/// interface, used as the regular lift in virtual-power evaluations.
Vec load_field(LoadKind kind, double t, const FractureMesh& mesh);

struct EnergyBreakdown {
    double total = 0.0;
    double elastic = 0.0;
    double crack = 0.0;
};

/// Discrete cohesive model: energy, assembled stiffness, constraint, loads,
/// and the EnergyModel fed to the generic evolution engine.
/// E(v) = (1/2) v^T K v + kappa * sum_e w_e g(|jump_e|); kappa scales the
/// crack term only, so the opening threshold on the interface flux is
/// kappa * g'(0).
class FractureModel {
public:
    FractureModel(FractureMesh mesh, FractureParams params);

    const FractureMesh& mesh() const { return mesh_; }
    const FractureParams& params() const { return params_; }
    const SymmetricCsr& stiffness() const { return K_; }
    int dim() const { return mesh_.node_count(); }

    EnergyBreakdown fracture_energy(const Vec& v) const;

    /// Smooth part: elastic + kappa * sum w_e h(jump_e); the |jump| kinks live
    /// in the l1 terms of the energy model.
    double smooth_part(const Vec& v, Vec* grad) const;

    EnergyModel energy_model() const;
    DofSelection constraint() const;
    LoadPath load_path(LoadKind kind, double T) const;

    double jump(const Vec& v, const JumpPair& p) const
    {
        return v[static_cast<std::size_t>(p.right)] - v[static_cast<std::size_t>(p.left)];
    }
    double max_abs_jump(const Vec& v) const;

    /// Components within `margin` of the h-branch boundary |jump| = R.
    std::function<bool(int)> kink_proximity(const Vec& v, double margin) const;

    /// Power-iteration estimate of max_v sum_e w_e jump_e^2 / |v|^2.
    double interface_trace_constant(int iters = 200) const;

private:
    FractureMesh mesh_;
    FractureParams params_;
    SymmetricCsr K_;
};

} // namespace qevolve::fracture
