#pragma once

#include <optional>
#include <vector>

#include "qevolve/constraint.hpp"
#include "qevolve/dissipation.hpp"
#include "qevolve/energy_model.hpp"
#include "qevolve/errors.hpp"
#include "qevolve/solver.hpp"
#include "qevolve/vec.hpp"

namespace qevolve {

/// Objective of the proximal inner loop:
/// J(v) + eta|v - v_prev|^2 + alpha*psi(v - v_anchor).
double inner_objective(const Vec& v, const Vec& v_prev, const Vec& v_anchor,
                       const EnergyModel& model, const Dissipation& psi);

struct InnerLoopOptions {
    double solver_tol = 0.0;   // 0: defaults to tol_inner/10
    int solver_max_iter = 500000;
    int max_iter = 2000000;    // outer proximal iterations
    bool probe_on_entry = false;
    int probe_samples = 32;
    std::uint64_t probe_seed = 0x5eed;
};

struct InnerLoopResult {
    Vec state;
    int iterations = 0;
    std::vector<double> residual_history; // |v_j - v_{j-1}| per iteration
    double monotonicity_violation = 0.0;  // max increase of J+alpha*psi for j>=2
    Vec certificate;                      // nonsmooth subgradient at acceptance
    Vec last_center;                      // v_{j-1} of the accepted iterate
};

/// Fixed-eta proximal iteration on the affine slice A v = target:
/// v_j = argmin { J(v) + eta|v - v_{j-1}|^2 + alpha*psi(v - v_start) },
/// started at v_0 = v_start, stopped when |v_j - v_{j-1}| < tol_inner.
/// The sequence J(v_j) + alpha*psi(v_j - v_start) is nonincreasing for j >= 2
/// up to solver tolerance; any violation is recorded.
InnerLoopResult inner_critical_loop(const EnergyModel& model,
                                    const Dissipation& psi,
                                    const DofSelection& constraint,
                                    const Vec& target, const Vec& v_start,
                                    double tol_inner, int max_iter,
                                    const InnerLoopOptions* opts = nullptr);

struct MultiplierResult {
    Vec q;                    // reaction on constrained DOFs
    double free_residual = 0; // stationarity residual on free DOFs
};

/// Recovers the multiplier q with A*q in dJ(v) + 2eta(v - v_prev) + d(alpha psi):
/// the constrained-DOF restriction of the chosen (sub)gradient. The same
/// expression restricted to free DOFs must be below tol_kkt. When the solver's
/// prox certificate is available it is used; otherwise the model's subgradient
/// selection rule applies.
MultiplierResult recover_multiplier(const EnergyModel& model,
                                    const Dissipation& psi,
                                    const DofSelection& constraint,
                                    const Vec& v, const Vec& v_prev,
                                    const Vec* psi_anchor = nullptr,
                                    const Vec* certificate = nullptr,
                                    double tol_kkt = 1e-6);

struct LedgerRow {
    int step = 0;
    double t = 0.0;
    double energy = 0.0;            // J(v_i)
    double psi_increment = 0.0;     // psi(v_i - v_{i-1}), 0 at step 0
    double virtual_power = 0.0;     // <q_{i-1}, f(i d) - f((i-1) d)>, 0 at step 0
    int inner_iterations = 0;
    double inner_residual = 0.0;
    double monotonicity_violation = 0.0;
    double kkt_residual = 0.0;
    double feasibility = 0.0;       // |A v_i - f(i d)|
};

struct DiscreteEvolution {
    double delta = 0.0;
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> multipliers; // on constrained DOFs
    std::vector<LedgerRow> ledger;

    int steps() const { return static_cast<int>(times.size()); }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    /// Uniform bounds monitored per Prop-style a-priori estimates.
    double sup_state_norm() const;
    double sup_multiplier_norm() const;
};

/// Inner-loop failure at a time step; carries the trajectory computed so far.
struct EvolutionError : ConvergenceError {
    DiscreteEvolution partial;
    int failed_step = 0;
    EvolutionError(const std::string& what, double res, DiscreteEvolution part,
                   int step)
        : ConvergenceError(what, res), partial(std::move(part)),
          failed_step(step) {}
};

struct EvolutionOptions {
    InnerLoopOptions inner;
    double tol_kkt = 1e-6;
    bool probe_each_step = false; // strong-convexity probe at every step (else once)
};

/// Time-stepped evolution of constrained critical points: at each grid time
/// i*delta the inner proximal loop is run from the previous state with target
/// f(i*delta). Multipliers, dissipation increments, and per-step virtual power
/// <q_{i-1}, f(i d)-f((i-1) d)> are recorded in the ledger.
DiscreteEvolution discrete_evolution(const EnergyModel& model,
                                     const Dissipation& psi,
                                     const DofSelection& constraint,
                                     const LoadPath& load, const Vec& v0,
                                     double delta, double tol_inner,
                                     double tol_feas,
                                     const EvolutionOptions* opts = nullptr);

struct PsiVariation {
    double value = 0.0;
    bool psi_enabled = false;
};

/// Total dissipation sum of psi over state increments at grid nodes in
/// (t1, t2]; additive over adjacent intervals.
PsiVariation psi_variation(const DiscreteEvolution& traj, const Dissipation& psi,
                           double t1, double t2);

struct EnergyPairGap {
    int i = 0, j = 0;             // grid indices, t1 = times[i] < t2 = times[j]
    double lhs_minus_rhs = 0.0;   // J(t2) + alpha*Var - J(t1) - sum of step powers
    double balance_gap = 0.0;     // same with trapezoidal power (balance check)
};

struct EnergyInequalityReport {
    double slack = 0.0;    // slack_coeff * sqrt(delta)
    double max_gap = 0.0;  // worst lhs_minus_rhs over all grid pairs
    EnergyPairGap worst;
    bool pass = false;     // max_gap <= slack
    bool dissipative = false;
    std::vector<EnergyPairGap> pairs;
};

/// Discrete energy inequality over every grid pair t1 < t2:
/// J(v(t2)) [+ Var_psi(v;[t1,t2])] <= J(v(t1)) + sum <q_{i-1}, df_i> + slack.
/// The balance_gap column uses trapezoidal quadrature in q instead, which is
/// exact on segments where q varies linearly in time; on slowly varying
/// segments it reproduces the energy equality.
EnergyInequalityReport check_energy_inequality(const DiscreteEvolution& traj,
                                               const LoadPath& load,
                                               double slack_coeff);

} // namespace qevolve
