#include "qevolve/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "qevolve/log.hpp"

namespace qevolve {

double inner_objective(const Vec& v, const Vec& v_prev, const Vec& v_anchor,
                       const EnergyModel& model, const Dissipation& psi)
{
    const auto n = static_cast<std::size_t>(model.dim);
    QEVOLVE_REQUIRE(v.size() == n && v_prev.size() == n && v_anchor.size() == n,
                    "inner_objective: dimension mismatch");
    double e = model.energy(v);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - v_prev[i];
        e += model.eta * d * d;
    }
    if (psi.enabled)
        e += psi.value(subtract(v, v_anchor));
    return e;
}

namespace {

// Subproblem of one proximal iteration: J(v) + eta|v-center|^2 + alpha*psi(v-anchor)
// over the slice A v = target. Rows are ordered J terms first, then psi terms.
// The center is shared so the loop can move it without rebuilding the lambda.
CompositeObjective make_subproblem(const EnergyModel& model,
                                   const Dissipation& psi,
                                   const DofSelection& constraint,
                                   const Vec& target,
                                   std::shared_ptr<Vec> center,
                                   const Vec& anchor)
{
    CompositeObjective obj;
    obj.dim = model.dim;
    obj.pinned_dofs = constraint.dofs;
    obj.pinned_values = target;
    const double eta = model.eta;
    obj.smooth = [base = model.smooth, eta,
                  center = std::move(center)](const Vec& v, Vec* grad) {
        double e = base(v, grad);
        const Vec& c = *center;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double d = v[i] - c[i];
            e += eta * d * d;
            if (grad)
                (*grad)[i] += 2.0 * eta * d;
        }
        return e;
    };
    for (const auto& t : model.l1_terms)
        obj.rows.push_back({t.idx, t.coeff, t.weight, 0.0});
    if (psi.enabled) {
        for (std::size_t k = 0; k < psi.weights.size(); ++k)
            obj.rows.push_back({{static_cast<int>(k)}, {1.0}, psi.weights[k], anchor[k]});
    }
    return obj;
}

CompositeObjective probe_objective(const EnergyModel& model,
                                   const DofSelection& constraint,
                                   const Vec& target)
{
    CompositeObjective obj;
    obj.dim = model.dim;
    obj.pinned_dofs = constraint.dofs;
    obj.pinned_values = target;
    const double eta = model.eta;
    const auto base = model.smooth;
    obj.smooth = [base, eta](const Vec& v, Vec* grad) {
        double e = base(v, grad);
        for (std::size_t i = 0; i < v.size(); ++i) {
            e += eta * v[i] * v[i];
            if (grad)
                (*grad)[i] += 2.0 * eta * v[i];
        }
        return e;
    };
    for (const auto& t : model.l1_terms)
        obj.rows.push_back({t.idx, t.coeff, t.weight, 0.0});
    return obj;
}

} // namespace

InnerLoopResult inner_critical_loop(const EnergyModel& model,
                                    const Dissipation& psi,
                                    const DofSelection& constraint,
                                    const Vec& target, const Vec& v_start,
                                    double tol_inner, int max_iter,
                                    const InnerLoopOptions* opts_in)
{
    InnerLoopOptions opts = opts_in ? *opts_in : InnerLoopOptions{};
    QEVOLVE_REQUIRE(tol_inner > 0.0, "inner loop: tol_inner must be positive");
    QEVOLVE_REQUIRE(static_cast<int>(v_start.size()) == model.dim,
                    "inner loop: start dimension mismatch");
    QEVOLVE_REQUIRE(all_finite(v_start), "inner loop: non-finite start");
    const double solver_tol = opts.solver_tol > 0.0 ? opts.solver_tol : tol_inner / 10.0;

    if (opts.probe_on_entry) {
        const CompositeObjective probe = probe_objective(model, constraint, target);
        const double ratio =
            strong_convexity_probe(probe, opts.probe_samples, opts.probe_seed);
        if (!(ratio > 0.0))
            throw ModelError("inner loop: J + eta|.|^2 failed the strong-convexity probe");
    }

    InnerLoopResult result;
    auto center = std::make_shared<Vec>(v_start);
    const Vec& anchor = v_start;
    Vec x = v_start;
    double prev_obj = 0.0;

    const CompositeObjective sub =
        make_subproblem(model, psi, constraint, target, center, anchor);

    SolveOptions sopts;
    sopts.tol = solver_tol;
    sopts.max_iter = opts.solver_max_iter;
    sopts.lipschitz_hint = std::max(estimate_lipschitz(sub.smooth, model.dim, 30, &x),
                                    1e-12);

    for (int j = 1; j <= max_iter; ++j) {
        SolveReport rep = solve_composite(sub, x, solver_tol, opts.solver_max_iter, &sopts);
        x = std::move(rep.minimizer);
        const double res = dist2(x, *center);
        result.residual_history.push_back(res);
        const double obj_j =
            model.energy(x) + (psi.enabled ? psi.value(subtract(x, anchor)) : 0.0);
        if (j >= 2)
            result.monotonicity_violation =
                std::max(result.monotonicity_violation, obj_j - prev_obj);
        prev_obj = obj_j;
        if (res < tol_inner) {
            result.state = std::move(x);
            result.iterations = j;
            result.certificate = std::move(rep.certificate);
            result.last_center = std::move(*center);
            return result;
        }
        *center = x;
    }
    throw ConvergenceError("inner loop: max_iter exceeded",
                           result.residual_history.back(),
                           result.residual_history);
}

MultiplierResult recover_multiplier(const EnergyModel& model,
                                    const Dissipation& psi,
                                    const DofSelection& constraint,
                                    const Vec& v, const Vec& v_prev,
                                    const Vec* psi_anchor, const Vec* certificate,
                                    double tol_kkt)
{
    const auto n = static_cast<std::size_t>(model.dim);
    QEVOLVE_REQUIRE(v.size() == n && v_prev.size() == n,
                    "recover_multiplier: dimension mismatch");

    Vec g;
    if (certificate) {
        const std::size_t n_j = model.l1_terms.size();
        const std::size_t n_psi = psi.enabled ? psi.weights.size() : 0;
        QEVOLVE_REQUIRE(certificate->size() == n_j + n_psi,
                        "recover_multiplier: certificate size mismatch");
        model.smooth(v, &g);
        for (std::size_t r = 0; r < n_j; ++r) {
            const auto& t = model.l1_terms[r];
            for (std::size_t k = 0; k < t.idx.size(); ++k)
                g[static_cast<std::size_t>(t.idx[k])] +=
                    t.weight * (*certificate)[r] * t.coeff[k];
        }
        for (std::size_t k = 0; k < n_psi; ++k)
            g[k] += psi.weights[k] * (*certificate)[n_j + k];
    } else {
        g = model.subgradient_select(v);
        if (psi.enabled) {
            QEVOLVE_REQUIRE(psi_anchor && psi_anchor->size() == n,
                            "recover_multiplier: psi anchor required");
            for (std::size_t k = 0; k < n; ++k) {
                const double d = v[k] - (*psi_anchor)[k];
                double s;
                if (d != 0.0)
                    s = d > 0.0 ? 1.0 : -1.0;
                else // kink: minimize the residual (free) or the reaction (pinned)
                    s = std::clamp(-g[k] / psi.weights[k], -1.0, 1.0);
                g[k] += psi.weights[k] * s;
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        g[i] += 2.0 * model.eta * (v[i] - v_prev[i]);

    MultiplierResult out;
    out.q = constraint.apply(g);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (!constraint.is_constrained(static_cast<int>(i)))
            r2 += g[i] * g[i];
    out.free_residual = std::sqrt(r2);
    if (out.free_residual > tol_kkt * (1.0 + norm2(v)))
        throw ModelError("recover_multiplier: free-DOF stationarity residual " +
                         std::to_string(out.free_residual) + " above tolerance");
    return out;
}

double DiscreteEvolution::sup_state_norm() const
{
    double m = 0.0;
    for (const auto& s : states)
        m = std::max(m, norm2(s));
    return m;
}

double DiscreteEvolution::sup_multiplier_norm() const
{
    double m = 0.0;
    for (const auto& q : multipliers)
        m = std::max(m, norm2(q));
    return m;
}

DiscreteEvolution discrete_evolution(const EnergyModel& model,
                                     const Dissipation& psi,
                                     const DofSelection& constraint,
                                     const LoadPath& load, const Vec& v0,
                                     double delta, double tol_inner,
                                     double tol_feas,
                                     const EvolutionOptions* opts_in)
{
    EvolutionOptions opts = opts_in ? *opts_in : EvolutionOptions{};
    QEVOLVE_REQUIRE(delta > 0.0 && delta < 1.0, "delta out of (0,1)");
    QEVOLVE_REQUIRE(tol_feas > 0.0, "tol_feas must be positive");
    QEVOLVE_REQUIRE(static_cast<int>(v0.size()) == model.dim,
                    "initial state dimension mismatch");

    DiscreteEvolution traj;
    traj.delta = delta;

    const Vec f0 = load.eval(0.0);
    const double feas0 = dist2(constraint.apply(v0), f0);
    QEVOLVE_REQUIRE(feas0 <= tol_feas, "initial state violates A v0 = f(0)");

    const int nsteps = static_cast<int>(std::floor(load.horizon / delta + 1e-9));

    traj.times.push_back(0.0);
    traj.states.push_back(v0);
    {
        MultiplierResult m0 = recover_multiplier(model, psi, constraint, v0, v0,
                                                 &v0, nullptr, opts.tol_kkt);
        traj.multipliers.push_back(std::move(m0.q));
        LedgerRow row;
        row.step = 0;
        row.t = 0.0;
        row.energy = model.energy(v0);
        row.kkt_residual = m0.free_residual;
        row.feasibility = feas0;
        traj.ledger.push_back(row);
    }

    InnerLoopOptions inner = opts.inner;
    Vec f_prev = f0;
    for (int i = 1; i <= nsteps; ++i) {
        const double t = static_cast<double>(i) * delta;
        const Vec target = load.eval(t);
        inner.probe_on_entry = opts.inner.probe_on_entry || opts.probe_each_step ||
                               (i == 1); // probe (J2) once at entry by default
        InnerLoopResult r;
        try {
            r = inner_critical_loop(model, psi, constraint, target,
                                    traj.states.back(), tol_inner,
                                    inner.max_iter, &inner);
        } catch (const ConvergenceError& e) {
            throw EvolutionError("evolution: inner loop failed at step " +
                                     std::to_string(i) + ": " + e.what(),
                                 e.residual, std::move(traj), i);
        }

        MultiplierResult m =
            recover_multiplier(model, psi, constraint, r.state, r.last_center,
                               &traj.states.back(), &r.certificate, opts.tol_kkt);

        LedgerRow row;
        row.step = i;
        row.t = t;
        row.energy = model.energy(r.state);
        row.psi_increment =
            psi.enabled ? psi.value(subtract(r.state, traj.states.back())) : 0.0;
        row.virtual_power = dot(traj.multipliers.back(), subtract(target, f_prev));
        row.inner_iterations = r.iterations;
        row.inner_residual = r.residual_history.back();
        row.monotonicity_violation = r.monotonicity_violation;
        row.kkt_residual = m.free_residual;
        row.feasibility = dist2(constraint.apply(r.state), target);
        QEVOLVE_REQUIRE(row.feasibility <= tol_feas,
                        "evolution: accepted state violates feasibility tolerance");

        log_debug("step %d t=%.4f inner=%d res=%.3e J=%.12g", i, t,
                  r.iterations, row.inner_residual, row.energy);

        traj.times.push_back(t);
        traj.states.push_back(std::move(r.state));
        traj.multipliers.push_back(std::move(m.q));
        traj.ledger.push_back(row);
        f_prev = target;
    }

    log_info("evolution done: %d steps, sup|v|=%.6g sup|q|=%.6g", nsteps,
             traj.sup_state_norm(), traj.sup_multiplier_norm());
    return traj;
}

PsiVariation psi_variation(const DiscreteEvolution& traj, const Dissipation& psi,
                           double t1, double t2)
{
    QEVOLVE_REQUIRE(t1 >= 0.0 && t1 < t2 &&
                        t2 <= traj.horizon() + 1e-12 * (1.0 + traj.horizon()),
                    "psi_variation: need 0 <= t1 < t2 <= T");
    PsiVariation out;
    out.psi_enabled = psi.enabled;
    if (!psi.enabled)
        return out;
    const double eps = 1e-12 * (1.0 + std::abs(t2));
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        if (traj.times[i] <= t1 + eps)
            continue;
        if (traj.times[i] > t2 + eps)
            break;
        out.value += psi.value(subtract(traj.states[i], traj.states[i - 1]));
    }
    return out;
}

EnergyInequalityReport check_energy_inequality(const DiscreteEvolution& traj,
                                               const LoadPath& load,
                                               double slack_coeff)
{
    const int m = traj.steps();
    QEVOLVE_REQUIRE(m >= 1, "check_energy_inequality: empty trajectory");
    EnergyInequalityReport rep;
    rep.slack = slack_coeff * std::sqrt(traj.delta);

    // prefix sums of dissipation, left-endpoint power, trapezoidal power
    std::vector<double> psi_cum(static_cast<std::size_t>(m), 0.0);
    std::vector<double> pow_cum(static_cast<std::size_t>(m), 0.0);
    std::vector<double> trap_cum(static_cast<std::size_t>(m), 0.0);
    Vec f_prev = load.eval(traj.times[0]);
    for (int i = 1; i < m; ++i) {
        const Vec f_i = load.eval(traj.times[static_cast<std::size_t>(i)]);
        const Vec df = subtract(f_i, f_prev);
        const double p_left =
            dot(traj.multipliers[static_cast<std::size_t>(i) - 1], df);
        double p_trap = 0.0;
        for (std::size_t k = 0; k < df.size(); ++k)
            p_trap += 0.5 *
                      (traj.multipliers[static_cast<std::size_t>(i) - 1][k] +
                       traj.multipliers[static_cast<std::size_t>(i)][k]) *
                      df[k];
        psi_cum[static_cast<std::size_t>(i)] =
            psi_cum[static_cast<std::size_t>(i) - 1] +
            traj.ledger[static_cast<std::size_t>(i)].psi_increment;
        pow_cum[static_cast<std::size_t>(i)] =
            pow_cum[static_cast<std::size_t>(i) - 1] + p_left;
        trap_cum[static_cast<std::size_t>(i)] =
            trap_cum[static_cast<std::size_t>(i) - 1] + p_trap;
        rep.dissipative |=
            traj.ledger[static_cast<std::size_t>(i)].psi_increment != 0.0;
        f_prev = f_i;
    }

    rep.max_gap = -std::numeric_limits<double>::infinity();
    rep.pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            EnergyPairGap g;
            g.i = i;
            g.j = j;
            const double var = psi_cum[static_cast<std::size_t>(j)] -
                               psi_cum[static_cast<std::size_t>(i)];
            const double lhs =
                traj.ledger[static_cast<std::size_t>(j)].energy + var;
            g.lhs_minus_rhs =
                lhs - traj.ledger[static_cast<std::size_t>(i)].energy -
                (pow_cum[static_cast<std::size_t>(j)] -
                 pow_cum[static_cast<std::size_t>(i)]);
            g.balance_gap =
                lhs - traj.ledger[static_cast<std::size_t>(i)].energy -
                (trap_cum[static_cast<std::size_t>(j)] -
                 trap_cum[static_cast<std::size_t>(i)]);
            if (g.lhs_minus_rhs > rep.max_gap) {
                rep.max_gap = g.lhs_minus_rhs;
                rep.worst = g;
            }
            rep.pairs.push_back(g);
        }
    }
    if (rep.pairs.empty())
        rep.max_gap = 0.0;
    rep.pass = rep.max_gap <= rep.slack;
    return rep;
}

} // namespace qevolve
