#include "qevolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qevolve {

double estimate_lipschitz(const std::function<double(const Vec&, Vec*)>& smooth,
                          int dim, int iters, const Vec* base)
{
    QEVOLVE_REQUIRE(dim > 0, "estimate_lipschitz: dim must be positive");
    iters = std::max(iters, 20);
    const Vec x0 = base ? *base : Vec(static_cast<std::size_t>(dim), 0.0);
    Vec g0;
    smooth(x0, &g0);
    if (!all_finite(g0))
        throw NumericError("estimate_lipschitz: non-finite gradient");

    std::mt19937_64 rng(0x9E3779B97F4A7C15ull);
    std::normal_distribution<double> nd;
    Vec u(static_cast<std::size_t>(dim));
    for (double& ui : u)
        ui = nd(rng);
    double un = norm2(u);
    if (un == 0.0)
        u[0] = un = 1.0;
    for (double& ui : u)
        ui /= un;

    const double fd = 1e-6 * (1.0 + norm_inf(x0));
    Vec xp(static_cast<std::size_t>(dim)), g, w(static_cast<std::size_t>(dim));
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < u.size(); ++i)
            xp[i] = x0[i] + fd * u[i];
        smooth(xp, &g);
        if (!all_finite(g))
            throw NumericError("estimate_lipschitz: non-finite gradient");
        for (std::size_t i = 0; i < u.size(); ++i)
            w[i] = (g[i] - g0[i]) / fd;
        lam = norm2(w);
        if (!std::isfinite(lam))
            throw NumericError("estimate_lipschitz: diverged");
        if (lam < 1e-300)
            return 1.1e-12; // no curvature detected
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = w[i] / lam;
    }
    return 1.1 * lam;
}

namespace {

// flattened per-row prox data: positions of free entries, |a_free|^2
struct RowWork {
    std::vector<int> pos;     // row-local positions of free entries, flattened
    std::vector<int> pos_ptr; // row r owns pos[pos_ptr[r] .. pos_ptr[r+1])
    Vec den;                  // |a_free|^2 per row
};

} // namespace

SolveReport solve_composite(const CompositeObjective& obj, const Vec& x0,
                            double tol, int max_iter, const SolveOptions* opts)
{
    QEVOLVE_REQUIRE(tol > 0.0, "solve_composite: tol must be positive");
    const int n = obj.dim;
    QEVOLVE_REQUIRE(static_cast<int>(x0.size()) == n,
                    "solve_composite: start dimension mismatch");
    const bool record = opts && opts->record_history;

    std::vector<char> pinned(static_cast<std::size_t>(n), 0);
    QEVOLVE_REQUIRE(obj.pinned_dofs.size() == obj.pinned_values.size(),
                    "solve_composite: pinned arrays mismatch");
    for (int d : obj.pinned_dofs) {
        QEVOLVE_REQUIRE(d >= 0 && d < n, "solve_composite: pinned DOF out of range");
        pinned[static_cast<std::size_t>(d)] = 1;
    }
    const auto project = [&](Vec& v) {
        for (std::size_t k = 0; k < obj.pinned_dofs.size(); ++k)
            v[static_cast<std::size_t>(obj.pinned_dofs[k])] = obj.pinned_values[k];
    };

    // Free support per row; rows must act on disjoint free DOFs.
    RowWork work;
    work.pos_ptr.reserve(obj.rows.size() + 1);
    work.pos_ptr.push_back(0);
    work.den.reserve(obj.rows.size());
    {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (const auto& row : obj.rows) {
            QEVOLVE_REQUIRE(row.weight >= 0.0,
                            "solve_composite: negative row weight");
            double den = 0.0;
            for (std::size_t k = 0; k < row.idx.size(); ++k) {
                const int d = row.idx[k];
                QEVOLVE_REQUIRE(d >= 0 && d < n, "solve_composite: row DOF out of range");
                if (pinned[static_cast<std::size_t>(d)])
                    continue;
                QEVOLVE_REQUIRE(!seen[static_cast<std::size_t>(d)],
                                "solve_composite: rows must act on disjoint free DOFs");
                seen[static_cast<std::size_t>(d)] = 1;
                work.pos.push_back(static_cast<int>(k));
                den += row.coeff[k] * row.coeff[k];
            }
            work.pos_ptr.push_back(static_cast<int>(work.pos.size()));
            work.den.push_back(den);
        }
    }

    Vec x = x0;
    project(x);
    if (!all_finite(x))
        throw NumericError("solve_composite: non-finite start");

    SolveReport report;
    const std::size_t nrows = obj.rows.size();

    int free_count = 0;
    for (char p : pinned)
        if (!p)
            ++free_count;
    if (free_count == 0) {
        report.minimizer = x;
        report.objective = obj.value(x);
        report.certificate.assign(nrows, 0.0);
        for (std::size_t r = 0; r < nrows; ++r) {
            const double u = obj.rows[r].apply(x);
            report.certificate[r] = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
        }
        return report;
    }

    double L = opts && opts->lipschitz_hint > 0.0
                   ? opts->lipschitz_hint
                   : std::max(estimate_lipschitz(obj.smooth, n, 30, &x), 1e-12);
    double tau = 1.0 / L;

    Vec g(static_cast<std::size_t>(n));
    // One gradient + prox step from y into out; returns the prox-gradient
    // mapping norm at y. Fills *cert with the per-row subgradient choice.
    const auto prox_grad = [&](const Vec& y, Vec& out, Vec* cert) -> double {
        obj.smooth(y, &g);
        out = y;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (!pinned[i])
                out[i] -= tau * g[i];
        for (std::size_t r = 0; r < nrows; ++r) {
            const auto& row = obj.rows[r];
            const double den = work.den[r];
            if (den == 0.0) {
                if (cert) {
                    const double u = row.apply(out);
                    (*cert)[r] = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
                }
                continue;
            }
            const double u = row.apply(out);
            const double mu = tau * row.weight * den;
            const double s = mu > 0.0 ? soft_threshold(u, mu) : u;
            const double shift = (u - s) / den;
            for (int k = work.pos_ptr[r]; k < work.pos_ptr[r + 1]; ++k) {
                const auto pos = static_cast<std::size_t>(work.pos[static_cast<std::size_t>(k)]);
                out[static_cast<std::size_t>(row.idx[pos])] -= row.coeff[pos] * shift;
            }
            if (cert)
                (*cert)[r] = mu > 0.0 ? (u - s) / mu
                                      : (u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0));
        }
        double r2 = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (pinned[i])
                continue;
            const double d = out[i] - y[i];
            r2 += d * d;
        }
        return std::sqrt(r2) / tau;
    };

    double Fx = obj.value(x);
    Vec y = x, xn(static_cast<std::size_t>(n)), xprev = x;
    double theta = 1.0;
    int halvings = 0;
    int iterations = 0;
    int small_moves = 0;
    bool converged = false;
    bool at_floor = false;
    const double eps = std::numeric_limits<double>::epsilon();
    if (record)
        report.objective_history.push_back(Fx);

    for (int iter = 1; iter <= max_iter; ++iter) {
        iterations = iter;
        double res = prox_grad(y, xn, nullptr);
        double Fn = obj.value(xn);
        if (!std::isfinite(Fn))
            throw NumericError("solve_composite: non-finite objective");
        // strict margin: resolution of the F comparison itself; loose margin:
        // evaluation noise of the smooth part (cancellation at scale L|x|^2)
        const double margin = 64.0 * eps * (1.0 + std::abs(Fx));
        const double xscale = 1.0 + norm_inf(x);
        const double noise = 32.0 * eps * (std::abs(Fx) + L * xscale * xscale);
        if (Fn > Fx + margin) {
            // momentum overshoots a nonconvex-smooth valley: restart at x
            y = x;
            theta = 1.0;
            res = prox_grad(y, xn, nullptr);
            Fn = obj.value(xn);
            if (Fn > Fx + noise) {
                tau *= 0.5; // plain step genuinely increases F: step too long
                ++halvings;
                if (halvings > 60) {
                    at_floor = true;
                    break;
                }
                y = x;
                continue;
            }
            // increase at noise level: accept, the iterates still converge
        }
        const double thetan = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        const double beta = (theta - 1.0) / thetan;
        const bool no_move = (xn == x);
        const bool cycle = (xn == xprev);
        double dmax = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            dmax = std::max(dmax, std::abs(xn[i] - x[i]));
            y[i] = xn[i] + beta * (xn[i] - x[i]);
        }
        xprev = x;
        x = xn;
        Fx = Fn;
        theta = thetan;
        if (record)
            report.objective_history.push_back(Fn);
        if (res <= tol) {
            converged = true;
            break;
        }
        if (dmax <= 4.0 * eps * (1.0 + norm_inf(x)))
            ++small_moves;
        else
            small_moves = 0;
        if (no_move || cycle || small_moves >= 5) {
            // iterates move at ulp level: the arithmetic cannot resolve tol
            at_floor = true;
            break;
        }
    }

    report.certificate.assign(nrows, 0.0);
    Vec xfinal(static_cast<std::size_t>(n));
    const double res_final = prox_grad(x, xfinal, &report.certificate);

    if (!converged && res_final > tol) {
        const double floor_budget =
            1024.0 * eps * (1.0 + L * (1.0 + norm_inf(x))) *
            std::sqrt(static_cast<double>(free_count));
        if (!(at_floor && res_final <= floor_budget))
            throw ConvergenceError(
                at_floor ? "solve_composite: stagnated above tolerance"
                         : "solve_composite: max_iter exceeded",
                res_final, record ? report.objective_history : std::vector<double>{});
    }

    report.minimizer = std::move(x);
    report.iterations = iterations;
    report.residual = res_final;
    report.objective = Fx;
    return report;
}

GradCheckReport grad_check(const std::function<double(const Vec&, Vec*)>& smooth,
                           const Vec& x, double h,
                           const std::function<bool(int)>& near_kink)
{
    QEVOLVE_REQUIRE(h > 0.0, "grad_check: h must be positive");
    GradCheckReport rep;
    Vec g;
    smooth(x, &g);
    Vec xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (near_kink && near_kink(static_cast<int>(i))) {
            rep.skipped_components.push_back(static_cast<int>(i));
            rep.kink_flag = true;
            continue;
        }
        xp[i] = x[i] + h;
        const double fp = smooth(xp, nullptr);
        xp[i] = x[i] - h;
        const double fm = smooth(xp, nullptr);
        xp[i] = x[i];
        const double fd = (fp - fm) / (2.0 * h);
        const double rel = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
    }
    return rep;
}

double strong_convexity_probe(const CompositeObjective& obj, int samples,
                              std::uint64_t seed, double scale)
{
    QEVOLVE_REQUIRE(samples >= 1, "strong_convexity_probe: samples must be >= 1");
    const int n = obj.dim;
    std::vector<char> pinned(static_cast<std::size_t>(n), 0);
    for (int d : obj.pinned_dofs)
        pinned[static_cast<std::size_t>(d)] = 1;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;

    const auto subgrad = [&](const Vec& v, Vec& g) {
        obj.smooth(v, &g);
        for (const auto& r : obj.rows) {
            const double u = r.apply(v);
            const double s = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
            for (std::size_t k = 0; k < r.idx.size(); ++k)
                g[static_cast<std::size_t>(r.idx[k])] += r.weight * s * r.coeff[k];
        }
    };

    Vec x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    Vec gx, gy;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) {
            if (pinned[static_cast<std::size_t>(i)]) {
                x[static_cast<std::size_t>(i)] = 0.0;
                y[static_cast<std::size_t>(i)] = 0.0;
            } else {
                x[static_cast<std::size_t>(i)] = scale * nd(rng);
                y[static_cast<std::size_t>(i)] = scale * nd(rng);
            }
        }
        for (std::size_t k = 0; k < obj.pinned_dofs.size(); ++k) {
            x[static_cast<std::size_t>(obj.pinned_dofs[k])] = obj.pinned_values[k];
            y[static_cast<std::size_t>(obj.pinned_dofs[k])] = obj.pinned_values[k];
        }
        subgrad(x, gx);
        subgrad(y, gy);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            if (pinned[static_cast<std::size_t>(i)])
                continue;
            const double dx = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
            num += (gx[static_cast<std::size_t>(i)] - gy[static_cast<std::size_t>(i)]) * dx;
            den += dx * dx;
        }
        if (den == 0.0)
            continue;
        min_ratio = std::min(min_ratio, num / den);
    }
    return min_ratio;
}

} // namespace qevolve
