#include "qevolve/diagnostics.hpp"

#include <cmath>

#include "qevolve/fracture/cohesive_law.hpp"

namespace qevolve::diagnostics {

using fracture::g_eval;

StationarityReport stationarity_residual(const Vec& v, const FractureModel& fr,
                                         double jump_tol)
{
    QEVOLVE_REQUIRE(static_cast<int>(v.size()) == fr.dim(),
                    "stationarity_residual: dimension mismatch");
    const auto& mesh = fr.mesh();
    const double kappa = fr.params().kappa;
    const double R = fr.params().R;
    const Vec Kv = fr.stiffness().multiply(v);

    StationarityReport rep;
    std::vector<char> interface_node(v.size(), 0);
    int pair_id = 0;
    for (const auto& p : mesh.jump_pairs) {
        interface_node[static_cast<std::size_t>(p.left)] = 1;
        interface_node[static_cast<std::size_t>(p.right)] = 1;

        PairResidual r;
        r.pair = pair_id++;
        r.jump = fr.jump(v, p);
        r.open = std::abs(r.jump) > jump_tol;
        r.flux_left = Kv[static_cast<std::size_t>(p.left)] / p.weight;
        r.flux_right = -Kv[static_cast<std::size_t>(p.right)] / p.weight;
        r.flux_gap = std::abs(r.flux_left - r.flux_right);
        if (r.open) {
            const double law = kappa * g_eval(std::abs(r.jump), R).derivative *
                               (r.jump > 0.0 ? 1.0 : -1.0);
            r.flux_law_error = std::max(std::abs(r.flux_left - law),
                                        std::abs(r.flux_right - law));
        } else {
            // stress constraint |flux| <= kappa g'(0) on the closed pairs
            const double excess =
                std::max(std::abs(r.flux_left), std::abs(r.flux_right)) - kappa;
            r.constraint_violation = std::max(excess, 0.0);
        }
        rep.max_flux_gap = std::max(rep.max_flux_gap, r.flux_gap);
        rep.max_constraint_violation =
            std::max(rep.max_constraint_violation, r.constraint_violation);
        rep.max_flux_law_error = std::max(rep.max_flux_law_error, r.flux_law_error);
        rep.pairs.push_back(r);
    }

    const DofSelection sel = fr.constraint();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (sel.is_constrained(static_cast<int>(i)) || interface_node[i])
            continue;
        rep.interior_residual = std::max(rep.interior_residual, std::abs(Kv[i]));
    }
    return rep;
}

std::optional<double> crack_initiation_time(const DiscreteEvolution& traj,
                                            const FractureModel& fr,
                                            double jump_tol)
{
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        if (fr.max_abs_jump(traj.states[i]) > jump_tol)
            return traj.times[i];
    return std::nullopt;
}

double virtual_power(const Vec& v, const Vec& rate_field, const FractureModel& fr)
{
    QEVOLVE_REQUIRE(v.size() == rate_field.size() &&
                        static_cast<int>(v.size()) == fr.dim(),
                    "virtual_power: dimension mismatch");
    for (const auto& p : fr.mesh().jump_pairs) {
        const double jw = fr.jump(rate_field, p);
        QEVOLVE_REQUIRE(std::abs(jw) <= 1e-12 * (1.0 + norm_inf(rate_field)),
                        "virtual_power: rate field must be continuous across the interface");
    }
    return dot(v, fr.stiffness().multiply(rate_field));
}

double x2_invariance_defect(const Vec& v, const fracture::FractureMesh& mesh)
{
    if (mesh.dim == 1)
        return 0.0;
    const int N = mesh.n;
    const int M = 2 * N + 1;
    double defect = 0.0;
    // two blocks of N+1 columns, M nodes each, column-major ids
    for (int block = 0; block < 2; ++block) {
        const int off = block * (N + 1) * M;
        for (int c = 0; c <= N; ++c) {
            double mean = 0.0;
            for (int r = 0; r < M; ++r)
                mean += v[static_cast<std::size_t>(off + c * M + r)];
            mean /= static_cast<double>(M);
            for (int r = 0; r < M; ++r)
                defect = std::max(
                    defect,
                    std::abs(v[static_cast<std::size_t>(off + c * M + r)] - mean));
        }
    }
    return defect;
}

} // namespace qevolve::diagnostics
