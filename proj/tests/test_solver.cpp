#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qevolve/fracture/mesh.hpp"
#include "qevolve/solver.hpp"

using namespace qevolve;

namespace {

double quad_smooth(const Vec& v, Vec* g)
{
    double e = 0.0;
    if (g)
        g->assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        e += 0.5 * v[i] * v[i];
        if (g)
            (*g)[i] = v[i];
    }
    return e;
}

} // namespace

TEST_CASE("soft_threshold matches the scan oracle")
{
    CHECK(soft_threshold(0.0, 0.7) == 0.0);
    // frozen values confirmed by prox_scan below
    CHECK(soft_threshold(2.0, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    CHECK(oracles::prox_scan(2.0, 0.5) == doctest::Approx(1.5).epsilon(1e-5));
    CHECK(oracles::prox_scan(-0.3, 0.5) == doctest::Approx(0.0).epsilon(1e-5));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    std::uniform_real_distribution<double> lam(0.0, 2.0);
    for (int k = 0; k < 25; ++k) {
        const double x = uni(rng), l = lam(rng);
        CHECK(soft_threshold(x, l) ==
              doctest::Approx(oracles::prox_scan(x, l)).epsilon(1e-4));
    }
}

TEST_CASE("estimate_lipschitz on hand-checked quadratics")
{
    CHECK(estimate_lipschitz(quad_smooth, 4, 30) ==
          doctest::Approx(1.1).epsilon(1e-8));

    const auto aniso = [](const Vec& v, Vec* g) {
        if (g)
            *g = {v[0], 4.0 * v[1]};
        return 0.5 * (v[0] * v[0] + 4.0 * v[1] * v[1]);
    };
    CHECK(estimate_lipschitz(aniso, 2, 40) == doctest::Approx(4.4).epsilon(1e-6));
}

TEST_CASE("estimate_lipschitz matches the dense eigenvalue oracle on a stiffness")
{
    const auto mesh = qevolve::fracture::build_mesh(1, 0.5, 40);
    const auto K = qevolve::fracture::assemble_stiffness(mesh);
    const int n = mesh.node_count();
    const std::function<double(const Vec&, Vec*)> elastic = [&K](const Vec& v, Vec* g) {
        if (g)
            K.multiply(v, *g);
        return 0.5 * K.quadratic(v);
    };
    std::vector<Vec> dense(static_cast<std::size_t>(n),
                           Vec(static_cast<std::size_t>(n), 0.0));
    Vec e(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        const Vec col = K.multiply(e);
        for (int i = 0; i < n; ++i)
            dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)];
        e[static_cast<std::size_t>(j)] = 0.0;
    }
    const double lam_ref = oracles::dense_spectral_radius(dense);
    const double est = estimate_lipschitz(elastic, n, 200) / 1.1;
    CHECK(std::abs(est - lam_ref) <= 0.01 * lam_ref);
}

TEST_CASE("solve_composite: hand examples")
{
    SUBCASE("one free DOF: min (x-3)^2/2 + |x| -> soft_threshold(3,1) = 2")
    {
        CompositeObjective obj;
        obj.dim = 1;
        obj.smooth = [](const Vec& v, Vec* g) {
            if (g)
                *g = {v[0] - 3.0};
            return 0.5 * (v[0] - 3.0) * (v[0] - 3.0);
        };
        obj.rows.push_back({{0}, {1.0}, 1.0, 0.0});
        const auto rep = solve_composite(obj, {0.0}, 1e-12, 10000);
        CHECK(rep.minimizer[0] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(rep.certificate[0] == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("all DOFs pinned returns the pinned values in 0 iterations")
    {
        CompositeObjective obj;
        obj.dim = 2;
        obj.smooth = quad_smooth;
        obj.pinned_dofs = {0, 1};
        obj.pinned_values = {3.0, -1.0};
        const auto rep = solve_composite(obj, {0.0, 0.0}, 1e-12, 100);
        CHECK(rep.iterations == 0);
        CHECK(rep.minimizer == Vec{3.0, -1.0});
    }
    SUBCASE("pure quadratic reaches (1,2)")
    {
        CompositeObjective obj;
        obj.dim = 2;
        obj.smooth = [](const Vec& v, Vec* g) {
            if (g)
                *g = {v[0] - 1.0, v[1] - 2.0};
            return 0.5 * (v[0] - 1.0) * (v[0] - 1.0) +
                   0.5 * (v[1] - 2.0) * (v[1] - 2.0);
        };
        const auto rep = solve_composite(obj, {5.0, -4.0}, 1e-12, 10000);
        CHECK(rep.minimizer[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.minimizer[1] == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("solve_composite agrees with grid search on random instances")
{
    for (int k = 0; k < 12; ++k) {
        const int dim = 1 + k % 3;
        const auto inst = oracles::make_random_instance(1000 + k, dim);
        const auto rep = solve_composite(inst.obj, inst.start, 1e-11, 100000);
        const Vec ref = oracles::composite_grid_search(inst.obj, -6.0, 6.0);
        for (int d = 0; d < dim; ++d)
            CHECK(std::abs(rep.minimizer[static_cast<std::size_t>(d)] -
                           ref[static_cast<std::size_t>(d)]) <= 1e-5);
    }
}

TEST_CASE("solve_composite: start independence and certificate optimality")
{
    const auto inst = oracles::make_random_instance(42, 3);
    const double tol = 1e-11;
    const auto r1 = solve_composite(inst.obj, inst.start, tol, 100000);
    Vec other(inst.start.size(), 0.9);
    const auto r2 = solve_composite(inst.obj, other, tol, 100000);
    for (std::size_t d = 0; d < r1.minimizer.size(); ++d)
        CHECK(std::abs(r1.minimizer[d] - r2.minimizer[d]) <= 10 * tol);

    // |grad smooth + sum w s a| <= tol on free DOFs, s = sign off the kink
    Vec g;
    inst.obj.smooth(r1.minimizer, &g);
    for (std::size_t r = 0; r < inst.obj.rows.size(); ++r) {
        const auto& row = inst.obj.rows[r];
        const double u = row.apply(r1.minimizer);
        CHECK(std::abs(r1.certificate[r]) <= 1.0 + 1e-12);
        if (std::abs(u) > 1e-9)
            CHECK(r1.certificate[r] == doctest::Approx(u > 0 ? 1.0 : -1.0));
        for (std::size_t k = 0; k < row.idx.size(); ++k)
            g[static_cast<std::size_t>(row.idx[k])] +=
                row.weight * r1.certificate[r] * row.coeff[k];
    }
    std::vector<char> pinned(r1.minimizer.size(), 0);
    for (int d : inst.obj.pinned_dofs)
        pinned[static_cast<std::size_t>(d)] = 1;
    double res = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!pinned[i])
            res += g[i] * g[i];
    CHECK(std::sqrt(res) <= 100 * tol);
}

TEST_CASE("solve_composite objective history is monotone up to restarts")
{
    const auto inst = oracles::make_random_instance(99, 2);
    SolveOptions opts;
    opts.record_history = true;
    const auto rep = solve_composite(inst.obj, inst.start, 1e-11, 100000, &opts);
    double worst = 0.0;
    for (std::size_t k = 1; k < rep.objective_history.size(); ++k)
        worst = std::max(worst,
                         rep.objective_history[k] - rep.objective_history[k - 1]);
    CHECK(worst <= 1e-12);
}

TEST_CASE("grad_check validates exact and flags kinks")
{
    Vec x = {0.3, -1.2, 2.0};
    const auto rep = grad_check(quad_smooth, x, 1e-5);
    CHECK(rep.max_rel_error <= 1e-10);
    CHECK(!rep.kink_flag);

    const auto rep2 =
        grad_check(quad_smooth, x, 1e-6, [](int i) { return i == 1; });
    CHECK(rep2.kink_flag);
    CHECK(rep2.skipped_components == std::vector<int>{1});
}

TEST_CASE("strong_convexity_probe: identity, concave part, pinned slice")
{
    CompositeObjective id;
    id.dim = 2;
    id.smooth = quad_smooth;
    CHECK(strong_convexity_probe(id, 200, 5) == doctest::Approx(1.0).epsilon(1e-9));

    // h-part alone on one DOF: ratio is exactly -1/R between in-range points
    const double R = 1.7;
    CompositeObjective conc;
    conc.dim = 1;
    conc.smooth = [R](const Vec& v, Vec* g) {
        const double s = v[0];
        const double a = std::abs(s);
        if (g)
            *g = {a < R ? -s / R : (s > 0 ? -1.0 : 1.0)};
        return a < R ? -s * s / (2.0 * R) : R / 2.0 - a;
    };
    const double ratio = strong_convexity_probe(conc, 200, 5, R / 2.0);
    CHECK(ratio == doctest::Approx(-1.0 / R).epsilon(1e-12));
}
