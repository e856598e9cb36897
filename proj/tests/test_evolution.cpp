#include <doctest.h>

#include <cmath>

#include "qevolve/evolution.hpp"
#include "qevolve/fracture/model.hpp"

using namespace qevolve;

namespace {

EnergyModel quad_model(int dim, double eta)
{
    EnergyModel m;
    m.dim = dim;
    m.eta = eta;
    m.smooth = [](const Vec& v, Vec* g) {
        double e = 0.0;
        if (g)
            g->assign(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            e += 0.5 * v[i] * v[i];
            if (g)
                (*g)[i] = v[i];
        }
        return e;
    };
    return m;
}

// J(v) = (v0 - v1)^2 / 2
EnergyModel shear_model(double eta)
{
    EnergyModel m;
    m.dim = 2;
    m.eta = eta;
    m.smooth = [](const Vec& v, Vec* g) {
        const double d = v[0] - v[1];
        if (g)
            *g = {d, -d};
        return 0.5 * d * d;
    };
    return m;
}

} // namespace

TEST_CASE("DofSelection: validation and exact adjoint bound")
{
    CHECK_THROWS_AS(DofSelection(3, {}), ArgumentError);
    CHECK_THROWS_AS(DofSelection(3, {1, 1}), ArgumentError);
    CHECK_THROWS_AS(DofSelection(3, {3}), ArgumentError);

    const DofSelection sel(4, {1, 3});
    CHECK(sel.gamma == 1.0);
    const Vec v = {9.0, -1.0, 5.0, 2.0};
    CHECK(sel.apply(v) == Vec{-1.0, 2.0});
    Vec out(4, 0.0);
    const Vec q = {0.5, -0.25};
    sel.add_adjoint(q, out);
    CHECK(out == Vec{0.0, 0.5, 0.0, -0.25});
    // |A* q| = |q| for selections, so gamma = 1 exactly
    CHECK(norm2(out) == norm2(q));
}

TEST_CASE("inner_critical_loop: pinned quadratics")
{
    SUBCASE("min |v|^2/2 with v0 = 2 lands on (2,0)")
    {
        const auto m = quad_model(2, 1.0);
        const DofSelection sel(2, {0});
        const auto r = inner_critical_loop(m, Dissipation::off(2), sel, {2.0},
                                           {0.0, 0.0}, 1e-12, 1000);
        CHECK(r.state[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(r.state[1]) <= 1e-10);
    }
    SUBCASE("shear energy with v0 = 1 relaxes to (1,1)")
    {
        const auto m = shear_model(1.0);
        const DofSelection sel(2, {0});
        const auto r = inner_critical_loop(m, Dissipation::off(2), sel, {1.0},
                                           {0.0, 0.0}, 1e-12, 10000);
        CHECK(r.state[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.state[1] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.monotonicity_violation <= 1e-12);
    }
    SUBCASE("1D fracture just past initiation with R < 2l breaks fully")
    {
        auto mesh = fracture::build_mesh(1, 0.5, 20);
        const double R = 0.5;
        fracture::FractureModel fm(
            std::move(mesh), {R, 1.0, fracture::FractureParams::default_eta(R, 0.5)});
        const auto em = fm.energy_model();
        const auto sel = fm.constraint();
        const double t = 0.52;
        Vec elastic(static_cast<std::size_t>(em.dim));
        for (int i = 0; i < em.dim; ++i)
            elastic[static_cast<std::size_t>(i)] =
                2.0 * t * (fm.mesh().nodes[static_cast<std::size_t>(i)][0] - 0.5);
        const auto r = inner_critical_loop(
            em, Dissipation::off(em.dim), sel,
            fracture::boundary_load(fracture::LoadKind::w1d, t, fm.mesh()),
            elastic, 1e-13, 2000000);
        CHECK(fm.max_abs_jump(r.state) >= R);
        CHECK(fm.fracture_energy(r.state).total ==
              doctest::Approx(R / 2.0).epsilon(1e-9));
        CHECK(r.monotonicity_violation <= 1e-12);
    }
}

TEST_CASE("recover_multiplier: reactions and residuals")
{
    SUBCASE("unstressed shear state has zero reaction")
    {
        const auto m = shear_model(1.0);
        const DofSelection sel(2, {0});
        const auto r = recover_multiplier(m, Dissipation::off(2), sel, {1.0, 1.0},
                                          {1.0, 1.0});
        CHECK(std::abs(r.q[0]) <= 1e-14);
        CHECK(r.free_residual <= 1e-14);
    }
    SUBCASE("quadratic reaction is the pinned gradient")
    {
        const auto m = quad_model(2, 1.0);
        const DofSelection sel(2, {0});
        const auto r = recover_multiplier(m, Dissipation::off(2), sel, {2.0, 0.0},
                                          {2.0, 0.0});
        CHECK(r.q[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.free_residual <= 1e-14);
    }
    SUBCASE("non-critical state raises a stationarity violation")
    {
        const auto m = quad_model(2, 1.0);
        const DofSelection sel(2, {0});
        CHECK_THROWS_AS(recover_multiplier(m, Dissipation::off(2), sel,
                                           {2.0, 1.0}, {2.0, 1.0}),
                        ModelError);
    }
    SUBCASE("1D fracture elastic state: boundary flux +/- 2t")
    {
        auto mesh = fracture::build_mesh(1, 0.5, 20);
        fracture::FractureModel fm(
            std::move(mesh), {2.0, 1.0, fracture::FractureParams::default_eta(2.0, 0.5)});
        const auto em = fm.energy_model();
        const auto sel = fm.constraint();
        const double t = 0.3;
        Vec v(static_cast<std::size_t>(em.dim));
        for (int i = 0; i < em.dim; ++i)
            v[static_cast<std::size_t>(i)] =
                2.0 * t * (fm.mesh().nodes[static_cast<std::size_t>(i)][0] - 0.5);
        const auto r =
            recover_multiplier(em, Dissipation::off(em.dim), sel, v, v);
        CHECK(r.q[0] == doctest::Approx(-2.0 * t).epsilon(1e-10));
        CHECK(r.q[1] == doctest::Approx(2.0 * t).epsilon(1e-10));
        CHECK(r.free_residual <= 1e-10);
    }
}

TEST_CASE("discrete_evolution: stationary load keeps the critical point")
{
    const auto m = quad_model(3, 1.0);
    const DofSelection sel(3, {0});
    LoadPath load;
    load.horizon = 0.3;
    load.eval = [](double) { return Vec{1.5}; };
    load.rate = [](double) { return Vec{0.0}; };
    const Vec v0 = {1.5, 0.0, 0.0}; // critical point of |v|^2/2 on the slice
    const auto traj =
        discrete_evolution(m, Dissipation::off(3), sel, load, v0, 0.1, 1e-12, 1e-6);
    REQUIRE(traj.steps() == 4);
    for (const auto& s : traj.states) {
        CHECK(s[0] == 1.5);
        CHECK(std::abs(s[1]) <= 1e-10);
    }
    for (const auto& row : traj.ledger) {
        CHECK(row.inner_iterations <= 1);
        CHECK(row.feasibility == 0.0);
    }
    // stationary load: energy inequality gap is exactly zero everywhere
    const auto rep = check_energy_inequality(traj, load, 1.0);
    CHECK(rep.pass);
    CHECK(rep.max_gap == 0.0);
    for (const auto& p : rep.pairs) {
        CHECK(p.lhs_minus_rhs == 0.0);
        CHECK(p.balance_gap == 0.0);
    }
}

TEST_CASE("discrete_evolution rejects infeasible starts")
{
    const auto m = quad_model(2, 1.0);
    const DofSelection sel(2, {0});
    LoadPath load;
    load.horizon = 0.1;
    load.eval = [](double) { return Vec{1.0}; };
    load.rate = [](double) { return Vec{0.0}; };
    CHECK_THROWS_AS(discrete_evolution(m, Dissipation::off(2), sel, load,
                                       {0.0, 0.0}, 0.05, 1e-12, 1e-6),
                    ArgumentError);
}

TEST_CASE("psi_variation: increments, additivity, disabled flag")
{
    DiscreteEvolution traj;
    traj.delta = 1.0;
    traj.times = {0.0, 1.0, 2.0};
    traj.states = {{0.0, 0.0}, {1.0, 0.0}, {1.0, -2.0}};
    const auto psi = Dissipation::weighted_l1({1.0, 1.0});

    CHECK(psi_variation(traj, psi, 0.0, 2.0).value ==
          doctest::Approx(3.0).epsilon(1e-15));
    const double a = psi_variation(traj, psi, 0.0, 1.0).value;
    const double b = psi_variation(traj, psi, 1.0, 2.0).value;
    CHECK(a + b == doctest::Approx(3.0).epsilon(1e-15));

    DiscreteEvolution constant;
    constant.delta = 1.0;
    constant.times = {0.0, 1.0};
    constant.states = {{2.0}, {2.0}};
    CHECK(psi_variation(constant, Dissipation::weighted_l1({1.0}), 0.0, 1.0).value ==
          0.0);

    const auto off = psi_variation(traj, Dissipation::off(2), 0.0, 2.0);
    CHECK(off.value == 0.0);
    CHECK(!off.psi_enabled);

    CHECK_THROWS_AS(psi_variation(traj, psi, 1.5, 1.0), ArgumentError);
}
