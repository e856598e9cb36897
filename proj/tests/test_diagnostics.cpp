#include <doctest.h>

#include "qevolve/diagnostics.hpp"
#include "qevolve/fracture/oracle1d.hpp"

using namespace qevolve;
using namespace qevolve::fracture;
using namespace qevolve::diagnostics;

namespace {

FractureModel make_model(int dim, int N, double R, double kappa)
{
    return FractureModel(build_mesh(dim, 0.5, N),
                         {R, kappa, FractureParams::default_eta(R, 0.5)});
}

Vec elastic_state(const FractureModel& fm, double t)
{
    Vec v(static_cast<std::size_t>(fm.dim()));
    for (int i = 0; i < fm.dim(); ++i)
        v[static_cast<std::size_t>(i)] =
            2.0 * t * (fm.mesh().nodes[static_cast<std::size_t>(i)][0] - fm.mesh().ell);
    return v;
}

} // namespace

TEST_CASE("stationarity_residual: elastic, over-stressed, broken states")
{
    SUBCASE("elastic state at t = 0.3: fluxes +/- 0.6, all residuals tiny")
    {
        const auto fm = make_model(1, 20, 2.0, 1.0);
        const auto rep = stationarity_residual(elastic_state(fm, 0.3), fm, 1e-8);
        REQUIRE(rep.pairs.size() == 1);
        CHECK(rep.pairs[0].flux_left == doctest::Approx(0.6).epsilon(1e-10));
        CHECK(rep.pairs[0].flux_right == doctest::Approx(0.6).epsilon(1e-10));
        CHECK(!rep.pairs[0].open);
        CHECK(rep.max_flux_gap <= 1e-10);
        CHECK(rep.max_constraint_violation <= 1e-10);
        CHECK(rep.interior_residual <= 1e-10);
    }
    SUBCASE("elastic state at t = 0.6 with R < 2l: constraint violation 0.2")
    {
        const auto fm = make_model(1, 20, 0.5, 1.0);
        const auto rep = stationarity_residual(elastic_state(fm, 0.6), fm, 1e-8);
        CHECK(rep.max_constraint_violation == doctest::Approx(0.2).epsilon(1e-10));
    }
    SUBCASE("fully broken state: zero flux matches g' = 0")
    {
        const auto fm = make_model(1, 20, 0.5, 1.0);
        const double t = 0.4; // jump 0.8 > R
        Vec v(fm.dim());
        for (int i = 0; i < fm.dim(); ++i)
            v[i] = i <= fm.mesh().n ? -t : t;
        const auto rep = stationarity_residual(v, fm, 1e-8);
        REQUIRE(rep.pairs.size() == 1);
        CHECK(rep.pairs[0].open);
        CHECK(rep.max_flux_law_error <= 1e-8);
        CHECK(rep.interior_residual <= 1e-10);
    }
}

TEST_CASE("crack_initiation_time: zero load never opens")
{
    const auto fm = make_model(1, 4, 0.5, 1.0);
    DiscreteEvolution traj;
    traj.delta = 0.1;
    traj.times = {0.0, 0.1, 0.2};
    traj.states.assign(3, Vec(fm.dim(), 0.0));
    CHECK(!diagnostics::crack_initiation_time(traj, fm, 1e-8).has_value());

    traj.states[2][static_cast<std::size_t>(fm.mesh().jump_pairs[0].right)] = 1e-6;
    const auto t = diagnostics::crack_initiation_time(traj, fm, 1e-8);
    REQUIRE(t.has_value());
    CHECK(*t == 0.2);
}

TEST_CASE("virtual_power: elastic rate pairing and multiplier agreement")
{
    const auto fm = make_model(1, 20, 2.0, 1.0);
    const double t = 0.3;
    const Vec v = elastic_state(fm, t);

    SUBCASE("elastic state against the load rate: 4*kappa*t")
    {
        const Vec rate = load_field(LoadKind::w1d, 1.0, fm.mesh());
        CHECK(diagnostics::virtual_power(v, rate, fm) ==
              doctest::Approx(4.0 * t).epsilon(1e-12));
    }
    SUBCASE("zero rate gives zero power")
    {
        CHECK(diagnostics::virtual_power(v, Vec(fm.dim(), 0.0), fm) == 0.0);
    }
    SUBCASE("agrees with <q, f-dot> from the recovered multiplier")
    {
        const auto em = fm.energy_model();
        const auto sel = fm.constraint();
        const auto m = recover_multiplier(em, Dissipation::off(em.dim), sel, v, v);
        const Vec fdot = boundary_load_rate(LoadKind::w1d, t, fm.mesh());
        const Vec rate = load_field(LoadKind::w1d, 1.0, fm.mesh());
        CHECK(dot(m.q, fdot) ==
              doctest::Approx(diagnostics::virtual_power(v, rate, fm))
                  .epsilon(1e-8));
    }
    SUBCASE("a rate field with a jump is rejected")
    {
        Vec bad = load_field(LoadKind::w1d, 1.0, fm.mesh());
        bad[static_cast<std::size_t>(fm.mesh().jump_pairs[0].right)] += 0.5;
        CHECK_THROWS_AS(diagnostics::virtual_power(v, bad, fm), ArgumentError);
    }
}

TEST_CASE("x2_invariance_defect is zero for column-constant fields")
{
    const auto mesh = build_mesh(2, 0.5, 2);
    Vec v(static_cast<std::size_t>((2 * 2 + 1) * (2 + 1) * 2));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 3.0 * mesh.nodes[i][0];
    CHECK(diagnostics::x2_invariance_defect(v, mesh) == 0.0);
    v[1] += 1e-3;
    CHECK(diagnostics::x2_invariance_defect(v, mesh) > 1e-4);
}
