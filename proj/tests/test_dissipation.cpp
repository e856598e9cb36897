#include <doctest.h>

#include <random>

#include "qevolve/dissipation.hpp"
#include "qevolve/energy_model.hpp"
#include "qevolve/evolution.hpp"

using namespace qevolve;

TEST_CASE("weighted-l1 dissipation satisfies the psi axioms exactly")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    std::uniform_real_distribution<double> wdist(0.1, 3.0);

    const int n = 7;
    Vec w(n);
    for (double& x : w)
        x = wdist(rng);
    const auto psi = Dissipation::weighted_l1(w);

    CHECK(psi.value(Vec(n, 0.0)) == 0.0);
    for (int k = 0; k < 200; ++k) {
        Vec a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = uni(rng);
            b[i] = uni(rng);
        }
        // Psi1: positive away from zero
        if (norm2(a) > 0.0)
            CHECK(psi.value(a) > 0.0);
        // Psi2: subadditive
        Vec sum(n);
        for (int i = 0; i < n; ++i)
            sum[i] = a[i] + b[i];
        CHECK(psi.value(sum) <= psi.value(a) + psi.value(b) + 1e-15);
        // Psi3: positively 1-homogeneous (exact for scaling by 0.5, 2, 3)
        for (double lam : {0.5, 2.0, 3.0}) {
            Vec la(n);
            for (int i = 0; i < n; ++i)
                la[i] = lam * a[i];
            CHECK(psi.value(la) == doctest::Approx(lam * psi.value(a)).epsilon(1e-14));
        }
        // norm equivalence with the computed constant
        const double c = psi.norm_equivalence_constant();
        CHECK(psi.value(a) <= c * norm2(a) * (1 + 1e-14));
        CHECK(psi.value(a) >= norm2(a) / c * (1 - 1e-14));
    }
}

TEST_CASE("dissipation validation")
{
    CHECK_THROWS_AS(Dissipation::weighted_l1({1.0, 0.0}), ArgumentError);
    const auto off = Dissipation::off(3);
    CHECK(off.value({1.0, 2.0, 3.0}) == 0.0);
    CHECK(off.alpha() == 0);
}

namespace {

EnergyModel half_norm_model(int dim, double eta)
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

} // namespace

TEST_CASE("inner_objective: hand-computed values")
{
    SUBCASE("zero state")
    {
        const auto m = half_norm_model(1, 1.0);
        CHECK(inner_objective({0.0}, {0.0}, {0.0}, m, Dissipation::off(1)) == 0.0);
    }
    SUBCASE("quadratic plus prox distance")
    {
        const auto m = half_norm_model(1, 1.0);
        CHECK(inner_objective({1.0}, {0.0}, {0.0}, m, Dissipation::off(1)) ==
              doctest::Approx(1.5).epsilon(1e-15));
    }
    SUBCASE("pure l1 distance to the anchor")
    {
        EnergyModel zero;
        zero.dim = 2;
        zero.eta = 0.0;
        zero.smooth = [](const Vec&, Vec* g) {
            if (g)
                g->assign(2, 0.0);
            return 0.0;
        };
        const auto psi = Dissipation::weighted_l1({1.0, 1.0});
        CHECK(inner_objective({2.0, -1.0}, {2.0, -1.0}, {1.0, 1.0}, zero, psi) ==
              doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("dimension mismatch is an argument error")
    {
        const auto m = half_norm_model(2, 1.0);
        CHECK_THROWS_AS(
            inner_objective({1.0}, {0.0}, {0.0}, m, Dissipation::off(1)),
            ArgumentError);
    }
}
