#include <benchmark/benchmark.h>

#include "qevolve/evolution.hpp"
#include "qevolve/experiment.hpp"
#include "qevolve/fracture/model.hpp"

using namespace qevolve;

static void BM_AssembleStiffness2D(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const auto mesh = fracture::build_mesh(2, 0.5, N);
    for (auto _ : state) {
        auto K = fracture::assemble_stiffness(mesh);
        benchmark::DoNotOptimize(K);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleStiffness2D)->RangeMultiplier(2)->Range(4, 32)->Complexity();

static void BM_SolveCompositeElastic1D(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    fracture::FractureModel fm(
        fracture::build_mesh(1, 0.5, N),
        {2.0, 1.0, fracture::FractureParams::default_eta(2.0, 0.5)});
    const auto em = fm.energy_model();
    const auto sel = fm.constraint();
    const Vec target = fracture::boundary_load(fracture::LoadKind::w1d, 0.02, fm.mesh());

    CompositeObjective obj;
    obj.dim = em.dim;
    obj.pinned_dofs = sel.dofs;
    obj.pinned_values = target;
    obj.smooth = [base = em.smooth, eta = em.eta](const Vec& v, Vec* g) {
        double e = base(v, g);
        for (std::size_t i = 0; i < v.size(); ++i) {
            e += eta * v[i] * v[i];
            if (g)
                (*g)[i] += 2.0 * eta * v[i];
        }
        return e;
    };
    for (const auto& t : em.l1_terms)
        obj.rows.push_back({t.idx, t.coeff, t.weight, 0.0});
    const Vec x0(static_cast<std::size_t>(em.dim), 0.0);

    for (auto _ : state) {
        auto rep = solve_composite(obj, x0, 1e-12, 100000);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_SolveCompositeElastic1D)->RangeMultiplier(2)->Range(10, 80);

static void BM_ElasticEvolution1D(benchmark::State& state)
{
    RunConfig cfg;
    cfg.dim = 1;
    cfg.ell = 0.5;
    cfg.N = static_cast<int>(state.range(0));
    cfg.R = 2.0;
    cfg.kappa = 1.0;
    cfg.load = fracture::LoadKind::w1d;
    cfg.T = 0.1;
    cfg.delta = 0.02;
    for (auto _ : state) {
        auto res = run_evolution(cfg);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_ElasticEvolution1D)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
