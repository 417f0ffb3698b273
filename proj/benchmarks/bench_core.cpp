#include <benchmark/benchmark.h>

#include "umbilic/expr.hpp"
#include "umbilic/forms.hpp"
#include "umbilic/geodesics.hpp"
#include "umbilic/jet.hpp"
#include "umbilic/nogo.hpp"
#include "umbilic/search.hpp"
#include "umbilic/surfaces.hpp"

using namespace umbilic;

namespace {

static void BM_JetMultiply(benchmark::State& state) {
    Jet3 a = eval_jet(*parse("cosh(v)*cos(u)").ast, 0.3, 0.4);
    Jet3 b = eval_jet(*parse("4/(1+u^2+v^2)^2").ast, 0.3, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}
BENCHMARK(BM_JetMultiply);

static void BM_EvalJetSphereFactor(benchmark::State& state) {
    const ExprPtr e = parse("4/(1+u^2+v^2)^2").ast;
    double u = 0.1;
    for (auto _ : state) {
        u = u < 0.9 ? u + 1e-6 : 0.1;
        benchmark::DoNotOptimize(eval_jet(*e, u, -0.25));
    }
}
BENCHMARK(BM_EvalJetSphereFactor);

static void BM_FundamentalForms(benchmark::State& state) {
    const GridSample s = sample(catalog("sphere_stereo"), GridSpec{3, 3});
    for (auto _ : state) {
        benchmark::DoNotOptimize(fundamental_forms(s.position[4]));
    }
}
BENCHMARK(BM_FundamentalForms);

static void BM_SampleGrid33(benchmark::State& state) {
    const SurfaceDef def = catalog("sphere_stereo");
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(def, GridSpec{33, 33}));
    }
}
BENCHMARK(BM_SampleGrid33);

static void BM_CertifyLinearMetric(benchmark::State& state) {
    const MetricField field = MetricField::from_expr(*parse("2+u").ast, kDefaultDomain,
                                                     GridSpec{33, 33}, "2+u");
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_no_go(field));
    }
}
BENCHMARK(BM_CertifyLinearMetric);

static void BM_GeodesicRk4Step(benchmark::State& state) {
    const ExprPtr e = parse("u^2-v^2+3").ast;
    const Domain domain{-2, 2, -2, 2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(*e, domain, {0, 0, 1.0, 0.3}, 0.01, 16));
    }
}
BENCHMARK(BM_GeodesicRk4Step);

static void BM_FalsifyOneRestart(benchmark::State& state) {
    SearchConfig config;
    config.degree = 1;
    config.grid = GridSpec{17, 17};
    config.restarts = 1;
    config.seed = 3;
    config.max_iterations = 60;
    for (auto _ : state) {
        benchmark::DoNotOptimize(falsify(config));
    }
}
BENCHMARK(BM_FalsifyOneRestart);

}  // namespace

BENCHMARK_MAIN();
