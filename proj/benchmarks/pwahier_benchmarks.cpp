#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "pwahier/linalg.hpp"
#include "pwahier/model_file.hpp"
#include "pwahier/pipeline.hpp"
#include "pwahier/simulator.hpp"

namespace {

using namespace pwahier;

ModelFile load_case(int which) {
  return load_model(std::filesystem::path(PWAHIER_MODELS_DIR) / ("case" + std::to_string(which) + ".model"));
}

void BM_SymEigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = u(rng);
  s = s.symmetric_part();
  for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(s));
}
BENCHMARK(BM_SymEigen)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_SolveRelation(benchmark::State& state) {
  const ModelFile model = load_case(1);
  const auto& mode = model.modes.front();
  const auto& abs = model.abstraction.modes.front();
  for (auto _ : state) benchmark::DoNotOptimize(solve_relation(mode.a, mode.b, mode.c, abs.f, abs.h));
}
BENCHMARK(BM_SolveRelation);

void BM_Synthesis(benchmark::State& state) {
  const ModelFile model = load_case(static_cast<int>(state.range(0)));
  const PreparedModel prep = prepare_model(model);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_certificate(prep.joints, model.certificate.kappa));
}
BENCHMARK(BM_Synthesis)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_RunScenario(benchmark::State& state) {
  const ModelFile model = load_case(static_cast<int>(state.range(0)));
  const Scenario sc = make_scenario(prepare_model(model), model);
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc));
}
BENCHMARK(BM_RunScenario)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
