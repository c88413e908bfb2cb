#include <benchmark/benchmark.h>

#include "scalelaw/scalelaw.hpp"

using namespace scalelaw;

namespace {

LearningCurve make_bench_curve(double noise_sd, std::uint64_t seed) {
  SynthSpec spec;
  spec.theta = {-0.25, -0.05, -0.04};
  spec.n_switch = 300.0;
  spec.noise_sd = noise_sd;
  spec.seed = seed;
  spec.grid = {10, 20, 30, 40, 50, 600, 1200, 1800, 2400, 3000, 3600, 4200, 4800};
  spec.fit_count = 5;
  return gen_curve(spec);
}

void BM_FitPpl(benchmark::State& state) {
  const auto curve = make_bench_curve(0.02, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_ppl(curve.fit_points(), 300.0));
  }
}
BENCHMARK(BM_FitPpl);

void BM_FitPowerLaw3(benchmark::State& state) {
  const auto curve = make_bench_curve(0.02, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fit_family(PredictorFamily::power_law3, curve.fit_points(), std::nullopt));
  }
}
BENCHMARK(BM_FitPowerLaw3);

void BM_GroundTruthSwitch(benchmark::State& state) {
  const auto curve = make_bench_curve(0.02, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ground_truth_switch(curve));
  }
}
BENCHMARK(BM_GroundTruthSwitch);

void BM_RfTrain(benchmark::State& state) {
  const auto synth = gen_dictionary(static_cast<int>(state.range(0)), ParamRanges{}, 3);
  std::vector<MetaFeatures> x;
  std::vector<double> y;
  for (const auto& curve : synth.dict.entries) {
    x.push_back(extract_features(curve.fit_points(), curve.classes));
    y.push_back(std::log(ground_truth_switch(curve) / curve.classes));
  }
  ForestConfig config;
  config.seed = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rf_train(x, y, config));
  }
}
BENCHMARK(BM_RfTrain)->Arg(20)->Arg(40)->Arg(80);

void BM_RfPredict(benchmark::State& state) {
  const auto synth = gen_dictionary(40, ParamRanges{}, 3);
  std::vector<MetaFeatures> x;
  std::vector<double> y;
  for (const auto& curve : synth.dict.entries) {
    x.push_back(extract_features(curve.fit_points(), curve.classes));
    y.push_back(std::log(ground_truth_switch(curve) / curve.classes));
  }
  ForestConfig config;
  config.seed = 4;
  const auto model = rf_train(x, y, config);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rf_predict(model, x[i++ % x.size()]));
  }
}
BENCHMARK(BM_RfPredict);

void BM_BandGrid(benchmark::State& state) {
  const auto curve = make_bench_curve(0.02, 5);
  const auto fit = fit_ppl(curve.fit_points(), 300.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(band_grid(fit, 10.0, 5000.0, 200));
  }
}
BENCHMARK(BM_BandGrid);

void BM_SimulateCollection(benchmark::State& state) {
  const PplParams truth{{-0.25, -0.01, -0.03}, 500.0};
  const auto oracle = oracle_from_ppl(truth, 1e8);
  const auto curve = make_bench_curve(0.02, 6);
  const std::vector<PerformancePoint> init(curve.points.begin(), curve.points.begin() + 5);
  const double v_target = oracle.true_score(2500.0);
  CollectionPolicy policy;
  policy.family = PredictorFamily::ppl;
  policy.switch_source = SwitchSource::brute_force;
  policy.max_steps = 5;
  policy.tau = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_collection(oracle, init, 10, v_target, policy, 7));
  }
}
BENCHMARK(BM_SimulateCollection);

}  // namespace

BENCHMARK_MAIN();
