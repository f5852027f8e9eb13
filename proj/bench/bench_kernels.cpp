// Serial reference vs OpenMP kernels on one FCM iteration.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fcmstop/fcm.hpp"
#include "fcmstop/kernels.hpp"

namespace {

using namespace fcmstop;

constexpr std::size_t kClusters = 6;
constexpr std::size_t kDims = 3;

struct Fixture {
  FeatureMatrix features;
  Matrix memberships;
  Matrix centers;
};

Fixture make_fixture(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(n * kDims);
  for (double& v : values) v = unit(rng);
  FeatureMatrix features(n, kDims, std::move(values));
  Matrix u = init_membership(n, kClusters, 7);
  Matrix c(kClusters, kDims);
  kernels::serial::compute_centers(features, u, 2.0, c);
  return {std::move(features), std::move(u), std::move(c)};
}

template <auto Centers>
void BM_Centers(benchmark::State& state) {
  auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
  Matrix out(kClusters, kDims);
  for (auto _ : state) {
    Centers(f.features, f.memberships, 2.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Update>
void BM_Memberships(benchmark::State& state) {
  auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
  Matrix out(kClusters, f.features.n_points());
  for (auto _ : state) {
    Update(f.features, f.centers, 2.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Objective>
void BM_Objective(benchmark::State& state) {
  auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Objective(f.features, f.memberships, f.centers, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RunFcm(benchmark::State& state) {
  auto f = make_fixture(4096);
  FcmConfig config;
  config.seed = 3;
  RunOptions opts;
  opts.backend = state.range(0) == 0 ? Backend::serial : Backend::parallel;
  for (auto _ : state) benchmark::DoNotOptimize(run_fcm(f.features, config, {}, opts).trace.n_iterations());
}

}  // namespace

BENCHMARK_TEMPLATE(BM_Centers, &kernels::serial::compute_centers)->Arg(4096)->Arg(65536);
BENCHMARK_TEMPLATE(BM_Centers, &kernels::parallel::compute_centers)->Arg(4096)->Arg(65536);
BENCHMARK_TEMPLATE(BM_Memberships, &kernels::serial::update_memberships)->Arg(4096)->Arg(65536);
BENCHMARK_TEMPLATE(BM_Memberships, &kernels::parallel::update_memberships)->Arg(4096)->Arg(65536);
BENCHMARK_TEMPLATE(BM_Objective, &kernels::serial::objective)->Arg(4096)->Arg(65536);
BENCHMARK_TEMPLATE(BM_Objective, &kernels::parallel::objective)->Arg(4096)->Arg(65536);
BENCHMARK(BM_RunFcm)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
