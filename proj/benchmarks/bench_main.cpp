#include <benchmark/benchmark.h>

#include "hkq/hyperpolygon.hpp"
#include "hkq/localization.hpp"

using namespace hkq;

namespace {

EdgeLengths lengths(benchmark::State& state) { return EdgeLengths::powers_of_two(static_cast<int>(state.range(0))); }

// Groebner basis of J from scratch; the instance is rebuilt so nothing is cached.
void BM_GroebnerJ(benchmark::State& state) {
  const EdgeLengths xi = lengths(state);
  std::size_t size = 0;
  for (auto _ : state) {
    const HyperpolygonInstance in(xi);
    size = in.ideal_J().basis().size();
    benchmark::DoNotOptimize(size);
  }
  state.counters["basis"] = static_cast<double>(size);
}
BENCHMARK(BM_GroebnerJ)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_ColonJe(benchmark::State& state) {
  const EdgeLengths xi = lengths(state);
  for (auto _ : state) {
    const HyperpolygonInstance in(xi);
    benchmark::DoNotOptimize(prop_hp(in).holds());
  }
}
BENCHMARK(BM_ColonJe)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_Certificates(benchmark::State& state) {
  const HyperpolygonInstance in(lengths(state));
  const auto subjects = in.table().nonempty_shorts();
  for (auto _ : state) {
    for (Subset s : subjects) benchmark::DoNotOptimize(certify_membership(in, s).combination.size());
  }
  state.counters["subjects"] = static_cast<double>(subjects.size());
}
BENCHMARK(BM_Certificates)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_CertificateFallback(benchmark::State& state) {
  const HyperpolygonInstance in(lengths(state));
  const auto subjects = in.table().nonempty_shorts();
  (void)in.ideal_J().basis();
  for (auto _ : state) {
    for (Subset s : subjects) {
      benchmark::DoNotOptimize(certify_membership(in, s, {.force_fallback = true}).combination.size());
    }
  }
}
BENCHMARK(BM_CertificateFallback)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_FullReport(benchmark::State& state) {
  const EdgeLengths xi = lengths(state);
  for (auto _ : state) benchmark::DoNotOptimize(full_report(xi).all_passed());
}
BENCHMARK(BM_FullReport)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_SegrePushforward(benchmark::State& state) {
  const Fixture fx = load_fixture(std::string(HKQ_FIXTURE_DIR) + "/segre.fixture");
  const ModelMap& f = fx.map("segre");
  const auto basis = f.source()->standard_basis();
  for (auto _ : state) {
    for (const auto& g : basis) benchmark::DoNotOptimize(f.pushforward(g));
  }
}
BENCHMARK(BM_SegrePushforward)->Unit(benchmark::kMicrosecond);

void BM_DiagonalBasis(benchmark::State& state) {
  const Fixture fx = load_fixture(std::string(HKQ_FIXTURE_DIR) + "/product.fixture");
  for (auto _ : state) {
    // a fresh model so the Gram inverse is not cached
    const auto m = std::make_shared<CircleCompactModel>(*fx.model("product"));
    benchmark::DoNotOptimize(diagonal_basis(m, diagonal_decomposition(m)));
  }
}
BENCHMARK(BM_DiagonalBasis)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
