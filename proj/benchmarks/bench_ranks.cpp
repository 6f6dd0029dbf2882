#include <benchmark/benchmark.h>

#include <random>

#include "ncrank/brank.hpp"
#include "ncrank/ncformula.hpp"
#include "ncrank/pencil.hpp"
#include "ncrank/wedge.hpp"

using namespace ncrank;

static void BM_DenseRankMod(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const DenseMatrix m = random_matrix(n, n, kDefaultModulus, rng);
  const ModField f(kDefaultModulus);
  std::vector<std::uint64_t> buf;
  for (auto _ : state) {
    buf.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) std::copy(m.row_ptr(i), m.row_ptr(i) + n, buf.data() + i * n);
    benchmark::DoNotOptimize(rank_mod_inplace(buf, n, n, f));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseRankMod)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNCubed);

static void BM_SparseRankMod(benchmark::State& state) {
  // diagonal plus a few entries in a narrow band, close to the fill pattern
  // of blow-ups of large formula pencils
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const ModField f(kDefaultModulus);
  std::vector<SparseRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> cols{static_cast<std::uint32_t>(i)};
    for (int k = 0; k < 3; ++k) cols.push_back((i + 1 + rng() % 8) % n);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (auto c : cols) {
      rows[i].cols.push_back(c);
      rows[i].vals.push_back(1 + rng() % (kDefaultModulus - 1));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(sparse_rank_mod(rows, n, f));
}
BENCHMARK(BM_SparseRankMod)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

static void BM_BareissRational(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  DenseMatrix m(n, n, ScalarDomain::rational());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set_int(i, j, static_cast<long>(rng() % 7) - 3);
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_BareissRational)->RangeMultiplier(2)->Range(16, 128);

static void BM_WedgeBlowup(benchmark::State& state) {
  // r(d) of A(p, 2p+1) at d = p+1
  const auto p = static_cast<unsigned>(state.range(0));
  const LinearPencil a = wedge_pencil(p, 2 * p + 1);
  SamplingConfig cfg;
  cfg.trials = 1;
  for (auto _ : state) benchmark::DoNotOptimize(blowup_rank_estimate(a, p + 1, cfg).observed_rank);
}
BENCHMARK(BM_WedgeBlowup)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_EquationsThreshold(benchmark::State& state) {
  const auto p = static_cast<unsigned>(state.range(0));
  SamplingConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(equations_threshold_check(p, cfg).observed_rank);
}
BENCHMARK(BM_EquationsThreshold)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_CertifyExplicit(benchmark::State& state) {
  const auto p = static_cast<unsigned>(state.range(0));
  const Tensor3 t = explicit_tensor(p);
  for (auto _ : state) benchmark::DoNotOptimize(certify(t, p, true).lower_bound);
}
BENCHMARK(BM_CertifyExplicit)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_RandomPencilNcrank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  const LinearPencil a = random_pencil(n, n, 3, rng);
  SamplingConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ncrank::ncrank(a, cfg));
}
BENCHMARK(BM_RandomPencilNcrank)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

static void BM_LinearizeBergman(benchmark::State& state) {
  const ExprPtr e = inv(sub(bergman_psi(), constant(1)));
  for (auto _ : state) {
    std::size_t total = 0;
    linearize_each(e, [&](const Realization& r) { total += r.size; });
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_LinearizeBergman)->Unit(benchmark::kMillisecond);

static void BM_NonmonotoneSearch(benchmark::State& state) {
  SamplingConfig cfg;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(find_blowup_nonmonotone(cfg).gate_id);
    } catch (const NotFound&) {
    }
  }
}
BENCHMARK(BM_NonmonotoneSearch)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
