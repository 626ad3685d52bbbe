#include <benchmark/benchmark.h>

#include "otfs/dictionary.hpp"
#include "otfs/estimators.hpp"
#include "otfs/harness/config.hpp"
#include "otfs/harness/experiment.hpp"
#include "otfs/modem.hpp"

namespace {

using namespace otfs;

// Square frame of side M with a 4 x 4 search grid; the pilot block is one column.
struct Setup {
  explicit Setup(Index m)
      : grid(OtfsGrid::rectangular(m, m, 15e3)), support(4, 4, 4), atoms(support_atoms(grid, support)) {
    Rng rng(static_cast<std::uint64_t>(m));
    pilots = qpsk_pilots(m, 1, 0.5, rng);
    data = rng.complex_normal(m, m - 1, 0.5);
    omega_p = mimo_dictionary_from_atoms(std::vector<CMatrix>{pilots}, atoms);
    CVector h = CVector::Zero(support.size());
    h(1) = 0.6;
    h(6) = Complex(0.1, -0.5);
    h(13) = -0.4;
    y = omega_p * h + rng.complex_normal(m, 1, 0.1);
    noise = RVector::Constant(m, 0.1);
  }
  OtfsGrid grid;
  ChannelSupport support;
  std::vector<DdAtom> atoms;
  CMatrix pilots, data, omega_p, y;
  RVector noise;
};

void BM_DataDictionary(benchmark::State& state) {
  const Setup s(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mimo_dictionary_from_atoms(std::vector<CMatrix>{s.data}, s.atoms));
}
BENCHMARK(BM_DataDictionary)->Arg(16)->Arg(32)->Arg(64);

void BM_EStep(benchmark::State& state) {
  const Setup s(state.range(0));
  const CMatrix omega_d = mimo_dictionary_from_atoms(std::vector<CMatrix>{s.data}, s.atoms);
  const CMatrix gram = omega_d.adjoint() * omega_d;
  const CMatrix cross = omega_d.adjoint() * CMatrix::Ones(omega_d.rows(), 1);
  const RVector lambda = RVector::Constant(s.support.size(), 0.5);
  CMatrix mean, cov;
  for (auto _ : state) {
    em_estep(gram, cross, lambda, 1, mean, cov);
    benchmark::DoNotOptimize(mean.data());
  }
}
BENCHMARK(BM_EStep)->Arg(16)->Arg(32);

void BM_PaBl(benchmark::State& state) {
  const Setup s(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pa_bl_siso(s.y, s.omega_p, s.noise, EmSettings{}));
}
BENCHMARK(BM_PaBl)->Arg(16)->Arg(32)->Arg(64);

void BM_XiMatrix(benchmark::State& state) {
  const Setup s(state.range(0));
  const Index n = s.support.size();
  Rng rng(5);
  const CMatrix a = rng.complex_normal(n, n);
  const CMatrix cov = a * a.adjoint();
  const XiForm form = state.range(1) == 0 ? XiForm::kGram : XiForm::kOuter;
  for (auto _ : state) benchmark::DoNotOptimize(xi_matrix(cov, s.atoms, form));
}
BENCHMARK(BM_XiMatrix)->Args({16, 0})->Args({16, 1})->Args({64, 0})->Args({64, 1});

// One trial of a single scheme on the default 16 x 16 configuration.
void BM_Trial(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.snr_db = {10.0};
  cfg.tx_antennas = cfg.rx_antennas = state.range(0);
  cfg.schemes = {state.range(1) == 0 ? "pa_bl" : "da_bl_lmmse"};
  const TrialRunner runner(cfg);
  Index trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(runner.run(0, trial++));
}
BENCHMARK(BM_Trial)->Args({1, 0})->Args({1, 1})->Args({2, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
