#include <benchmark/benchmark.h>

#include <random>

#include "ddf/channel.hpp"
#include "ddf/destination.hpp"
#include "ddf/lattice_codes.hpp"
#include "ddf/lattice_decoder.hpp"
#include "ddf/relay.hpp"
#include "ddf/sphere.hpp"

using namespace ddf;

namespace {

SystemParams params(int order) {
  SystemParams p;
  p.num_slots = 4;
  p.slot_length = 1;
  p.rate_bpcu = order == 2 ? 2.0 : 4.0;
  p.snr_db = 16.0;
  return p;
}

void BM_SphereClosest(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = normal(rng);
  Eigen::VectorXd y(dim);
  for (auto _ : state) {
    for (int i = 0; i < dim; ++i) y(i) = 3.0 * normal(rng);
    benchmark::DoNotOptimize(sphere_closest(b, y));
  }
}
BENCHMARK(BM_SphereClosest)->Arg(4)->Arg(8)->Arg(16);

void BM_CandidateList(benchmark::State& state) {
  const int dim = 8;
  Rng rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = normal(rng);
  Eigen::VectorXd y(dim);
  for (auto _ : state) {
    for (int i = 0; i < dim; ++i) y(i) = 3.0 * normal(rng);
    benchmark::DoNotOptimize(candidate_list(b, y, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_CandidateList)->Arg(16)->Arg(64);

void BM_LatticeDecode(benchmark::State& state) {
  const SystemParams p = params(2);
  const CosetCodebook cb(build_rotation(4), 2, p.symbol_energy());
  Rng rng(3);
  for (auto _ : state) {
    const auto cw = coset_encode(5, cb, rng);
    const auto ch = draw_channel(p, rng);
    Signal y(4);
    for (int k = 0; k < 4; ++k) y[k] = ch.source_dest * cw.signal[k] + complex_normal(rng, 1.0);
    const std::vector<Complex> gains(4, ch.source_dest);
    benchmark::DoNotOptimize(lattice_decode_mmse(coset_observation_model(gains, y, 1.0, cb), cb, cw.dither));
  }
}
BENCHMARK(BM_LatticeDecode);

void BM_ExhaustiveRelay(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const SystemParams p = params(order);
  const Codebook book = qam_codebook(build_rotation(4), order, p.symbol_energy());
  Rng rng(4);
  for (auto _ : state) {
    const auto ch = draw_channel(p, rng);
    const auto y = relay_receive(book.codeword(7), 4, 1, ch, rng);
    ExhaustiveRelayDecoder dec(book, y, ch.source_relay, ch.relay_noise_var, 1);
    for (int m = 1; m < 4; ++m) benchmark::DoNotOptimize(dec.decode(m));
  }
}
BENCHMARK(BM_ExhaustiveRelay)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Glrt(benchmark::State& state) {
  const SystemParams p = params(2);
  const Codebook book = qam_codebook(build_rotation(4), 2, p.symbol_energy());
  Rng rng(5);
  for (auto _ : state) {
    const auto ch = draw_channel(p, rng);
    const auto x = book.codeword(11);
    const auto y = destination_receive(x, alamouti_relay_signal(x, 2, 1), 2, 1, ch, rng);
    benchmark::DoNotOptimize(glrt_decode(y, ch, book, p));
  }
}
BENCHMARK(BM_Glrt)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
