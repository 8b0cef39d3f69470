#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ddf/channel.hpp"
#include "ddf/destination.hpp"
#include "ddf/lattice_codes.hpp"
#include "ddf/special_functions.hpp"

using namespace ddf;

namespace {

SystemParams block4(double snr_db) {
  SystemParams p;
  p.num_slots = 4;
  p.slot_length = 1;
  p.rate_bpcu = 2.0;
  p.snr_db = snr_db;
  return p;
}

ChannelRealization fixed(Complex g1, Complex g2, double sw = 1.0) {
  ChannelRealization ch;
  ch.source_relay = 1.0;
  ch.source_dest = g1;
  ch.relay_dest = g2;
  ch.relay_noise_var = 1.0;
  ch.dest_noise_var = sw;
  return ch;
}

Signal transmit(std::span<const Complex> x, int m, const ChannelRealization& ch, const SystemParams& p,
                Rng& rng) {
  return destination_receive(x, alamouti_relay_signal(x, m, p.slot_length), m, p.slot_length, ch, rng);
}

}  // namespace

TEST_CASE("destination likelihood") {
  const SystemParams p = block4(10.0);
  const Codebook book = qam_codebook(build_rotation(4), 2, p.symbol_energy());
  Rng rng(1);
  const auto ch = fixed({0.4, -0.7}, {1.1, 0.2}, 0.0);
  ChannelRealization noisy = ch;
  noisy.dest_noise_var = 1.0;

  SUBCASE("noiseless observation peaks at the transmitted hypothesis") {
    const auto x = book.codeword(77);
    const auto y = transmit(x, 2, ch, p, rng);
    CHECK(likelihood(y, x, 2, noisy, p) == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t w = 0; w < book.size(); ++w)
      if (w != 77) CHECK(likelihood(y, book.codeword(w), 2, noisy, p) < -1e-6);
  }
  SUBCASE("silent hypothesis is the direct-link distance") {
    const auto x = book.codeword(3);
    const auto y = transmit(book.codeword(9), 1, noisy, p, rng);
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d += std::norm(y[k] - noisy.source_dest * x[k]);
    CHECK(likelihood(y, x, 4, noisy, p) == doctest::Approx(-d));
  }
  SUBCASE("length checks") {
    const Signal short_y(3);
    CHECK_THROWS_AS(likelihood(short_y, book.codeword(0), 2, noisy, p), std::invalid_argument);
  }
}

TEST_CASE("GLRT decoding") {
  const SystemParams p = block4(6.0);
  const Codebook book = qam_codebook(build_rotation(4), 2, p.symbol_energy());
  Rng rng(2);

  SUBCASE("a single slot reduces to direct-link ML") {
    SystemParams one = p;
    one.num_slots = 1;
    const Codebook small = qam_codebook(build_rotation(1), 2, one.symbol_energy());
    for (int trial = 0; trial < 100; ++trial) {
      const auto ch = draw_channel(one, rng);
      const auto x = small.codeword(static_cast<std::size_t>(trial % 4));
      const auto y = transmit(x, 1, ch, one, rng);
      const auto r = glrt_decode(y, ch, small, one);
      CHECK(r.m_hat == 1);
      CHECK(r.message == ml_decode_genie(y, 1, ch, small, one));
    }
  }
  SUBCASE("the decision dominates every hypothesis pair") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ch = draw_channel(p, rng);
      const int m_true = 1 + trial % 4;
      const auto y = transmit(book.codeword(static_cast<std::size_t>(trial * 11 % 256)), m_true, ch, p, rng);
      const auto r = glrt_decode(y, ch, book, p);
      double best = -1e300;
      for (std::size_t w = 0; w < book.size(); ++w)
        for (int m = 1; m <= 4; ++m) {
          const double ll = likelihood(y, book.codeword(w), m, ch, p);
          CHECK(ll <= r.log_likelihood + 1e-9 * std::abs(r.log_likelihood));
          best = std::max(best, ll);
        }
      CHECK(r.log_likelihood == doctest::Approx(best));
      CHECK(likelihood(y, book.codeword(r.message), r.m_hat, ch, p) == doctest::Approx(r.log_likelihood));
    }
  }
  SUBCASE("agrees with the genie decoder whenever the slot is detected") {
    int matched = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto ch = draw_channel(p, rng);
      const int m_true = 1 + trial % 4;
      const auto y = transmit(book.codeword(static_cast<std::size_t>(trial % 256)), m_true, ch, p, rng);
      const auto r = glrt_decode(y, ch, book, p);
      if (r.m_hat != m_true) continue;
      ++matched;
      const auto yc = alamouti_combine(y, m_true, 1, ch);
      CHECK(r.message == ml_decode_genie(yc, m_true, ch, book, p));
    }
    CHECK(matched > 50);
  }
  SUBCASE("ties go to the smaller slot") {
    const auto ch = fixed(1.0, 0.0);
    const auto y = transmit(book.codeword(5), 2, ch, p, rng);
    CHECK(glrt_decode(y, ch, book, p).m_hat == 1);
  }
}

TEST_CASE("genie ML") {
  const SystemParams p = block4(8.0);
  const Codebook book = qam_codebook(build_rotation(4), 2, p.symbol_energy());
  Rng rng(3);

  SUBCASE("combined-domain decision equals the raw likelihood argmax") {
    for (int trial = 0; trial < 100; ++trial) {
      const auto ch = draw_channel(p, rng);
      const int m = 1 + trial % 4;
      const auto y = transmit(book.codeword(static_cast<std::size_t>(trial * 7 % 256)), m, ch, p, rng);
      std::size_t arg = 0;
      double best = -1e300;
      for (std::size_t w = 0; w < book.size(); ++w) {
        const double ll = likelihood(y, book.codeword(w), m, ch, p);
        if (ll > best) {
          best = ll;
          arg = w;
        }
      }
      CHECK(ml_decode_genie(alamouti_combine(y, m, 1, ch), m, ch, book, p) == arg);
    }
  }
  SUBCASE("at -60 dB the decision is a uniform guess") {
    const SystemParams quiet = block4(-60.0);
    const Codebook faint = qam_codebook(build_rotation(4), 2, quiet.symbol_energy());
    const int n = 4000;
    int errors = 0;
    for (int trial = 0; trial < n; ++trial) {
      const auto ch = draw_channel(quiet, rng);
      const auto w = static_cast<std::size_t>(trial % 256);
      const auto y = transmit(faint.codeword(w), 2, ch, quiet, rng);
      errors += ml_decode_genie(alamouti_combine(y, 2, 1, ch), 2, ch, faint, quiet) != w;
    }
    const double expect = 1.0 - 1.0 / 256.0;
    const double se = std::sqrt(expect * (1.0 - expect) / n);
    CHECK(std::abs(static_cast<double>(errors) / n - expect) < 3.0 * se);
  }
}

TEST_CASE("relay activity detection") {
  SUBCASE("erlang_cdf against the finite series") {
    for (int k : {1, 2, 5, 12, 64}) {
      for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 60.0, 100.0}) {
        double term = 1.0, sum = 1.0;
        for (int j = 1; j < k; ++j) {
          term *= x / j;
          sum += term;
        }
        const double series = 1.0 - std::exp(-x) * sum;
        CHECK(erlang_cdf(x, k) == doctest::Approx(series).epsilon(1e-9).scale(1.0));
      }
    }
    CHECK(erlang_cdf(0.0, 3) == 0.0);
    CHECK(regularized_gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  }

  SystemParams p = block4(20.0);
  p.slot_length = 64;

  SUBCASE("strong relay link at T = 64") {
    const auto ch = fixed(1.0, std::sqrt(10.0));
    Rng rng(4);
    const int n = 400;
    int right = 0;
    for (int trial = 0; trial < n; ++trial) {
      Signal x(p.block_length());
      for (auto& v : x) v = complex_normal(rng, p.symbol_energy());
      right += rad_detect(transmit(x, 2, ch, p, rng), ch, p) == 2;
    }
    CHECK(right >= 0.95 * n);
  }
  SUBCASE("without a relay path the detector reports slot 1") {
    const auto ch = fixed({0.3, 0.2}, 0.0);
    Rng rng(5);
    Signal x(p.block_length());
    for (auto& v : x) v = complex_normal(rng, p.symbol_energy());
    CHECK(rad_detect(transmit(x, 3, ch, p, rng), ch, p) == 1);
  }
  SUBCASE("depends on y only through per-symbol energies") {
    const auto ch = fixed({0.3, 0.2}, {0.9, -0.4});
    Rng rng(6);
    Signal x(p.block_length());
    for (auto& v : x) v = complex_normal(rng, p.symbol_energy());
    const auto y = transmit(x, 2, ch, p, rng);
    Signal turned = y;
    for (auto& v : turned) v *= std::polar(1.0, 6.283185307179586 * uniform01(rng));
    for (int m = 1; m <= 4; ++m)
      CHECK(rad_log_likelihood(turned, m, ch, p) == doctest::Approx(rad_log_likelihood(y, m, ch, p)));
  }
  SUBCASE("pairwise error") {
    SystemParams q = block4(10.0);
    q.slot_length = 4;
    const auto ch = fixed({0.5, 0.0}, {0.3, 0.0});
    const double pe = rad_pairwise_closed_form(1, 3, ch, q);
    CHECK(pe > 0.0);
    CHECK(pe < erlang_cdf(8.0, 8.0));

    // Vanishing relay gain approaches P(S < n) for an Erlang sum of n terms.
    const auto weak = fixed({0.5, 0.0}, {1e-7, 0.0});
    CHECK(rad_pairwise_closed_form(1, 3, weak, q) == doctest::Approx(erlang_cdf(8.0, 8.0)).epsilon(1e-6));
    CHECK(rad_pairwise_closed_form(1, 3, fixed(0.5, 0.0), q) == doctest::Approx(erlang_cdf(8.0, 8.0)));

    double prev = 1.0;
    for (double g : {0.1, 0.3, 1.0, 3.0}) {
      const double v = rad_pairwise_closed_form(2, 4, fixed(0.5, g), q);
      CHECK(v < prev);
      prev = v;
    }

    // Monte Carlo with Gaussian inputs under the true slot.
    const double rho = q.snr();
    const double a1 = std::norm(ch.source_dest) * rho + 1.0;
    const double a2 = (std::norm(ch.source_dest) + std::norm(ch.relay_dest)) * rho + 1.0;
    Rng rng(7);
    const int n = 40000;
    int wrong = 0;
    for (int trial = 0; trial < n; ++trial) {
      Signal y(q.block_length());
      for (int k = 0; k < q.block_length(); ++k) y[k] = complex_normal(rng, k < 4 ? a1 : a2);
      wrong += rad_log_likelihood(y, 3, ch, q) > rad_log_likelihood(y, 1, ch, q);
    }
    const double se = std::sqrt(pe * (1.0 - pe) / n);
    CHECK(std::abs(static_cast<double>(wrong) / n - pe) < 3.0 * se);

    CHECK_THROWS_AS(rad_pairwise_closed_form(3, 3, ch, q), std::invalid_argument);
    CHECK_THROWS_AS(rad_pairwise_closed_form(2, 5, ch, q), std::invalid_argument);
    CHECK_THROWS_AS(rad_pairwise_closed_form(0, 2, ch, q), std::invalid_argument);
  }
}
