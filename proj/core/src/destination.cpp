#include "ddf/destination.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ddf/special_functions.hpp"

namespace ddf {

namespace {

void check_block(std::span<const Complex> y, const SystemParams& params) {
  if (static_cast<int>(y.size()) != params.block_length())
    throw std::invalid_argument("received block length does not match M T");
}

}  // namespace

double likelihood(std::span<const Complex> y, std::span<const Complex> codeword, int m,
                  const ChannelRealization& ch, const SystemParams& params, TailPolicy tail) {
  check_block(y, params);
  if (codeword.size() != y.size()) throw std::invalid_argument("codeword length mismatch");
  const Signal relay = alamouti_relay_signal(codeword, m, params.slot_length, tail);
  double d = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k)
    d += std::norm(y[k] - ch.source_dest * codeword[k] - ch.relay_dest * relay[k]);
  return -d / ch.dest_noise_var;
}

DecodeResult glrt_decode(std::span<const Complex> y, const ChannelRealization& ch,
                         const Codebook& codebook, const SystemParams& params, TailPolicy tail) {
  check_block(y, params);
  const int n = params.block_length();
  const int t = params.slot_length;
  if (codebook.length() != n) throw std::invalid_argument("codebook length mismatch");

  DecodeResult best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  const Complex g1 = ch.source_dest;
  const Complex g2 = ch.relay_dest;
  std::vector<double> direct(n);
  for (std::size_t w = 0; w < codebook.size(); ++w) {
    const auto x = codebook.codeword(w);
    // Suffix sums of the relay-free residual let each m reuse the tail.
    for (int k = 0; k < n; ++k) direct[k] = std::norm(y[k] - g1 * x[k]);
    for (int m = 1; m <= params.num_slots; ++m) {
      const int start = m * t;
      const int phase2 = n - start;
      const int paired = tail == TailPolicy::kReject || phase2 % 2 == 0 ? phase2 : phase2 - 1;
      if (phase2 % 2 != 0 && tail == TailPolicy::kReject)
        throw std::invalid_argument("odd phase-2 length with Alamouti relay");
      double d = 0.0;
      for (int k = 0; k < start; ++k) d += direct[k];
      for (int k = start; k < start + paired; k += 2) {
        d += std::norm(y[k] - g1 * x[k] - g2 * std::conj(x[k + 1]));
        d += std::norm(y[k + 1] - g1 * x[k + 1] + g2 * std::conj(x[k]));
      }
      for (int k = start + paired; k < n; ++k) d += direct[k];
      const double ll = -d / ch.dest_noise_var;
      if (ll > best.log_likelihood) {
        best.log_likelihood = ll;
        best.message = w;
        best.m_hat = m;
      } else if (ll == best.log_likelihood &&
                 (m < best.m_hat || (m == best.m_hat && w < best.message))) {
        best.message = w;
        best.m_hat = m;
      }
    }
  }
  return best;
}

std::size_t ml_decode_genie(std::span<const Complex> y_combined, int m_true,
                            const ChannelRealization& ch, const Codebook& codebook,
                            const SystemParams& params, TailPolicy tail) {
  check_block(y_combined, params);
  const auto gains = combined_gains(params.block_length(), m_true, params.slot_length, ch, tail);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < codebook.size(); ++w) {
    const auto x = codebook.codeword(w);
    double d = 0.0;
    for (std::size_t k = 0; k < gains.size() && d < best_d; ++k)
      d += std::norm(y_combined[k] - gains[k] * x[k]);
    if (d < best_d) {
      best_d = d;
      best = w;
    }
  }
  return best;
}

double rad_log_likelihood(std::span<const Complex> y, int m, const ChannelRealization& ch,
                          const SystemParams& params) {
  check_block(y, params);
  if (m < 1 || m > params.num_slots) throw std::invalid_argument("decision slot out of range");
  const double rho = params.snr();
  const double a1 = std::norm(ch.source_dest) * rho + ch.dest_noise_var;
  const double a2 = (std::norm(ch.source_dest) + std::norm(ch.relay_dest)) * rho + ch.dest_noise_var;
  const int start = m * params.slot_length;
  double e1 = 0.0, e2 = 0.0;
  for (int k = 0; k < start; ++k) e1 += std::norm(y[k]);
  for (int k = start; k < params.block_length(); ++k) e2 += std::norm(y[k]);
  const double n1 = start;
  const double n2 = params.block_length() - start;
  return -n1 * std::log(std::numbers::pi * a1) - e1 / a1 - n2 * std::log(std::numbers::pi * a2) - e2 / a2;
}

int rad_detect(std::span<const Complex> y, const ChannelRealization& ch, const SystemParams& params) {
  int best = 1;
  double best_ll = rad_log_likelihood(y, 1, ch, params);
  for (int m = 2; m <= params.num_slots; ++m) {
    const double ll = rad_log_likelihood(y, m, ch, params);
    if (ll > best_ll) {
      best_ll = ll;
      best = m;
    }
  }
  return best;
}

double rad_pairwise_closed_form(int m, int m_prime, const ChannelRealization& ch,
                                const SystemParams& params) {
  if (m < 1 || m_prime <= m || m_prime > params.num_slots)
    throw std::invalid_argument("pairwise error needs 1 <= m < m' <= M");
  const double rho = params.snr();
  const double x2 = std::norm(ch.relay_dest) * rho / (std::norm(ch.source_dest) * rho + ch.dest_noise_var);
  const double terms = static_cast<double>(m_prime - m) * params.slot_length;
  const double shrink = x2 > 0.0 ? std::log1p(x2) / x2 : 1.0;
  return erlang_cdf(terms * shrink, terms);
}

}  // namespace ddf
