#pragma once

#include <cstddef>
#include <span>

#include "ddf/channel.hpp"
#include "ddf/codebook.hpp"
#include "ddf/params.hpp"

namespace ddf {

struct DecodeResult {
  std::size_t message = 0;
  int m_hat = 0;
  double log_likelihood = 0.0;
};

/// Gaussian log-density of y given the source codeword and the Alamouti relay
/// signal it induces for decision slot m, up to the hypothesis-independent
/// constant -MT ln(pi sigma_w^2).
double likelihood(std::span<const Complex> y, std::span<const Complex> codeword, int m,
                  const ChannelRealization& ch, const SystemParams& params,
                  TailPolicy tail = TailPolicy::kSourceOnly);

/// argmax over (w, m); ties go to the smaller m, then the smaller w.
DecodeResult glrt_decode(std::span<const Complex> y, const ChannelRealization& ch,
                         const Codebook& codebook, const SystemParams& params,
                         TailPolicy tail = TailPolicy::kSourceOnly);

/// Exhaustive ML on the combined parallel channel for a known decision slot.
std::size_t ml_decode_genie(std::span<const Complex> y_combined, int m_true,
                            const ChannelRealization& ch, const Codebook& codebook,
                            const SystemParams& params, TailPolicy tail = TailPolicy::kSourceOnly);

/// Codebook-blind log-likelihood of decision slot m with Gaussian inputs of
/// energy rho.
double rad_log_likelihood(std::span<const Complex> y, int m, const ChannelRealization& ch,
                          const SystemParams& params);

/// Relay activity detection: argmax over m of rad_log_likelihood, ties to the
/// smaller m.
int rad_detect(std::span<const Complex> y, const ChannelRealization& ch, const SystemParams& params);

/// Probability that the detector prefers m' > m when the true slot is m.
double rad_pairwise_closed_form(int m, int m_prime, const ChannelRealization& ch,
                                const SystemParams& params);

}  // namespace ddf
