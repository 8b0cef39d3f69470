#include "ddf/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddf {

void SystemParams::validate() const {
  if (num_slots < 1) throw std::invalid_argument("num_slots must be >= 1");
  if (slot_length < 1) throw std::invalid_argument("slot_length must be >= 1");
  if (!(rate_bpcu > 0.0)) throw std::invalid_argument("rate must be positive");
  if (!std::isfinite(snr_db) || !std::isfinite(relay_offset_db))
    throw std::invalid_argument("SNR values must be finite");
}

namespace {

void check_slot(int decision_slot, int block_length, int slot_length) {
  if (slot_length < 1) throw std::invalid_argument("slot_length must be >= 1");
  if (decision_slot < 1 || decision_slot * slot_length > block_length)
    throw std::invalid_argument("decision slot " + std::to_string(decision_slot) +
                                " outside the block");
}

// Number of phase-2 symbols covered by Alamouti pairs.
int paired_length(int block_length, int decision_slot, int slot_length, TailPolicy tail) {
  const int phase2 = block_length - decision_slot * slot_length;
  if (phase2 % 2 != 0 && tail == TailPolicy::kReject)
    throw std::invalid_argument("odd phase-2 length with Alamouti relay");
  return phase2 - phase2 % 2;
}

}  // namespace

ChannelRealization draw_channel(const SystemParams& params, Rng& rng) {
  ChannelRealization ch;
  ch.source_relay = complex_normal(rng, 1.0);
  ch.source_dest = complex_normal(rng, 1.0);
  ch.relay_dest = complex_normal(rng, 1.0);
  ch.dest_noise_var = params.dest_noise_var();
  ch.relay_noise_var = params.relay_noise_var();
  return ch;
}

Signal relay_receive(std::span<const Complex> source, int decision_slot, int slot_length,
                     const ChannelRealization& ch, Rng& rng) {
  check_slot(decision_slot, static_cast<int>(source.size()), slot_length);
  const auto n = static_cast<std::size_t>(decision_slot * slot_length);
  Signal y(n);
  for (std::size_t k = 0; k < n; ++k)
    y[k] = ch.source_relay * source[k] + complex_normal(rng, ch.relay_noise_var);
  return y;
}

Signal destination_receive(std::span<const Complex> source, std::span<const Complex> relay,
                           int decision_slot, int slot_length, const ChannelRealization& ch,
                           Rng& rng) {
  if (source.size() != relay.size())
    throw std::invalid_argument("source and relay blocks differ in length");
  check_slot(decision_slot, static_cast<int>(source.size()), slot_length);
  const auto listen = static_cast<std::size_t>(decision_slot * slot_length);
  for (std::size_t k = 0; k < listen; ++k)
    if (relay[k] != Complex{}) throw std::invalid_argument("relay active during listening phase");

  Signal y(source.size());
  for (std::size_t k = 0; k < source.size(); ++k) {
    y[k] = ch.source_dest * source[k] + complex_normal(rng, ch.dest_noise_var);
    if (k >= listen) y[k] += ch.relay_dest * relay[k];
  }
  return y;
}

Signal alamouti_relay_signal(std::span<const Complex> source_estimate, int decision_slot,
                             int slot_length, TailPolicy tail) {
  const int n = static_cast<int>(source_estimate.size());
  check_slot(decision_slot, n, slot_length);
  const int start = decision_slot * slot_length;
  const int paired = paired_length(n, decision_slot, slot_length, tail);

  Signal x(source_estimate.size());
  for (int k = start; k < start + paired; k += 2) {
    x[k] = std::conj(source_estimate[k + 1]);
    x[k + 1] = -std::conj(source_estimate[k]);
  }
  return x;
}

std::vector<Complex> combined_gains(int block_length, int decision_slot, int slot_length,
                                    const ChannelRealization& ch, TailPolicy tail) {
  check_slot(decision_slot, block_length, slot_length);
  const int start = decision_slot * slot_length;
  const int paired = paired_length(block_length, decision_slot, slot_length, tail);
  const double gamma = std::sqrt(std::norm(ch.source_dest) + std::norm(ch.relay_dest));

  std::vector<Complex> gains(block_length, ch.source_dest);
  for (int k = start; k < start + paired; ++k) gains[k] = gamma;
  return gains;
}

Signal alamouti_combine(std::span<const Complex> received, int decision_slot, int slot_length,
                        const ChannelRealization& ch, TailPolicy tail) {
  const int n = static_cast<int>(received.size());
  check_slot(decision_slot, n, slot_length);
  const int start = decision_slot * slot_length;
  const int paired = paired_length(n, decision_slot, slot_length, tail);

  Signal out(received.begin(), received.end());
  const Complex g1 = ch.source_dest;
  const Complex g2 = ch.relay_dest;
  const double gamma = std::sqrt(std::norm(g1) + std::norm(g2));
  if (gamma == 0.0) return out;

  for (int k = start; k < start + paired; k += 2) {
    const Complex a = received[k];
    const Complex b = received[k + 1];
    out[k] = (std::conj(g1) * a - g2 * std::conj(b)) / gamma;
    out[k + 1] = (std::conj(g1) * b + g2 * std::conj(a)) / gamma;
  }
  return out;
}

}  // namespace ddf
