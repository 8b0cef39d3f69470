#pragma once

#include <span>

#include "ddf/params.hpp"
#include "ddf/rng.hpp"

namespace ddf {

/// How a phase-2 stretch of odd length is handled by the Alamouti relay.
enum class TailPolicy {
  kSourceOnly,  // the unpaired final symbol is sent by the source alone
  kReject,      // odd phase-2 length is a contract violation
};

/// Draws h, g1, g2 i.i.d. CN(0,1) and sets the noise variances from `params`.
ChannelRealization draw_channel(const SystemParams& params, Rng& rng);

/// y_r,k = h x_s,k + v_k for the first m slots.
Signal relay_receive(std::span<const Complex> source, int decision_slot, int slot_length,
                     const ChannelRealization& ch, Rng& rng);

/// y_k = g1 x_s,k + g2 x_r,k + w_k over the whole block. `relay` must be zero on
/// the listening phase (first m slots).
Signal destination_receive(std::span<const Complex> source, std::span<const Complex> relay,
                           int decision_slot, int slot_length, const ChannelRealization& ch,
                           Rng& rng);

/// Alamouti relay transmission built from the relay's estimate of the source
/// codeword: pairs (a, b) after the decision slot become (conj(b), -conj(a)).
Signal alamouti_relay_signal(std::span<const Complex> source_estimate, int decision_slot,
                             int slot_length, TailPolicy tail = TailPolicy::kSourceOnly);

/// Per-symbol gains of the combined parallel channel: g1 on listening symbols
/// (and an unpaired tail symbol), sqrt(|g1|^2 + |g2|^2) on Alamouti pairs.
std::vector<Complex> combined_gains(int block_length, int decision_slot, int slot_length,
                                    const ChannelRealization& ch,
                                    TailPolicy tail = TailPolicy::kSourceOnly);

/// Linear Alamouti combining. Each output pair is an orthonormal transform of
/// the received pair, so the combined noise keeps variance sigma_w^2.
Signal alamouti_combine(std::span<const Complex> received, int decision_slot, int slot_length,
                        const ChannelRealization& ch, TailPolicy tail = TailPolicy::kSourceOnly);

}  // namespace ddf
