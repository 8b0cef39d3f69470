#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace ddf {

using Complex = std::complex<double>;

/// Complex baseband samples of one codeword (or a slot-aligned prefix of it).
using Signal = std::vector<Complex>;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Protocol constants shared by every module.
///
/// A source codeword spans `num_slots` slots of `slot_length` symbols. The
/// power convention is fixed: destination noise variance 1, symbol energy equal
/// to the linear destination SNR, relay noise variance E / rho'.
struct SystemParams {
  int num_slots = 4;
  int slot_length = 1;
  double rate_bpcu = 2.0;
  double snr_db = 10.0;
  double relay_offset_db = 3.0;
  std::uint64_t seed = 1;

  int block_length() const { return num_slots * slot_length; }
  double snr() const { return db_to_linear(snr_db); }
  double relay_snr() const { return db_to_linear(snr_db + relay_offset_db); }
  double symbol_energy() const { return snr(); }
  double dest_noise_var() const { return 1.0; }
  double relay_noise_var() const { return symbol_energy() / relay_snr(); }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// One quasi-static fading draw plus the noise variances it is used with.
struct ChannelRealization {
  Complex source_relay;  // h
  Complex source_dest;   // g1
  Complex relay_dest;    // g2
  double relay_noise_var = 1.0;
  double dest_noise_var = 1.0;
};

}  // namespace ddf
