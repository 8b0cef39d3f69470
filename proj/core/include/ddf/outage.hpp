#pragma once

#include <cstdint>
#include <vector>

#include "ddf/params.hpp"

namespace ddf {

/// mT log2(1 + |g1|^2 rho) + (M - m)T log2(1 + (|g1|^2 + |g2|^2) rho).
double msc_mutual_info(const ChannelRealization& ch, int m, const SystemParams& params);

/// P(phi1 = m) for Rayleigh h.
double decision_time_pmf_closed(int m, const SystemParams& params);

/// Counters of an outage Monte Carlo run, indexed by decision slot 1..M
/// (index 0 unused).
struct OutageEstimate {
  long trials = 0;
  long outages = 0;
  std::vector<long> decisions;          // #{phi1 = m}
  std::vector<long> outages_given_slot;  // #{phi1 = m and outage}

  double p_out() const;
  double p_decision(int m) const;
  double p_out_given(int m) const;
  /// sum_m P(M = m) P(out | M = m) on the sample.
  double total_probability() const;
};

/// Decision time from phi1; outage when the m-switch channel carries less
/// than M T R bits. Trial i uses substream (seed, stream, i).
OutageEstimate outage_mc(const SystemParams& params, long trials, std::uint64_t stream = 0);

}  // namespace ddf
