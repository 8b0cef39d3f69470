#include "ddf/outage.hpp"

#include <cmath>
#include <stdexcept>

#include "ddf/channel.hpp"
#include "ddf/relay.hpp"
#include "ddf/rng.hpp"

namespace ddf {

double msc_mutual_info(const ChannelRealization& ch, int m, const SystemParams& params) {
  if (m < 1 || m > params.num_slots) throw std::invalid_argument("decision slot out of range");
  const double rho = params.snr();
  const double t = params.slot_length;
  const double g1 = std::norm(ch.source_dest);
  const double g2 = std::norm(ch.relay_dest);
  return m * t * std::log2(1.0 + g1 * rho) +
         (params.num_slots - m) * t * std::log2(1.0 + (g1 + g2) * rho);
}

double decision_time_pmf_closed(int m, const SystemParams& params) {
  const int big_m = params.num_slots;
  if (m < 1 || m > big_m) throw std::invalid_argument("decision slot out of range");
  auto survival = [&](int j) {
    // P(|h|^2 > (2^(MR/j) - 1) / rho'), with j = 0 giving 0.
    if (j == 0) return 0.0;
    return std::exp(-(std::exp2(big_m * params.rate_bpcu / j) - 1.0) / params.relay_snr());
  };
  if (m < big_m) return survival(m) - survival(m - 1);
  return 1.0 - survival(big_m - 1);
}

double OutageEstimate::p_out() const {
  return trials ? static_cast<double>(outages) / static_cast<double>(trials) : 0.0;
}

double OutageEstimate::p_decision(int m) const {
  return trials ? static_cast<double>(decisions.at(m)) / static_cast<double>(trials) : 0.0;
}

double OutageEstimate::p_out_given(int m) const {
  const long n = decisions.at(m);
  return n ? static_cast<double>(outages_given_slot.at(m)) / static_cast<double>(n) : 0.0;
}

double OutageEstimate::total_probability() const {
  double p = 0.0;
  for (std::size_t m = 1; m < decisions.size(); ++m)
    p += p_decision(static_cast<int>(m)) * p_out_given(static_cast<int>(m));
  return p;
}

OutageEstimate outage_mc(const SystemParams& params, long trials, std::uint64_t stream) {
  if (trials < 1) throw std::invalid_argument("trial count must be positive");
  params.validate();
  OutageEstimate est;
  est.decisions.assign(params.num_slots + 1, 0);
  est.outages_given_slot.assign(params.num_slots + 1, 0);
  const double need = params.block_length() * params.rate_bpcu;
  for (long i = 0; i < trials; ++i) {
    Rng rng = substream(params.seed, stream, static_cast<std::uint64_t>(i));
    const ChannelRealization ch = draw_channel(params, rng);
    const int m = phi1(ch.source_relay, params);
    const bool out = msc_mutual_info(ch, m, params) < need;
    ++est.trials;
    ++est.decisions[m];
    if (out) {
      ++est.outages;
      ++est.outages_given_slot[m];
    }
  }
  return est;
}

}  // namespace ddf
