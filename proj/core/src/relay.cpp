#include "ddf/relay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> terms) {
  double peak = -kInf;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == -kInf) return -kInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - peak);
  return peak + std::log(s);
}

}  // namespace

int phi1(Complex h, const SystemParams& params) {
  const int big_m = params.num_slots;
  const double info = std::log2(1.0 + std::norm(h) * params.relay_snr());
  if (!(info > 0.0)) return big_m;
  const double need = big_m * params.rate_bpcu / info;
  if (!(need < big_m)) return big_m;
  return std::max(1, static_cast<int>(std::ceil(need)));
}

int phi2(Complex h, const SystemParams& params) {
  return std::min(params.num_slots, phi1(h, params) + 1);
}

int phi3(Complex h, const SystemParams& params) {
  const int half = (params.num_slots + 1) / 2;
  return std::min(params.num_slots, std::max(half, phi1(h, params)));
}

int rule_slot(RelayRule rule, Complex h, const SystemParams& params) {
  switch (rule) {
    case RelayRule::kPhi1: return phi1(h, params);
    case RelayRule::kPhi2: return phi2(h, params);
    case RelayRule::kPhi3: return phi3(h, params);
    default: throw std::invalid_argument("rule has no closed-form decision slot");
  }
}

bool relay_outage(Complex h, int m, const SystemParams& params) {
  if (m < 1 || m > params.num_slots) throw std::invalid_argument("decision slot out of range");
  const double threshold = (std::exp2(params.num_slots * params.rate_bpcu / m) - 1.0) / params.relay_snr();
  return std::norm(h) <= threshold;
}

double forney_log_ratio(std::span<const double> distances, std::size_t decided, double noise_var) {
  if (decided >= distances.size()) throw std::out_of_range("decided message out of range");
  std::vector<double> rivals;
  rivals.reserve(distances.size() - 1);
  for (std::size_t w = 0; w < distances.size(); ++w)
    if (w != decided) rivals.push_back(-distances[w] / noise_var);
  if (rivals.empty()) return kInf;
  return -distances[decided] / noise_var - log_sum_exp(rivals);
}

bool forney_accept(double log_ratio, double tau) {
  if (tau < 0.0 || std::isnan(tau)) throw std::invalid_argument("tau must be nonnegative");
  if (tau == 0.0) return true;
  if (std::isinf(tau)) return false;
  return log_ratio >= std::log(tau);
}

bool forney_accept(std::span<const Complex> y_prefix, Complex h, const Codebook& codebook,
                   std::size_t decided, const ForneyConfig& cfg, double noise_var) {
  std::vector<double> d(codebook.size(), 0.0);
  for (std::size_t w = 0; w < codebook.size(); ++w) {
    const auto x = codebook.codeword(w);
    for (std::size_t k = 0; k < y_prefix.size(); ++k) d[w] += std::norm(y_prefix[k] - h * x[k]);
  }
  return forney_accept(forney_log_ratio(d, decided, noise_var), cfg.tau);
}

// --- Exhaustive prefix decoding ------------------------------------------------

ExhaustiveRelayDecoder::ExhaustiveRelayDecoder(const Codebook& codebook,
                                               std::span<const Complex> received, Complex h,
                                               double noise_var, int slot_length)
    : codebook_(codebook),
      received_(received),
      h_(h),
      noise_var_(noise_var),
      slot_length_(slot_length),
      distances_(codebook.size(), 0.0) {
  if (static_cast<int>(received.size()) > codebook.length())
    throw std::invalid_argument("received block longer than the codewords");
}

void ExhaustiveRelayDecoder::extend(int length) {
  if (length > static_cast<int>(received_.size()))
    throw std::invalid_argument("prefix longer than the received block");
  for (std::size_t w = 0; w < codebook_.size(); ++w) {
    const auto x = codebook_.codeword(w);
    double d = distances_[w];
    for (int k = covered_; k < length; ++k) d += std::norm(received_[k] - h_ * x[k]);
    distances_[w] = d;
  }
  covered_ = std::max(covered_, length);
}

SlotVerdict ExhaustiveRelayDecoder::decode(int m) {
  const int length = m * slot_length_;
  if (length < covered_) throw std::invalid_argument("prefixes must be requested in increasing order");
  extend(length);
  std::size_t best = 0;
  for (std::size_t w = 1; w < distances_.size(); ++w)
    if (distances_[w] < distances_[best]) best = w;
  SlotVerdict v;
  v.message = best;
  v.log_ratio = forney_log_ratio(distances_, best, noise_var_);
  return v;
}

// --- Lattice prefix decoding ---------------------------------------------------

LatticeRelayDecoder::LatticeRelayDecoder(const CosetCodebook& cb, const Eigen::VectorXd& dither,
                                         std::span<const Complex> received, Complex h,
                                         double noise_var, int slot_length, std::size_t list_size)
    : cb_(cb),
      dither_(dither),
      received_(received),
      h_(h),
      noise_var_(noise_var),
      slot_length_(slot_length),
      list_size_(list_size) {}

SlotVerdict LatticeRelayDecoder::decode(int m) {
  const auto length = static_cast<std::size_t>(m * slot_length_);
  if (length > received_.size()) throw std::invalid_argument("prefix longer than the received block");
  const std::vector<Complex> gains(length, h_);
  const LinearModel model = coset_observation_model(gains, received_.first(length), noise_var_, cb_);
  const GdfeProblem problem = gdfe_problem(model, cb_, dither_);
  SlotVerdict v;
  const LatticeDecision d = lattice_decode_mmse(problem, cb_);
  if (!d.ok()) return v;
  const CosetRatio ratio = modified_forney_log_ratio(problem, cb_, *d.message, list_size_, noise_var_);
  if (ratio.status == SearchStatus::kNodeLimit) return v;
  v.message = d.message;
  v.log_ratio = ratio.log_ratio;
  v.truncated = ratio.truncated;
  return v;
}

CosetRatio modified_forney_log_ratio(const GdfeProblem& problem, const CosetCodebook& cb,
                                     std::size_t decided, std::size_t list_size, double noise_var) {
  const CandidateList list = candidate_list(problem.basis, problem.target, list_size);
  CosetRatio out;
  out.status = list.status;
  std::vector<double> same;
  std::vector<double> other;
  for (const auto& c : list.points) {
    const double ll = -c.distance / noise_var;
    (cb.message_of(c.coeffs) == decided ? same : other).push_back(ll);
  }
  if (other.empty()) {
    out.truncated = true;
    out.log_ratio = kInf;
    return out;
  }
  out.log_ratio = log_sum_exp(same) - log_sum_exp(other);
  return out;
}

bool modified_forney_accept(const GdfeProblem& problem, const CosetCodebook& cb,
                            std::size_t decided, const ForneyConfig& cfg, double noise_var) {
  const CosetRatio r = modified_forney_log_ratio(problem, cb, decided, cfg.list_size, noise_var);
  return forney_accept(r.log_ratio, cfg.tau);
}

RelayDecision phiF_run(Complex h, const SystemParams& params, const ForneyConfig& cfg,
                       const SlotDecoder& decoder) {
  const int big_m = params.num_slots;
  RelayDecision out;
  out.slot = big_m;
  for (int m = phi1(h, params); m < big_m; ++m) {
    const SlotVerdict v = decoder(m);
    out.truncated = out.truncated || v.truncated;
    if (!v.message) {
      out.decoder_failure = true;
      continue;
    }
    if (forney_accept(v.log_ratio, cfg.tau)) {
      out.slot = m;
      out.message = v.message;
      return out;
    }
  }
  return out;
}

// --- Bounded-distance decoding -------------------------------------------------

double default_delta(const SystemParams& params) {
  const double mu = 3.0 / params.slot_length;
  return mu * std::log(1.0 + params.snr());
}

std::optional<std::size_t> bounded_distance_decide(std::span<const Complex> y_prefix, Complex h,
                                                   const Codebook& codebook, int m, double delta,
                                                   const SystemParams& params) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const auto length = static_cast<std::size_t>(m * params.slot_length);
  if (y_prefix.size() < length) throw std::invalid_argument("prefix shorter than m slots");
  if (relay_outage(h, m, params)) return std::nullopt;
  const double radius = static_cast<double>(length) * (1.0 + delta) * params.relay_noise_var();
  std::optional<std::size_t> found;
  for (std::size_t w = 0; w < codebook.size(); ++w) {
    const auto x = codebook.codeword(w);
    double d = 0.0;
    for (std::size_t k = 0; k < length && d <= radius; ++k) d += std::norm(y_prefix[k] - h * x[k]);
    if (d <= radius) {
      if (found) return std::nullopt;
      found = w;
    }
  }
  return found;
}

RelayDecision bounded_distance_run(std::span<const Complex> received, Complex h,
                                   const Codebook& codebook, double delta,
                                   const SystemParams& params) {
  RelayDecision out;
  out.slot = params.num_slots;
  for (int m = 1; m < params.num_slots; ++m) {
    const auto msg = bounded_distance_decide(received, h, codebook, m, delta, params);
    if (msg) {
      out.slot = m;
      out.message = msg;
      return out;
    }
  }
  return out;
}

}  // namespace ddf
