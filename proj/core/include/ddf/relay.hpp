#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ddf/codebook.hpp"
#include "ddf/lattice_decoder.hpp"
#include "ddf/params.hpp"

namespace ddf {

enum class RelayRule { kPhi1, kPhi2, kPhi3, kPhiF, kBoundedDistance };

/// Slot at which the relay switches to transmit. `message` absent means the
/// relay stays silent for the whole block.
struct RelayDecision {
  int slot = 0;
  std::optional<std::size_t> message;
  bool decoder_failure = false;  // a prefix decode hit its search budget
  bool truncated = false;        // list truncation left the rival sum empty

  bool silent() const { return !message.has_value(); }
};

struct ForneyConfig {
  double tau = 1.0;
  std::size_t list_size = 64;
};

/// First slot at which the accumulated S-R mutual information covers M T R.
int phi1(Complex h, const SystemParams& params);
int phi2(Complex h, const SystemParams& params);
/// Never before slot ceil(M/2).
int phi3(Complex h, const SystemParams& params);
int rule_slot(RelayRule rule, Complex h, const SystemParams& params);

/// |h|^2 <= (2^(MR/m) - 1) / rho'.
bool relay_outage(Complex h, int m, const SystemParams& params);

/// log of p(y | w_hat) / sum_{w != w_hat} p(y | w) for squared distances
/// d_w = |y - h x_w|^2 and Gaussian noise of variance `noise_var` per complex
/// symbol. +inf when there is no rival.
double forney_log_ratio(std::span<const double> distances, std::size_t decided, double noise_var);

/// Ratio test against tau in the log domain. tau = 0 always accepts and
/// tau = +inf never does.
bool forney_accept(double log_ratio, double tau);

/// Convenience form working from the received prefix and an explicit codebook.
bool forney_accept(std::span<const Complex> y_prefix, Complex h, const Codebook& codebook,
                   std::size_t decided, const ForneyConfig& cfg, double noise_var);

/// Outcome of decoding the received prefix up to some slot.
struct SlotVerdict {
  std::optional<std::size_t> message;
  double log_ratio = 0.0;
  bool truncated = false;
};

/// Decoder callback for phiF: decodes the prefix of `m` slots.
using SlotDecoder = std::function<SlotVerdict(int m)>;

/// Exhaustive ML over an explicit codebook. Squared distances are accumulated
/// slot by slot so successive prefixes reuse earlier work.
class ExhaustiveRelayDecoder {
 public:
  ExhaustiveRelayDecoder(const Codebook& codebook, std::span<const Complex> received, Complex h,
                         double noise_var, int slot_length);

  SlotVerdict decode(int m);
  std::span<const double> distances() const { return distances_; }

 private:
  void extend(int length);

  const Codebook& codebook_;
  std::span<const Complex> received_;
  Complex h_;
  double noise_var_;
  int slot_length_;
  int covered_ = 0;
  std::vector<double> distances_;
};

/// MMSE-GDFE lattice decoding of the prefix with the list-truncated coset
/// ratio test.
class LatticeRelayDecoder {
 public:
  LatticeRelayDecoder(const CosetCodebook& cb, const Eigen::VectorXd& dither,
                      std::span<const Complex> received, Complex h, double noise_var,
                      int slot_length, std::size_t list_size);

  SlotVerdict decode(int m);

 private:
  const CosetCodebook& cb_;
  const Eigen::VectorXd& dither_;
  std::span<const Complex> received_;
  Complex h_;
  double noise_var_;
  int slot_length_;
  std::size_t list_size_;
};

struct CosetRatio {
  double log_ratio = 0.0;
  bool truncated = false;
  SearchStatus status = SearchStatus::kOk;
};

/// Coset-sum likelihood ratio over the `list_size` lattice points nearest to
/// the preprocessed observation. Each real noise component has variance
/// noise_var / 2.
CosetRatio modified_forney_log_ratio(const GdfeProblem& problem, const CosetCodebook& cb,
                                     std::size_t decided, std::size_t list_size, double noise_var);

bool modified_forney_accept(const GdfeProblem& problem, const CosetCodebook& cb,
                            std::size_t decided, const ForneyConfig& cfg, double noise_var);

/// Forney-rule decision function: starting at phi1, accept the first prefix
/// decision passing the ratio test. Silent when phi1 = M or no slot before M
/// accepts. Decoder failures count as rejections.
RelayDecision phiF_run(Complex h, const SystemParams& params, const ForneyConfig& cfg,
                       const SlotDecoder& decoder);

/// delta = mu ln(1 + rho) with mu = 3 / T.
double default_delta(const SystemParams& params);

/// The unique codeword inside the sphere of squared radius m T (1 + delta)
/// sigma_v^2 around y, provided slot m is not in relay outage.
std::optional<std::size_t> bounded_distance_decide(std::span<const Complex> y_prefix, Complex h,
                                                   const Codebook& codebook, int m, double delta,
                                                   const SystemParams& params);

/// First slot before M at which bounded_distance_decide returns a message.
RelayDecision bounded_distance_run(std::span<const Complex> received, Complex h,
                                   const Codebook& codebook, double delta,
                                   const SystemParams& params);

}  // namespace ddf
