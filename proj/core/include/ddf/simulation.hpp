#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddf/channel.hpp"
#include "ddf/codebook.hpp"
#include "ddf/lattice_codes.hpp"
#include "ddf/params.hpp"
#include "ddf/relay.hpp"

namespace ddf {

/// kDitheredCoset is the mod-lattice coset code of the rotated-QAM lattice with
/// a fresh dither per trial; lattice decoders imply it.
enum class CodeFamily { kRotatedQam, kUdmPermutation, kDitheredCoset };
enum class RelayDecoderKind { kExhaustiveMl, kMmseGdfeLattice };
enum class DestDecoderKind { kGenieMl, kGlrt, kMmseGdfeLattice, kRadThenMl };

/// Random stream identifiers; every draw is keyed by (seed, stream, snr index,
/// trial index).
enum StreamId : std::uint64_t {
  kStreamTrial = 1,
  kStreamCalibration = 2,
  kStreamOutage = 3,
};

struct StopRule {
  long min_errors = 100;
  long max_trials = 1'000'000;
};

struct TauSchedule {
  /// One value per SNR point, or a single value used everywhere.
  std::vector<double> values{1.0};
  bool calibrate = false;
  double target_fraction = 0.1;
  long calibration_max_trials = 400'000;
  long calibration_min_errors = 300;
};

struct SimConfig {
  SystemParams params;
  CodeFamily code = CodeFamily::kRotatedQam;
  int qam_order = 2;
  int udm_branches = 4;
  int udm_size = 4;
  int udm_order = 4;
  RelayRule relay_rule = RelayRule::kPhi1;
  RelayDecoderKind relay_decoder = RelayDecoderKind::kExhaustiveMl;
  DestDecoderKind dest_decoder = DestDecoderKind::kGenieMl;
  std::size_t list_size = 64;
  TauSchedule tau;
  std::vector<double> snr_db{10.0};
  StopRule stop;
  long outage_trials = 100'000;
  int threads = 1;
  TailPolicy tail = TailPolicy::kSourceOnly;

  /// Coset code with per-trial dither; used for kDitheredCoset and whenever a
  /// lattice decoder is selected at the relay or the destination.
  bool lattice_scheme() const;
  double code_rate_bpcu() const;
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct TrialOutcome {
  int decision_slot = 0;  // M when the relay stays silent
  bool relay_silent = true;
  bool relay_error = false;  // relay forwarded a wrong message
  bool dest_error = false;
  bool decoder_failure = false;
  bool truncated = false;

  bool operator==(const TrialOutcome&) const = default;
};

struct ErrorStats {
  double snr_db = 0.0;
  long trials = 0;
  long err_total = 0;                // E
  long err_relay = 0;                // E_r
  long err_total_and_relay = 0;      // E and E_r
  long err_dest_given_relay_ok = 0;  // E and not E_r
  long relay_silent = 0;
  long decoder_failures = 0;
  long truncations = 0;
  std::vector<long> decision_histogram;  // index 1..M
  double p_out_mc = 0.0;
  double tau = 0.0;  // NaN when the rule has no threshold

  void add(const TrialOutcome& t);
  double p_error() const;
  double p_relay_error() const;
  double p_dest_error_relay_ok() const;
};

struct CalibrationResult {
  double tau = 0.0;
  bool grid_exhausted = false;
  long trials = 0;
  long err_total = 0;  // at the chosen tau, on the calibration trials
  long err_relay = 0;
};

/// Log grid of thresholds searched by the calibration, ascending.
std::vector<double> tau_grid();

class Simulator {
 public:
  explicit Simulator(SimConfig cfg);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  const SimConfig& config() const { return cfg_; }
  SystemParams params_at(std::size_t snr_index) const;

  /// One end-to-end trial; a pure function of (config, snr index, trial index).
  TrialOutcome run_trial(std::size_t snr_index, std::uint64_t trial, double tau,
                         std::uint64_t stream = kStreamTrial) const;

  /// Trials in index order until min_errors destination errors or max_trials.
  ErrorStats run_point(std::size_t snr_index, double tau) const;

  CalibrationResult calibrate_tau(std::size_t snr_index, double target_fraction,
                                  std::optional<long> trials = std::nullopt) const;

  /// Threshold used at this SNR point by the schedule (NaN unless phiF).
  double scheduled_tau(std::size_t snr_index) const;

  std::vector<ErrorStats> run_sweep(std::ostream* log = nullptr) const;

 private:
  struct Scenario;
  struct TrialState;

  TrialState start_trial(std::size_t snr_index, std::uint64_t trial, std::uint64_t stream) const;
  RelayDecision relay_decide(const TrialState& s, double tau) const;
  SlotDecoder slot_decoder(const TrialState& s) const;
  TrialOutcome finish_trial(const TrialState& s, const RelayDecision& d) const;

  SimConfig cfg_;
  std::vector<std::unique_ptr<Scenario>> scenarios_;
};

/// Convenience wrapper building a Simulator for a single trial.
TrialOutcome run_trial(const SimConfig& cfg, std::size_t snr_index, std::uint64_t trial_index);

std::vector<ErrorStats> run_sweep(const SimConfig& cfg, std::ostream* log = nullptr);

/// Columns: snr_db, trials, err_total, err_relay, err_dest_given_relay_ok,
/// relay_silent_count, decoder_failures, p_out_mc, tau.
void write_csv(std::ostream& os, const std::vector<ErrorStats>& rows);

std::string to_string(RelayRule rule);
std::string to_string(DestDecoderKind kind);

}  // namespace ddf
