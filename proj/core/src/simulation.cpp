#include "ddf/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ddf/destination.hpp"
#include "ddf/outage.hpp"
#include "ddf/udm.hpp"

namespace ddf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = count;
    }
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::size_t snr_index, std::uint64_t trial) {
  return Rng(mix_key(seed, stream, snr_index, trial));
}

}  // namespace

// --- SimConfig -----------------------------------------------------------------

bool SimConfig::lattice_scheme() const {
  return code == CodeFamily::kDitheredCoset || relay_decoder == RelayDecoderKind::kMmseGdfeLattice ||
         dest_decoder == DestDecoderKind::kMmseGdfeLattice;
}

double SimConfig::code_rate_bpcu() const {
  if (code != CodeFamily::kUdmPermutation) return qam_rate_bpcu(qam_order);
  return 2.0 * udm_size * std::log2(static_cast<double>(udm_order)) / udm_branches;
}

void SimConfig::validate() const {
  params.validate();
  if (snr_db.empty()) throw std::invalid_argument("snr_db grid is empty");
  if (code != CodeFamily::kUdmPermutation && (qam_order < 2 || qam_order % 2 != 0))
    throw std::invalid_argument("qam_order must be even and >= 2");
  if (code == CodeFamily::kUdmPermutation) {
    if (udm_branches != params.block_length())
      throw std::invalid_argument("UDM branch count must equal M T");
    if (lattice_scheme()) throw std::invalid_argument("lattice decoding needs the rotated-qam family");
  }
  if (std::abs(code_rate_bpcu() - params.rate_bpcu) > 1e-9)
    throw std::invalid_argument("code rate does not match rate_bpcu");
  if (relay_rule == RelayRule::kBoundedDistance && relay_decoder != RelayDecoderKind::kExhaustiveMl)
    throw std::invalid_argument("bounded-distance rule needs the exhaustive relay decoder");
  if (list_size < 1) throw std::invalid_argument("list_size must be positive");
  if (stop.min_errors < 1 || stop.max_trials < 1) throw std::invalid_argument("stop rule must be positive");
  if (outage_trials < 1) throw std::invalid_argument("outage_trials must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (relay_rule == RelayRule::kPhiF) {
    if (tau.calibrate) {
      if (!(tau.target_fraction > 0.0 && tau.target_fraction <= 1.0))
        throw std::invalid_argument("tau target fraction must lie in (0, 1]");
      if (tau.calibration_max_trials < 1) throw std::invalid_argument("calibration trials must be positive");
      if (tau.calibration_min_errors < 1) throw std::invalid_argument("calibration error target must be positive");
    } else {
      if (tau.values.size() != 1 && tau.values.size() != snr_db.size())
        throw std::invalid_argument("tau schedule needs one value or one per SNR point");
      for (double t : tau.values)
        if (!(t >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
    }
  }
}

// --- ErrorStats ----------------------------------------------------------------

void ErrorStats::add(const TrialOutcome& t) {
  ++trials;
  if (t.dest_error) ++err_total;
  if (t.relay_error) ++err_relay;
  if (t.dest_error && t.relay_error) ++err_total_and_relay;
  if (t.dest_error && !t.relay_error) ++err_dest_given_relay_ok;
  if (t.relay_silent) ++relay_silent;
  if (t.decoder_failure) ++decoder_failures;
  if (t.truncated) ++truncations;
  if (t.decision_slot >= 1) {
    if (decision_histogram.size() <= static_cast<std::size_t>(t.decision_slot))
      decision_histogram.resize(t.decision_slot + 1, 0);
    ++decision_histogram[t.decision_slot];
  }
}

double ErrorStats::p_error() const { return trials ? double(err_total) / double(trials) : 0.0; }
double ErrorStats::p_relay_error() const { return trials ? double(err_relay) / double(trials) : 0.0; }
double ErrorStats::p_dest_error_relay_ok() const {
  return trials ? double(err_dest_given_relay_ok) / double(trials) : 0.0;
}

std::vector<double> tau_grid() {
  std::vector<double> g;
  for (int k = -8; k <= 120; ++k) g.push_back(std::pow(10.0, k / 4.0));
  return g;
}

// --- Simulator -------------------------------------------------------------------

struct Simulator::Scenario {
  SystemParams params;
  Codebook code;                       // exhaustive-ML codebook (non-lattice scheme)
  std::optional<CosetCodebook> coset;  // lattice scheme
};

struct Simulator::TrialState {
  const Scenario* scenario = nullptr;
  ChannelRealization ch;
  std::size_t message = 0;
  Eigen::VectorXd dither;
  Signal source;
  Signal relay_rx;  // full block; prefixes are what the relay has heard
  Codebook trial_code;  // materialized coset code (lattice scheme only)
  Rng rng;              // positioned for the destination noise

  const Codebook& code() const {
    return scenario->coset ? trial_code : scenario->code;
  }
};

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  for (std::size_t i = 0; i < cfg_.snr_db.size(); ++i) {
    auto s = std::make_unique<Scenario>();
    s->params = params_at(i);
    const double energy = s->params.symbol_energy();
    if (cfg_.lattice_scheme()) {
      s->coset.emplace(build_rotation(s->params.block_length()), cfg_.qam_order, energy);
    } else if (cfg_.code == CodeFamily::kRotatedQam) {
      s->code = qam_codebook(build_rotation(s->params.block_length()), cfg_.qam_order, energy);
    } else {
      s->code = udm_codebook(build_udm(cfg_.udm_branches, cfg_.udm_size, cfg_.udm_order), energy);
    }
    scenarios_.push_back(std::move(s));
  }
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

SystemParams Simulator::params_at(std::size_t snr_index) const {
  SystemParams p = cfg_.params;
  p.snr_db = cfg_.snr_db.at(snr_index);
  return p;
}

double Simulator::scheduled_tau(std::size_t snr_index) const {
  if (cfg_.relay_rule != RelayRule::kPhiF) return kNaN;
  if (cfg_.tau.values.size() == 1) return cfg_.tau.values.front();
  return cfg_.tau.values.at(snr_index);
}

Simulator::TrialState Simulator::start_trial(std::size_t snr_index, std::uint64_t trial,
                                             std::uint64_t stream) const {
  TrialState s;
  s.scenario = scenarios_.at(snr_index).get();
  const SystemParams& p = s.scenario->params;
  s.rng = trial_rng(p.seed, stream, snr_index, trial);
  s.ch = draw_channel(p, s.rng);
  if (s.scenario->coset) {
    const CosetCodebook& cb = *s.scenario->coset;
    s.message = std::uniform_int_distribution<std::size_t>(0, cb.size() - 1)(s.rng);
    s.dither = cb.sample_dither(s.rng);
    s.source = cb.encode(s.message, s.dither);
    const bool needs_table = cfg_.relay_decoder == RelayDecoderKind::kExhaustiveMl ||
                             cfg_.dest_decoder != DestDecoderKind::kMmseGdfeLattice;
    if (needs_table) s.trial_code = cb.materialize(s.dither);
  } else {
    s.message = std::uniform_int_distribution<std::size_t>(0, s.scenario->code.size() - 1)(s.rng);
    const auto x = s.scenario->code.codeword(s.message);
    s.source.assign(x.begin(), x.end());
  }
  s.relay_rx = relay_receive(s.source, p.num_slots, p.slot_length, s.ch, s.rng);
  return s;
}

SlotDecoder Simulator::slot_decoder(const TrialState& s) const {
  const SystemParams& p = s.scenario->params;
  if (cfg_.relay_decoder == RelayDecoderKind::kExhaustiveMl) {
    auto dec = std::make_shared<ExhaustiveRelayDecoder>(s.code(), s.relay_rx, s.ch.source_relay,
                                                        s.ch.relay_noise_var, p.slot_length);
    return [dec](int m) { return dec->decode(m); };
  }
  auto dec = std::make_shared<LatticeRelayDecoder>(*s.scenario->coset, s.dither, s.relay_rx,
                                                   s.ch.source_relay, s.ch.relay_noise_var,
                                                   p.slot_length, cfg_.list_size);
  return [dec](int m) { return dec->decode(m); };
}

RelayDecision Simulator::relay_decide(const TrialState& s, double tau) const {
  const SystemParams& p = s.scenario->params;
  const Complex h = s.ch.source_relay;
  switch (cfg_.relay_rule) {
    case RelayRule::kPhiF: {
      ForneyConfig fc{tau, cfg_.list_size};
      return phiF_run(h, p, fc, slot_decoder(s));
    }
    case RelayRule::kBoundedDistance:
      return bounded_distance_run(s.relay_rx, h, s.code(), default_delta(p), p);
    default: {
      RelayDecision d;
      d.slot = rule_slot(cfg_.relay_rule, h, p);
      if (d.slot >= p.num_slots) return d;
      const SlotVerdict v = slot_decoder(s)(d.slot);
      d.truncated = v.truncated;
      if (!v.message) {
        d.decoder_failure = true;
        d.slot = p.num_slots;
        return d;
      }
      d.message = v.message;
      return d;
    }
  }
}

TrialOutcome Simulator::finish_trial(const TrialState& s, const RelayDecision& d) const {
  const SystemParams& p = s.scenario->params;
  const int big_m = p.num_slots;
  const int t = p.slot_length;
  const int n = p.block_length();

  TrialOutcome out;
  out.relay_silent = d.silent();
  out.decision_slot = d.silent() ? big_m : d.slot;
  out.relay_error = !d.silent() && *d.message != s.message;
  out.decoder_failure = d.decoder_failure;
  out.truncated = d.truncated;

  const int m_eff = out.decision_slot;
  Signal relay_tx(s.source.size());
  if (!d.silent()) {
    Signal estimate;
    if (s.scenario->coset && s.trial_code.size() == 0) {
      estimate = s.scenario->coset->encode(*d.message, s.dither);
    } else {
      const auto x = s.code().codeword(*d.message);
      estimate.assign(x.begin(), x.end());
    }
    relay_tx = alamouti_relay_signal(estimate, m_eff, t, cfg_.tail);
  }
  Rng rng = s.rng;
  const Signal y = destination_receive(s.source, relay_tx, m_eff, t, s.ch, rng);

  std::optional<std::size_t> decoded;
  auto lattice_at = [&](int m) -> std::optional<std::size_t> {
    const auto gains = combined_gains(n, m, t, s.ch, cfg_.tail);
    const Signal yc = alamouti_combine(y, m, t, s.ch, cfg_.tail);
    const LinearModel model = coset_observation_model(gains, yc, s.ch.dest_noise_var, *s.scenario->coset);
    const LatticeDecision ld = lattice_decode_mmse(model, *s.scenario->coset, s.dither);
    return ld.message;
  };

  switch (cfg_.dest_decoder) {
    case DestDecoderKind::kGenieMl: {
      const Signal yc = alamouti_combine(y, m_eff, t, s.ch, cfg_.tail);
      decoded = ml_decode_genie(yc, m_eff, s.ch, s.code(), p, cfg_.tail);
      break;
    }
    case DestDecoderKind::kGlrt: {
      if (s.scenario->coset && s.trial_code.size() == 0) {
        double best = -std::numeric_limits<double>::infinity();
        bool any_failure = false;
        for (int m = 1; m <= big_m; ++m) {
          const auto w = lattice_at(m);
          if (!w) {
            any_failure = true;
            continue;
          }
          const double ll = likelihood(y, s.scenario->coset->encode(*w, s.dither), m, s.ch, p, cfg_.tail);
          if (ll > best) {
            best = ll;
            decoded = w;
          }
        }
        if (any_failure) out.decoder_failure = true;
      } else {
        decoded = glrt_decode(y, s.ch, s.code(), p, cfg_.tail).message;
      }
      break;
    }
    case DestDecoderKind::kMmseGdfeLattice:
      decoded = lattice_at(m_eff);
      if (!decoded) out.decoder_failure = true;
      break;
    case DestDecoderKind::kRadThenMl: {
      const int m_hat = rad_detect(y, s.ch, p);
      const Signal yc = alamouti_combine(y, m_hat, t, s.ch, cfg_.tail);
      decoded = ml_decode_genie(yc, m_hat, s.ch, s.code(), p, cfg_.tail);
      break;
    }
  }
  out.dest_error = !decoded || *decoded != s.message;
  return out;
}

TrialOutcome Simulator::run_trial(std::size_t snr_index, std::uint64_t trial, double tau,
                                  std::uint64_t stream) const {
  TrialState s = start_trial(snr_index, trial, stream);
  const RelayDecision d = relay_decide(s, tau);
  return finish_trial(s, d);
}

ErrorStats Simulator::run_point(std::size_t snr_index, double tau) const {
  ErrorStats stats;
  stats.snr_db = cfg_.snr_db.at(snr_index);
  stats.tau = tau;
  stats.decision_histogram.assign(cfg_.params.num_slots + 1, 0);
  const std::size_t batch = 2048;
  std::vector<TrialOutcome> outcomes;
  long next = 0;
  while (stats.trials < cfg_.stop.max_trials && stats.err_total < cfg_.stop.min_errors) {
    const auto count = static_cast<std::size_t>(
        std::min<long>(static_cast<long>(batch), cfg_.stop.max_trials - next));
    outcomes.assign(count, {});
    parallel_for(count, cfg_.threads, [&](std::size_t i) {
      outcomes[i] = run_trial(snr_index, static_cast<std::uint64_t>(next) + i, tau);
    });
    for (const auto& o : outcomes) {
      stats.add(o);
      if (stats.err_total >= cfg_.stop.min_errors) break;
    }
    next += static_cast<long>(count);
  }
  return stats;
}

CalibrationResult Simulator::calibrate_tau(std::size_t snr_index, double target_fraction,
                                           std::optional<long> trials) const {
  if (cfg_.relay_rule != RelayRule::kPhiF) throw std::invalid_argument("tau calibration needs the phiF rule");
  if (!(target_fraction > 0.0 && target_fraction <= 1.0))
    throw std::invalid_argument("target fraction must lie in (0, 1]");
  const SystemParams p = params_at(snr_index);
  const int big_m = p.num_slots;
  const std::vector<double> grid = tau_grid();

  // Per trial: the verdict at each candidate slot and the destination outcome
  // for each possible relay behaviour, so every grid threshold is replayed on
  // identical channel and noise draws.
  struct Record {
    std::vector<SlotVerdict> verdicts;  // index m
    std::vector<TrialOutcome> outcomes;  // index m, M = silent
    int first = 0;
  };
  auto record = [&](std::uint64_t trial) {
    TrialState s = start_trial(snr_index, trial, kStreamCalibration);
    Record r;
    r.first = phi1(s.ch.source_relay, p);
    r.verdicts.resize(big_m + 1);
    r.outcomes.resize(big_m + 1);
    SlotDecoder dec = slot_decoder(s);
    for (int m = r.first; m < big_m; ++m) {
      r.verdicts[m] = dec(m);
      if (r.verdicts[m].message) {
        RelayDecision d;
        d.slot = m;
        d.message = r.verdicts[m].message;
        r.outcomes[m] = finish_trial(s, d);
      }
    }
    RelayDecision silent;
    silent.slot = big_m;
    r.outcomes[big_m] = finish_trial(s, silent);
    return r;
  };
  auto replay = [&](const Record& r, double tau) -> const TrialOutcome& {
    for (int m = r.first; m < big_m; ++m)
      if (r.verdicts[m].message && forney_accept(r.verdicts[m].log_ratio, tau)) return r.outcomes[m];
    return r.outcomes[big_m];
  };

  std::vector<long> e(grid.size(), 0), er(grid.size(), 0);
  long done = 0;
  const long cap = trials ? *trials : cfg_.tau.calibration_max_trials;
  const std::size_t batch = 2048;
  std::vector<Record> records;
  auto enough = [&] {
    if (trials) return done >= *trials;
    if (done >= cap) return true;
    return *std::min_element(e.begin(), e.end()) >= cfg_.tau.calibration_min_errors;
  };
  while (!enough()) {
    const auto count = static_cast<std::size_t>(std::min<long>(static_cast<long>(batch), cap - done));
    records.assign(count, {});
    parallel_for(count, cfg_.threads, [&](std::size_t i) {
      records[i] = record(static_cast<std::uint64_t>(done) + i);
    });
    for (const auto& r : records) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const TrialOutcome& o = replay(r, grid[g]);
        e[g] += o.dest_error;
        er[g] += o.relay_error;
      }
    }
    done += static_cast<long>(count);
  }

  // Smallest tau from which the condition holds on the whole upper grid, so a
  // single lucky low count cannot pick an aggressive threshold.
  CalibrationResult out;
  out.trials = done;
  auto ok = [&](std::size_t g) {
    return static_cast<double>(er[g]) <= target_fraction * static_cast<double>(e[g]);
  };
  std::size_t pick = grid.size();
  for (std::size_t g = grid.size(); g-- > 0 && ok(g);) pick = g;
  if (pick == grid.size()) {
    out.grid_exhausted = true;
    pick = grid.size() - 1;
  }
  out.tau = grid[pick];
  out.err_total = e[pick];
  out.err_relay = er[pick];
  return out;
}

std::vector<ErrorStats> Simulator::run_sweep(std::ostream* log) const {
  std::vector<ErrorStats> rows;
  for (std::size_t i = 0; i < cfg_.snr_db.size(); ++i) {
    double tau = scheduled_tau(i);
    if (cfg_.relay_rule == RelayRule::kPhiF && cfg_.tau.calibrate) {
      const CalibrationResult c = calibrate_tau(i, cfg_.tau.target_fraction);
      tau = c.tau;
      if (c.grid_exhausted && log)
        *log << "warning: tau grid exhausted at " << cfg_.snr_db[i] << " dB; using " << tau << '\n';
    }
    ErrorStats st = run_point(i, tau);
    st.p_out_mc = outage_mc(params_at(i), cfg_.outage_trials, (std::uint64_t{kStreamOutage} << 32) | i).p_out();
    if (log)
      *log << "snr " << st.snr_db << " dB: " << st.trials << " trials, P(E) = " << st.p_error() << '\n';
    rows.push_back(std::move(st));
  }
  return rows;
}

TrialOutcome run_trial(const SimConfig& cfg, std::size_t snr_index, std::uint64_t trial_index) {
  const Simulator sim(cfg);
  return sim.run_trial(snr_index, trial_index, sim.scheduled_tau(snr_index));
}

std::vector<ErrorStats> run_sweep(const SimConfig& cfg, std::ostream* log) {
  return Simulator(cfg).run_sweep(log);
}

void write_csv(std::ostream& os, const std::vector<ErrorStats>& rows) {
  const auto old = os.precision(10);
  os << "snr_db,trials,err_total,err_relay,err_dest_given_relay_ok,relay_silent_count,"
        "decoder_failures,p_out_mc,tau\n";
  for (const auto& r : rows) {
    os << r.snr_db << ',' << r.trials << ',' << r.err_total << ',' << r.err_relay << ','
       << r.err_dest_given_relay_ok << ',' << r.relay_silent << ',' << r.decoder_failures << ','
       << r.p_out_mc << ',';
    if (std::isnan(r.tau))
      os << "nan";
    else
      os << r.tau;
    os << '\n';
  }
  os.precision(old);
}

std::string to_string(RelayRule rule) {
  switch (rule) {
    case RelayRule::kPhi1: return "phi1";
    case RelayRule::kPhi2: return "phi2";
    case RelayRule::kPhi3: return "phi3";
    case RelayRule::kPhiF: return "phiF";
    case RelayRule::kBoundedDistance: return "bounded-distance";
  }
  return "?";
}

std::string to_string(DestDecoderKind kind) {
  switch (kind) {
    case DestDecoderKind::kGenieMl: return "genie-ml";
    case DestDecoderKind::kGlrt: return "glrt";
    case DestDecoderKind::kMmseGdfeLattice: return "mmse-gdfe-lattice";
    case DestDecoderKind::kRadThenMl: return "rad-then-ml";
  }
  return "?";
}

}  // namespace ddf
