#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddf/config.hpp"
#include "ddf/destination.hpp"
#include "ddf/dmt.hpp"
#include "ddf/outage.hpp"
#include "ddf/rng.hpp"
#include "ddf/simulation.hpp"
#include "ddf/udm.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<int> threads;
};

ddf::SimConfig load(const Common& c) {
  ddf::SimConfig cfg;
  if (!c.config_path.empty()) cfg = ddf::load_config_file(c.config_path);
  if (c.seed) cfg.params.seed = *c.seed;
  if (c.threads) cfg.threads = *c.threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ddf::ConfigError(e.what());
  }
  return cfg;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ddf::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "key = value configuration file");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--out", c.out_path, "output CSV path (default stdout)");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

void run_dmt(const Common& c, const std::vector<int>& slots, const std::vector<int>& pareto,
             int points) {
  std::vector<ddf::DmtPoint> rows;
  for (int i = 0; i < points; ++i) {
    const double r = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    for (int m : slots) rows.push_back({r, ddf::dmt_finite(r, m), m, "finite"});
    for (int n : pareto) rows.push_back({r, ddf::pareto_dmt(r, n), n, "pareto"});
    rows.push_back({r, ddf::dmt_infinite(r), 0, "infinite"});
    rows.push_back({r, ddf::tx_div_bound(r), 0, "tx-bound"});
  }
  Output out(c.out_path);
  ddf::write_dmt_csv(out.stream(), rows);
}

void run_outage(const Common& c, long trials) {
  const ddf::SimConfig cfg = load(c);
  Output out(c.out_path);
  auto& os = out.stream();
  os.precision(10);
  os << "snr_db,trials,p_out,m,p_decision,p_decision_closed,p_out_given_m\n";
  for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
    ddf::SystemParams p = cfg.params;
    p.snr_db = cfg.snr_db[i];
    const auto est = ddf::outage_mc(p, trials, (std::uint64_t{ddf::kStreamOutage} << 32) | i);
    for (int m = 1; m <= p.num_slots; ++m)
      os << p.snr_db << ',' << est.trials << ',' << est.p_out() << ',' << m << ','
         << est.p_decision(m) << ',' << ddf::decision_time_pmf_closed(m, p) << ','
         << est.p_out_given(m) << '\n';
  }
}

void run_simulate(const Common& c, bool quiet) {
  const ddf::SimConfig cfg = load(c);
  const auto rows = ddf::run_sweep(cfg, quiet ? nullptr : &std::cerr);
  Output out(c.out_path);
  ddf::write_csv(out.stream(), rows);
}

void run_calibrate(const Common& c, std::optional<double> fraction, std::optional<long> trials) {
  ddf::SimConfig cfg = load(c);
  if (cfg.relay_rule != ddf::RelayRule::kPhiF) throw ddf::ConfigError("calibrate-tau needs relay_rule = phiF");
  const double f = fraction.value_or(cfg.tau.target_fraction);
  const ddf::Simulator sim(cfg);
  Output out(c.out_path);
  auto& os = out.stream();
  os.precision(10);
  os << "snr_db,tau,trials,err_total,err_relay,grid_exhausted\n";
  for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
    const auto r = sim.calibrate_tau(i, f, trials);
    if (r.grid_exhausted)
      std::cerr << "warning: tau grid exhausted at " << cfg.snr_db[i] << " dB\n";
    os << cfg.snr_db[i] << ',' << r.tau << ',' << r.trials << ',' << r.err_total << ','
       << r.err_relay << ',' << (r.grid_exhausted ? 1 : 0) << '\n';
  }
}

int run_udm_check(const Common& c, int branches, int size, int order) {
  const ddf::UdmSet u = ddf::build_udm(branches, size, order);
  const bool ok = ddf::udm_verify(u);
  Output out(c.out_path);
  auto& os = out.stream();
  os << "L=" << branches << " n=" << size << " q=" << order << " modulus=" << u.field.modulus()
     << '\n';
  ddf::print_udm(os, u);
  os << "verified: " << (ok ? "yes" : "no") << '\n';
  return ok ? 0 : 1;
}

// Detection of the decision slot from Gaussian-input observations, averaged
// over Rayleigh channels, next to the closed-form pairwise error.
void run_rad(const Common& c, long trials) {
  const ddf::SimConfig cfg = load(c);
  const ddf::SystemParams base = cfg.params;
  Output out(c.out_path);
  auto& os = out.stream();
  os.precision(10);
  os << "snr_db,num_slots,slot_length,trials,p_detect_error,p_pairwise_1_to_2\n";
  for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
    ddf::SystemParams p = base;
    p.snr_db = cfg.snr_db[i];
    const double rho = p.snr();
    long errors = 0;
    double pairwise = 0.0;
    for (long t = 0; t < trials; ++t) {
      ddf::Rng rng(ddf::mix_key(p.seed, 7, i, static_cast<std::uint64_t>(t)));
      const ddf::ChannelRealization ch = ddf::draw_channel(p, rng);
      const int m_true = std::uniform_int_distribution<int>(1, p.num_slots)(rng);
      ddf::Signal y(p.block_length());
      for (int k = 0; k < p.block_length(); ++k) {
        const bool phase2 = k >= m_true * p.slot_length;
        const double var = (std::norm(ch.source_dest) + (phase2 ? std::norm(ch.relay_dest) : 0.0)) * rho +
                           ch.dest_noise_var;
        y[k] = ddf::complex_normal(rng, var);
      }
      if (ddf::rad_detect(y, ch, p) != m_true) ++errors;
      if (p.num_slots >= 2) pairwise += ddf::rad_pairwise_closed_form(1, 2, ch, p);
    }
    os << p.snr_db << ',' << p.num_slots << ',' << p.slot_length << ',' << trials << ','
       << static_cast<double>(errors) / trials << ',' << pairwise / trials << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic decode-and-forward relay simulator"};
  app.require_subcommand(1);

  Common common;

  auto* dmt = app.add_subcommand("dmt", "diversity-multiplexing tradeoff curves");
  std::vector<int> dmt_slots{2, 5, 10, 20};
  std::vector<int> dmt_pareto{1, 2, 3, 4, 5, 6};
  int dmt_points = 101;
  add_common(dmt, common);
  dmt->add_option("--slots", dmt_slots, "slot counts M for the finite-M curves")->delimiter(',');
  dmt->add_option("--pareto", dmt_pareto, "decision-time counts N for the Pareto curves")->delimiter(',');
  dmt->add_option("--points", dmt_points, "grid points on [0, 1]")->check(CLI::PositiveNumber);

  auto* outage = app.add_subcommand("outage", "Monte Carlo outage probability");
  long outage_trials = 100000;
  add_common(outage, common);
  outage->add_option("--trials", outage_trials, "channel draws per SNR point")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "error-probability curves");
  bool quiet = false;
  add_common(simulate, common);
  simulate->add_flag("--quiet", quiet, "suppress progress on stderr");

  auto* calibrate = app.add_subcommand("calibrate-tau", "Forney threshold calibration");
  std::optional<double> fraction;
  std::optional<long> calibration_trials;
  add_common(calibrate, common);
  calibrate->add_option("--target-fraction", fraction, "allowed P(E_r) / P(E)");
  calibrate->add_option("--trials", calibration_trials, "fixed calibration trial count");

  auto* udm = app.add_subcommand("udm-check", "build and verify universally decodable matrices");
  int udm_l = 4, udm_n = 4, udm_q = 4;
  add_common(udm, common);
  udm->add_option("-L,--branches", udm_l, "number of matrices");
  udm->add_option("-n,--size", udm_n, "matrix size");
  udm->add_option("-q,--order", udm_q, "field order");

  auto* rad = app.add_subcommand("rad", "relay activity detection error floor");
  long rad_trials = 100000;
  add_common(rad, common);
  rad->add_option("--trials", rad_trials, "channel draws per SNR point")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigErrorExit;
  }

  try {
    if (*dmt) run_dmt(common, dmt_slots, dmt_pareto, dmt_points);
    else if (*outage) run_outage(common, outage_trials);
    else if (*simulate) run_simulate(common, quiet);
    else if (*calibrate) run_calibrate(common, fraction, calibration_trials);
    else if (*udm) return run_udm_check(common, udm_l, udm_n, udm_q);
    else if (*rad) run_rad(common, rad_trials);
  } catch (const ddf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
