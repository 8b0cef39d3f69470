#include "ddf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ddf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("expected an integer for " + key + ": '" + v + "'");
  return static_cast<long>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::stringstream ss(v);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c, ':');
    const double start = to_double(key, trim(a));
    const double step = to_double(key, trim(b));
    const double stop = to_double(key, trim(c));
    if (!(step > 0.0) || stop < start) throw ConfigError("bad range for " + key);
    for (int i = 0; start + i * step <= stop + 1e-9; ++i) out.push_back(start + i * step);
    return out;
  }
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

SimConfig apply_config(const std::map<std::string, std::string>& kv, SimConfig cfg) {
  for (const auto& [key, v] : kv) {
    if (key == "num_slots") cfg.params.num_slots = static_cast<int>(to_long(key, v));
    else if (key == "slot_length") cfg.params.slot_length = static_cast<int>(to_long(key, v));
    else if (key == "rate_bpcu") cfg.params.rate_bpcu = to_double(key, v);
    else if (key == "relay_offset_db") cfg.params.relay_offset_db = to_double(key, v);
    else if (key == "seed") cfg.params.seed = static_cast<std::uint64_t>(to_long(key, v));
    else if (key == "code_family") {
      if (v == "rotated-qam") cfg.code = CodeFamily::kRotatedQam;
      else if (v == "udm-permutation") cfg.code = CodeFamily::kUdmPermutation;
      else if (v == "dithered-coset") cfg.code = CodeFamily::kDitheredCoset;
      else throw ConfigError("unknown code_family '" + v + "'");
    } else if (key == "qam_order") cfg.qam_order = static_cast<int>(to_long(key, v));
    else if (key == "udm_branches") cfg.udm_branches = static_cast<int>(to_long(key, v));
    else if (key == "udm_size") cfg.udm_size = static_cast<int>(to_long(key, v));
    else if (key == "udm_order") cfg.udm_order = static_cast<int>(to_long(key, v));
    else if (key == "relay_rule") {
      if (v == "phi1") cfg.relay_rule = RelayRule::kPhi1;
      else if (v == "phi2") cfg.relay_rule = RelayRule::kPhi2;
      else if (v == "phi3") cfg.relay_rule = RelayRule::kPhi3;
      else if (v == "phiF") cfg.relay_rule = RelayRule::kPhiF;
      else if (v == "bounded-distance") cfg.relay_rule = RelayRule::kBoundedDistance;
      else throw ConfigError("unknown relay_rule '" + v + "'");
    } else if (key == "relay_decoder") {
      if (v == "exhaustive-ml") cfg.relay_decoder = RelayDecoderKind::kExhaustiveMl;
      else if (v == "mmse-gdfe-lattice") cfg.relay_decoder = RelayDecoderKind::kMmseGdfeLattice;
      else throw ConfigError("unknown relay_decoder '" + v + "'");
    } else if (key == "dest_decoder") {
      if (v == "genie-ml") cfg.dest_decoder = DestDecoderKind::kGenieMl;
      else if (v == "glrt") cfg.dest_decoder = DestDecoderKind::kGlrt;
      else if (v == "mmse-gdfe-lattice") cfg.dest_decoder = DestDecoderKind::kMmseGdfeLattice;
      else if (v == "rad-then-ml") cfg.dest_decoder = DestDecoderKind::kRadThenMl;
      else throw ConfigError("unknown dest_decoder '" + v + "'");
    } else if (key == "list_size") {
      const long n = to_long(key, v);
      if (n < 1) throw ConfigError("list_size must be positive");
      cfg.list_size = static_cast<std::size_t>(n);
    }
    else if (key == "tau") {
      if (v == "calibrate") cfg.tau.calibrate = true;
      else {
        cfg.tau.calibrate = false;
        cfg.tau.values = to_list(key, v);
      }
    } else if (key == "tau_target_fraction") cfg.tau.target_fraction = to_double(key, v);
    else if (key == "calibration_max_trials") cfg.tau.calibration_max_trials = to_long(key, v);
    else if (key == "calibration_min_errors") cfg.tau.calibration_min_errors = to_long(key, v);
    else if (key == "snr_db") cfg.snr_db = to_list(key, v);
    else if (key == "min_errors") cfg.stop.min_errors = to_long(key, v);
    else if (key == "max_trials") cfg.stop.max_trials = to_long(key, v);
    else if (key == "outage_trials") cfg.outage_trials = to_long(key, v);
    else if (key == "threads") cfg.threads = static_cast<int>(to_long(key, v));
    else if (key == "tail_policy") {
      if (v == "source-only") cfg.tail = TailPolicy::kSourceOnly;
      else if (v == "reject") cfg.tail = TailPolicy::kReject;
      else throw ConfigError("unknown tail_policy '" + v + "'");
    } else throw ConfigError("unknown key '" + key + "'");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return apply_config(parse_key_values(in), std::move(base));
}

}  // namespace ddf
