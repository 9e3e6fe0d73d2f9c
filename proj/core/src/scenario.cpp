// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The isacee Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "isacee/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace isacee {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct Quantity {
  std::vector<double> values;
  std::string unit;
};

// "<number>[,<number>...] [unit]"
Quantity parse_quantity(const std::string& key, const std::string& text) {
  Quantity q;
  std::string s = trim(text);
  const auto sp = s.find_first_of(" \t");
  std::string nums = s;
  if (sp != std::string::npos) {
    nums = s.substr(0, sp);
    q.unit = trim(std::string_view(s).substr(sp));
  }
  std::stringstream ss(nums);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    if (!item.empty() && item.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last) {
      throw std::invalid_argument("config key '" + key + "': cannot parse number '" + item + "'");
    }
    q.values.push_back(v);
  }
  if (q.values.empty()) throw std::invalid_argument("config key '" + key + "': empty value");
  return q;
}

double scalar(const std::string& key, const Quantity& q) {
  if (q.values.size() != 1) throw std::invalid_argument("config key '" + key + "': expected one value");
  return q.values.front();
}

double power_value(const std::string& key, const Quantity& q) {
  const double v = scalar(key, q);
  if (q.unit.empty() || q.unit == "W") return v;
  if (q.unit == "mW") return v * 1e-3;
  if (q.unit == "dBm") return dbm_to_watt(v);
  if (q.unit == "dBW") return db_to_linear(v);
  throw std::invalid_argument("config key '" + key + "': unknown power unit '" + q.unit + "'");
}

double angle_value(const std::string& key, double v, const std::string& unit) {
  if (unit.empty() || unit == "rad") return v;
  if (unit == "deg") return v * kPi / 180.0;
  throw std::invalid_argument("config key '" + key + "': unknown angle unit '" + unit + "'");
}

int int_value(const std::string& key, const Quantity& q) {
  const double v = scalar(key, q);
  if (!q.unit.empty() || v != std::floor(v) || std::abs(v) > 1e9) {
    throw std::invalid_argument("config key '" + key + "': expected an integer");
  }
  return static_cast<int>(v);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (M < 1) fail("M must be at least 1");
  if (L < 1) fail("L must be at least 1");
  if (K < 1) fail("K must be at least 1");
  if (K > M) fail("K exceeds M");
  if (M > N_rx) fail("M exceeds N_rx");
  if (!(eps_pa > 0.0 && eps_pa <= 1.0)) fail("eps_pa must lie in (0, 1]");
  if (!(P0 > 0.0) || !std::isfinite(P0)) fail("P0 must be positive");
  if (!(Pmax > 0.0) || !std::isfinite(Pmax)) fail("Pmax must be positive");
  if (!(sigma_c2 > 0.0) || !std::isfinite(sigma_c2)) fail("sigma_c2 must be positive");
  if (!(sigma_s2 > 0.0) || !std::isfinite(sigma_s2)) fail("sigma_s2 must be positive");
  if (static_cast<int>(gamma.size()) != K) fail("gamma must have K entries");
  for (double g : gamma) {
    if (!(g > 0.0) || !std::isfinite(g)) fail("gamma entries must be positive and finite");
  }
  if (!(rho > 0.0)) fail("rho must be positive (inf disables the CRB constraint)");
  if (!(tau > 0.0)) fail("tau must be positive (inf disables the CRB constraint)");
  if (!std::isfinite(theta)) fail("theta must be finite");
  if (!(std::abs(alpha) > 0.0)) fail("alpha must be nonzero");
}

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys{"M",        "N_rx",     "L",     "K",   "eps_pa", "P0",
                                             "Pmax",     "sigma_c2", "sigma_s2", "gamma", "rho"};
  return keys;
}

SystemConfig make_config(const RawConfig& raw) {
  for (const auto& key : required_config_keys()) {
    if (raw.find(key) == raw.end()) throw std::invalid_argument("missing config key '" + key + "'");
  }
  static const std::vector<std::string> optional{"tau", "theta", "alpha", "seed"};
  for (const auto& [key, _] : raw) {
    const auto& req = required_config_keys();
    if (std::find(req.begin(), req.end(), key) == req.end() &&
        std::find(optional.begin(), optional.end(), key) == optional.end()) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  auto q = [&](const std::string& key) { return parse_quantity(key, raw.at(key)); };

  SystemConfig cfg;
  cfg.M = int_value("M", q("M"));
  cfg.N_rx = int_value("N_rx", q("N_rx"));
  cfg.L = int_value("L", q("L"));
  cfg.K = int_value("K", q("K"));
  {
    const auto e = q("eps_pa");
    if (!e.unit.empty()) throw std::invalid_argument("config key 'eps_pa' is unitless");
    cfg.eps_pa = scalar("eps_pa", e);
  }
  cfg.P0 = power_value("P0", q("P0"));
  cfg.Pmax = power_value("Pmax", q("Pmax"));
  cfg.sigma_c2 = power_value("sigma_c2", q("sigma_c2"));
  cfg.sigma_s2 = power_value("sigma_s2", q("sigma_s2"));
  {
    const auto g = q("gamma");
    std::vector<double> vals = g.values;
    if (g.unit == "dB") {
      for (double& v : vals) v = db_to_linear(v);
    } else if (!g.unit.empty() && g.unit != "lin") {
      throw std::invalid_argument("config key 'gamma': unknown unit '" + g.unit + "'");
    }
    if (vals.size() == 1) vals.assign(static_cast<std::size_t>(std::max(cfg.K, 1)), vals.front());
    cfg.gamma = vals;
  }
  {
    const auto r = q("rho");
    cfg.rho = angle_value("rho", scalar("rho", r), r.unit);
  }
  if (raw.count("tau")) {
    const auto t = q("tau");
    if (!t.unit.empty()) throw std::invalid_argument("config key 'tau' is unitless");
    cfg.tau = scalar("tau", t);
  } else {
    cfg.tau = std::numeric_limits<double>::infinity();
  }
  if (raw.count("theta")) {
    const auto t = q("theta");
    cfg.theta = angle_value("theta", scalar("theta", t), t.unit);
  }
  if (raw.count("alpha")) {
    const auto a = q("alpha");
    if (!a.unit.empty()) throw std::invalid_argument("config key 'alpha' is unitless");
    if (a.values.size() == 1) {
      cfg.alpha = {a.values[0], 0.0};
    } else if (a.values.size() == 2) {
      cfg.alpha = {a.values[0], a.values[1]};
    } else {
      throw std::invalid_argument("config key 'alpha': expected re or re,im");
    }
  }
  if (raw.count("seed")) {
    const auto s = q("seed");
    const double v = scalar("seed", s);
    if (v < 0 || v != std::floor(v)) throw std::invalid_argument("config key 'seed': expected a non-negative integer");
    cfg.rng_seed = static_cast<std::uint64_t>(v);
  }
  cfg.validate();
  return cfg;
}

RawConfig to_raw(const SystemConfig& cfg) {
  RawConfig raw;
  raw["M"] = std::to_string(cfg.M);
  raw["N_rx"] = std::to_string(cfg.N_rx);
  raw["L"] = std::to_string(cfg.L);
  raw["K"] = std::to_string(cfg.K);
  raw["eps_pa"] = fmt(cfg.eps_pa);
  raw["P0"] = fmt(cfg.P0) + " W";
  raw["Pmax"] = fmt(cfg.Pmax) + " W";
  raw["sigma_c2"] = fmt(cfg.sigma_c2) + " W";
  raw["sigma_s2"] = fmt(cfg.sigma_s2) + " W";
  std::string g;
  for (std::size_t i = 0; i < cfg.gamma.size(); ++i) g += (i ? "," : "") + fmt(cfg.gamma[i]);
  raw["gamma"] = g + " lin";
  raw["rho"] = fmt(cfg.rho) + " rad";
  raw["tau"] = fmt(cfg.tau);
  raw["theta"] = fmt(cfg.theta) + " rad";
  raw["alpha"] = fmt(cfg.alpha.real()) + "," + fmt(cfg.alpha.imag());
  raw["seed"] = std::to_string(cfg.rng_seed);
  return raw;
}

RawConfig preset(std::string_view name) {
  RawConfig raw{{"M", "16"},
                {"N_rx", "20"},
                {"L", "30"},
                {"K", "2"},
                {"eps_pa", "0.35"},
                {"P0", "33 dBm"},
                {"Pmax", "30 dBm"},
                {"sigma_c2", "20 dBm"},
                {"sigma_s2", "20 dBm"},
                {"gamma", "10 dB"},
                {"rho", "0.15 deg"},
                {"tau", "inf"},
                {"theta", "90 deg"},
                {"alpha", "1"},
                {"seed", "1"}};
  if (name == "m16") return raw;
  if (name == "m14") {
    raw["M"] = "14";
    return raw;
  }
  if (name == "desk") {
    raw["M"] = "8";
    return raw;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

RawConfig merge(RawConfig base, const RawConfig& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

RawConfig parse_config_text(std::string_view text) {
  RawConfig raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string val = trim(std::string_view(t).substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
    }
    raw[key] = val;
  }
  return raw;
}

RawConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

ChannelSet draw_channels(const SystemConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  ChannelSet ch;
  ch.theta = cfg.theta;
  ch.alpha = cfg.alpha;
  ch.h.reserve(static_cast<std::size_t>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) {
    CVec h(cfg.M);
    for (int m = 0; m < cfg.M; ++m) {
      const double re = n(rng);
      const double im = n(rng);
      h(m) = cplx(re, im);
    }
    ch.h.push_back(std::move(h));
  }
  return ch;
}

}  // namespace isacee
