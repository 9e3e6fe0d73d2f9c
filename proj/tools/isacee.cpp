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

// Command-line driver: single solves, sweeps, Pareto boundaries and the acceptance suite.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "isacee/acceptance.hpp"
#include "isacee/experiment.hpp"
#include "isacee/scenario.hpp"
#include "isacee/solvers.hpp"

namespace fs = std::filesystem;
using namespace isacee;

namespace {

struct Common {
  std::string preset_name = "m16";
  std::string config_file;
  std::map<std::string, std::string> fields;
  std::string seed;
  std::string out = "out";
  double delta = 1e-4;
  int max_outer = 50;
  std::string init = "sdr";
  // Sweep
  std::string sweep;
  std::string grid;
  int trials = 20;
  int threads = 0;
  bool timing = false;
};

const std::vector<std::pair<std::string, std::string>> kFields{
    {"M", "transmit antennas"},
    {"N_rx", "receive antennas"},
    {"L", "frame length"},
    {"K", "users"},
    {"eps_pa", "amplifier efficiency in (0, 1]"},
    {"P0", "static power, e.g. '33 dBm' or '2 W'"},
    {"Pmax", "power budget, e.g. '30 dBm'"},
    {"sigma_c2", "user noise power"},
    {"sigma_s2", "radar noise power"},
    {"gamma", "SINR targets, e.g. '10 dB' or '3,5 lin'"},
    {"rho", "root-CRB threshold, e.g. '0.15 deg'; 'inf rad' disables"},
    {"tau", "extended-target CRB threshold; 'inf' disables"},
    {"theta", "target angle, e.g. '90 deg'"},
    {"alpha", "reflection coefficient 're' or 're,im'"},
};

void add_common(CLI::App* app, Common& c, bool sweeps) {
  app->add_option("--preset", c.preset_name, "parameter preset: m16, m14, desk")->capture_default_str();
  app->add_option("--config", c.config_file, "config file of 'key = value' lines, applied over the preset");
  for (const auto& [key, help] : kFields) app->add_option("--" + key, c.fields[key], help);
  app->add_option("--seed", c.seed, "channel seed (sweeps use seed + trial)");
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--delta", c.delta, "outer-loop tolerance")->capture_default_str();
  app->add_option("--max-outer", c.max_outer, "outer iteration cap")->capture_default_str();
  app->add_option("--init", c.init, "initial point: sdr or rzf")->capture_default_str();
  if (sweeps) {
    app->add_option("--sweep", c.sweep, "swept parameter: rho, gamma, Pmax, K");
    app->add_option("--grid", c.grid, "sweep grid with one unit, e.g. '0.1,0.2,0.3 deg'");
  }
  app->add_option("--trials", c.trials, "Monte-Carlo trials per grid point")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads (0: hardware concurrency)")->capture_default_str();
  app->add_flag("--timing", c.timing, "record wall time in the CSV (breaks byte-level reproducibility)");
}

RawConfig build_raw(const Common& c) {
  RawConfig raw = preset(c.preset_name);
  if (!c.config_file.empty()) raw = merge(raw, load_config_file(c.config_file));
  for (const auto& [key, value] : c.fields) {
    if (!value.empty()) raw[key] = value;
  }
  if (!c.seed.empty()) raw["seed"] = c.seed;
  return raw;
}

AlgorithmOptions build_opts(const Common& c) {
  AlgorithmOptions o;
  o.delta = c.delta;
  o.max_outer = c.max_outer;
  if (c.init == "sdr") {
    o.init = InitStrategy::sdr;
  } else if (c.init == "rzf") {
    o.init = InitStrategy::rzf;
  } else {
    throw std::invalid_argument("--init must be sdr or rzf");
  }
  o.validate();
  return o;
}

// "a,b,c unit" -> SI values for the swept parameter.
std::vector<double> parse_grid(const std::string& text, SweepParam p) {
  std::string nums = text, unit;
  if (const auto sp = text.find_last_of(' '); sp != std::string::npos) {
    nums = text.substr(0, sp);
    unit = text.substr(sp + 1);
  }
  std::vector<double> v;
  std::stringstream ss(nums);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    const double x = std::stod(cell, &pos);
    if (cell.find_first_not_of(' ', pos) != std::string::npos) throw std::invalid_argument("bad grid value '" + cell + "'");
    v.push_back(x);
  }
  for (double& x : v) {
    if (unit.empty() || unit == "rad" || unit == "lin" || unit == "W") continue;
    if (unit == "deg" && p == SweepParam::rho) {
      x *= kPi / 180.0;
    } else if (unit == "dB" && p == SweepParam::gamma) {
      x = db_to_linear(x);
    } else if (unit == "dBm" && p == SweepParam::Pmax) {
      x = dbm_to_watt(x);
    } else {
      throw std::invalid_argument("grid unit '" + unit + "' does not fit parameter " + to_string(p));
    }
  }
  if (v.empty()) throw std::invalid_argument("empty grid");
  return v;
}

std::string key_of(Algorithm a) {
  std::string s = to_string(a);
  for (char& ch : s) {
    if (ch == '-') ch = '_';
  }
  return s;
}

void write_solution(const BeamformerSolution& s, const fs::path& dir, const std::string& stem) {
  std::ofstream w(dir / (stem + "_beamformers.csv"));
  w << "user,antenna,re,im\n";
  w.precision(17);
  for (int k = 0; k < s.W.cols(); ++k) {
    for (int m = 0; m < s.W.rows(); ++m) w << k << ',' << m << ',' << s.W(m, k).real() << ',' << s.W(m, k).imag() << '\n';
  }
  if (s.Rprobe) {
    std::ofstream r(dir / (stem + "_probe.csv"));
    r << "row,col,re,im\n";
    r.precision(17);
    for (int i = 0; i < s.Rprobe->rows(); ++i) {
      for (int j = 0; j < s.Rprobe->cols(); ++j) {
        r << i << ',' << j << ',' << (*s.Rprobe)(i, j).real() << ',' << (*s.Rprobe)(i, j).imag() << '\n';
      }
    }
  }
  std::ofstream t(dir / (stem + "_trace.csv"));
  t << "iteration,objective,lambda,residual,slack,penalty,violation,sdp_iterations,accepted\n";
  t.precision(17);
  for (std::size_t i = 0; i < s.trace.size(); ++i) {
    const auto& r = s.trace[i];
    t << i + 1 << ',' << r.objective << ',' << r.lambda << ',' << r.residual << ',' << r.slack << ',' << r.penalty
      << ',' << r.violation << ',' << r.sdp_iterations << ',' << (r.accepted ? 1 : 0) << '\n';
  }
  std::ofstream m(dir / (stem + "_metrics.csv"));
  m << "key,value\n";
  m.precision(17);
  for (const auto& [k, v] : s.achieved) m << k << ',' << v << '\n';
}

void print_solution(const std::string& name, const BeamformerSolution& s) {
  std::printf("%s: %s after %d outer iterations%s%s\n", name.c_str(), to_string(s.outcome), s.outer_iterations,
              s.message.empty() ? "" : ": ", s.message.c_str());
  for (const char* key : {"ee_c", "ee_s", "sum_rate", "power", "crb", "min_sinr_ratio"}) {
    const auto it = s.achieved.find(key);
    if (it != s.achieved.end()) std::printf("  %-15s %.9g\n", key, it->second);
  }
}

SweepSpec sweep_spec(const Common& c, Algorithm a) {
  SweepSpec s;
  s.algorithm = a;
  s.param = parse_sweep_param(c.sweep);
  if (s.param == SweepParam::E) throw std::invalid_argument("use the pareto subcommand for E sweeps");
  s.grid = parse_grid(c.grid, s.param);
  s.trials = c.trials;
  s.base = build_raw(c);
  s.seed = make_config(s.base).rng_seed;
  s.opts = build_opts(c);
  s.threads = c.threads;
  s.record_timing = c.timing;
  return s;
}

void report_sweep(const SweepResult& r) {
  std::printf("%-12s %-14s %-14s %-10s %-8s\n", to_string(r.param), "mean EE_C", "mean EE_S", "feasible", "iters");
  for (const auto& row : r.rows) {
    std::printf("%-12.6g %-14.8g %-14.8g %-10.3g %-8.3g\n", row.value, row.mean_ee_c, row.mean_ee_s,
                row.feasible_fraction, row.mean_iterations);
  }
  if (r.all_infeasible()) std::printf("warning: every trial of this sweep is infeasible\n");
}

int run_single(const Common& c, Algorithm a) {
  fs::create_directories(c.out);
  const std::string stem = key_of(a);
  if (!c.sweep.empty()) {
    const SweepResult r = run_sweep(sweep_spec(c, a));
    report_sweep(r);
    const fs::path dir(c.out);
    write_sweep_csv(r, (dir / (stem + "_summary.csv")).string(), (dir / (stem + "_trials.csv")).string());
    const bool ees = a == Algorithm::ees_point || a == Algorithm::ees_extended;
    Series s{stem, {}, {}};
    for (const auto& row : r.rows) {
      s.x.push_back(row.value);
      s.y.push_back(ees ? row.mean_ee_s : row.mean_ee_c);
    }
    write_svg((dir / (stem + ".svg")).string(), std::string(to_string(a)) + " sweep", to_string(r.param),
              ees ? "mean EE_S" : "mean EE_C (bit/J)", {s});
    return r.all_infeasible() ? 2 : 0;
  }
  const SystemConfig cfg = make_config(build_raw(c));
  const ChannelSet ch = draw_channels(cfg);
  const AlgorithmOptions o = build_opts(c);
  BeamformerSolution s;
  switch (a) {
    case Algorithm::eec_point: s = solve_eec_point(cfg, ch, o); break;
    case Algorithm::eec_extended: s = solve_eec_extended(cfg, ch, o); break;
    case Algorithm::ees_point: s = solve_ees_point(cfg, ch, o); break;
    case Algorithm::ees_extended: s = solve_ees_extended(cfg, ch, o); break;
    default: throw std::logic_error("not a single-solve algorithm");
  }
  print_solution(to_string(a), s);
  write_solution(s, c.out, stem);
  return s.ok() ? 0 : 2;
}

int run_baselines(const Common& c) {
  fs::create_directories(c.out);
  const fs::path dir(c.out);
  const std::vector<Algorithm> algs{Algorithm::eec_point, Algorithm::power_min, Algorithm::sumrate_max};
  if (!c.sweep.empty()) {
    std::vector<Series> ee, power;
    for (Algorithm a : algs) {
      const SweepResult r = run_sweep(sweep_spec(c, a));
      std::printf("%s\n", to_string(a));
      report_sweep(r);
      write_sweep_csv(r, (dir / ("baselines_" + key_of(a) + "_summary.csv")).string(),
                      (dir / ("baselines_" + key_of(a) + "_trials.csv")).string());
      Series s{to_string(a), {}, {}};
      for (const auto& row : r.rows) {
        s.x.push_back(row.value);
        s.y.push_back(row.mean_ee_c);
      }
      ee.push_back(s);
    }
    write_svg((dir / "baselines.svg").string(), "EE_C of the proposed design and the baselines", c.sweep,
              "mean EE_C (bit/J)", ee);
    return 0;
  }
  const SystemConfig cfg = make_config(build_raw(c));
  const ChannelSet ch = draw_channels(cfg);
  const AlgorithmOptions o = build_opts(c);
  std::ofstream csv(dir / "baselines.csv");
  csv << "algorithm,outcome,ee_c,ee_s,power,sum_rate\n";
  csv.precision(17);
  bool ok = true;
  for (Algorithm a : algs) {
    BeamformerSolution s = a == Algorithm::eec_point   ? solve_eec_point(cfg, ch, o)
                           : a == Algorithm::power_min ? baseline_power_min(cfg, ch, o)
                                                       : baseline_sumrate_max(cfg, ch, o);
    print_solution(to_string(a), s);
    write_solution(s, dir, "baselines_" + key_of(a));
    auto get = [&s](const char* k) { return s.achieved.count(k) ? s.achieved.at(k) : 0.0; };
    csv << to_string(a) << ',' << to_string(s.outcome) << ',' << get("ee_c") << ',' << get("ee_s") << ','
        << get("power") << ',' << get("sum_rate") << '\n';
    ok = ok && s.ok();
  }
  return ok ? 0 : 2;
}

int run_pareto_cmd(const Common& c, const std::string& grid, bool absolute, bool keep_qos) {
  fs::create_directories(c.out);
  SweepSpec s;
  s.algorithm = Algorithm::pareto;
  s.param = SweepParam::E;
  s.grid = parse_grid(grid, SweepParam::E);
  s.trials = c.trials;
  s.base = build_raw(c);
  s.seed = make_config(s.base).rng_seed;
  s.opts = build_opts(c);
  s.threads = c.threads;
  s.record_timing = c.timing;
  s.keep_qos = keep_qos;
  s.E_relative = !absolute;
  const SweepResult r = run_pareto(s);
  report_sweep(r);
  const fs::path dir(c.out);
  write_sweep_csv(r, (dir / "pareto_summary.csv").string(), (dir / "pareto_trials.csv").string());
  Series b{"approximate boundary", {}, {}};
  for (const auto& row : r.rows) {
    if (row.feasible_fraction < 1.0) continue;
    b.x.push_back(row.mean_ee_s);
    b.y.push_back(row.mean_ee_c);
  }
  write_svg((dir / "pareto.svg").string(), "EE_C versus EE_S", "mean EE_S", "mean EE_C (bit/J)", {b});
  return r.all_infeasible() ? 2 : 0;
}

int run_verify(const std::vector<int>& criteria, int trials, int threads) {
  AcceptanceOptions o;
  if (!criteria.empty()) o.criteria = std::set<int>(criteria.begin(), criteria.end());
  o.trend_trials = trials;
  o.threads = threads;
  const auto results = run_acceptance(o);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << format_result(r) << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient ISAC beamforming solvers and experiment driver"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    Algorithm algo;
  };
  const std::vector<Sub> singles{
      {"eec-point", "maximize EE_C with a point target", Algorithm::eec_point},
      {"eec-extended", "maximize EE_C with an extended target", Algorithm::eec_extended},
      {"ees-point", "maximize EE_S with a point target", Algorithm::ees_point},
      {"ees-extended", "maximize EE_S with an extended target", Algorithm::ees_extended},
  };
  std::vector<Common> commons(singles.size() + 2);
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < singles.size(); ++i) {
    CLI::App* sub = app.add_subcommand(singles[i].name, singles[i].help);
    add_common(sub, commons[i], true);
    subs.push_back(sub);
  }
  Common& base_c = commons[singles.size()];
  CLI::App* base = app.add_subcommand("baselines", "run the proposed EE_C design against both baselines");
  add_common(base, base_c, true);

  Common& par_c = commons[singles.size() + 1];
  std::string par_grid = "0,0.2,0.4,0.6,0.8,0.9,1.0";
  bool absolute = false, keep_qos = false;
  CLI::App* par = app.add_subcommand("pareto", "trace the EE_C / EE_S boundary");
  add_common(par, par_c, false);
  par->add_option("--grid", par_grid, "EE_S thresholds; fractions of each trial's maximum unless --absolute")
      ->capture_default_str();
  par->add_flag("--absolute", absolute, "read --grid as absolute EE_S thresholds");
  par->add_flag("--keep-qos", keep_qos, "keep the SINR and CRB constraints");

  std::vector<int> criteria;
  int v_trials = 20, v_threads = 0;
  CLI::App* ver = app.add_subcommand("verify", "run the acceptance suite; nonzero exit on failure");
  ver->add_option("--criteria", criteria, "subset of criteria 1-8")->delimiter(',');
  ver->add_option("--trials", v_trials, "Monte-Carlo trials of the trend sweeps")->capture_default_str();
  ver->add_option("--threads", v_threads, "worker threads (0: hardware concurrency)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    for (std::size_t i = 0; i < singles.size(); ++i) {
      if (subs[i]->parsed()) return run_single(commons[i], singles[i].algo);
    }
    if (base->parsed()) return run_baselines(base_c);
    if (par->parsed()) return run_pareto_cmd(par_c, par_grid, absolute, keep_qos);
    if (ver->parsed()) return run_verify(criteria, v_trials, v_threads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
