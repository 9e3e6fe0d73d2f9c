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

#include "isacee/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "isacee/metrics.hpp"

namespace isacee {

namespace {

template <class F>
void parallel_for(int n, int threads, F&& f) {
  int T = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  T = std::max(1, std::min(T, n));
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const int i = next++;
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  if (T == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RawConfig override_param(RawConfig raw, SweepParam p, double v) {
  switch (p) {
    case SweepParam::rho: raw["rho"] = num(v) + " rad"; break;
    case SweepParam::gamma: raw["gamma"] = num(v) + " lin"; break;
    case SweepParam::Pmax: raw["Pmax"] = num(v) + " W"; break;
    case SweepParam::K: raw["K"] = std::to_string(static_cast<int>(std::lround(v))); break;
    case SweepParam::E: break;
  }
  return raw;
}

BeamformerSolution dispatch(Algorithm a, const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& o) {
  switch (a) {
    case Algorithm::eec_point: return solve_eec_point(cfg, ch, o);
    case Algorithm::eec_extended: return solve_eec_extended(cfg, ch, o);
    case Algorithm::ees_point: return solve_ees_point(cfg, ch, o);
    case Algorithm::ees_extended: return solve_ees_extended(cfg, ch, o);
    case Algorithm::power_min: return baseline_power_min(cfg, ch, o);
    case Algorithm::sumrate_max: return baseline_sumrate_max(cfg, ch, o);
    case Algorithm::pareto: break;
  }
  throw std::invalid_argument("dispatch: pareto is not a single solve");
}

void fill_record(TrialRecord& r, const BeamformerSolution& s) {
  r.outcome = to_string(s.outcome);
  r.feasible = s.ok();
  r.outer_iterations = s.outer_iterations;
  if (!r.feasible) return;
  auto get = [&s](const char* key) {
    const auto it = s.achieved.find(key);
    return it == s.achieved.end() ? 0.0 : it->second;
  };
  r.ee_c = get("ee_c");
  r.ee_s = get("ee_s");
  r.power = get("power");
  r.crb = get("crb");
  r.sum_rate = get("sum_rate");
}

std::vector<SweepRow> summarize(const std::vector<double>& grid, int trials, const std::vector<TrialRecord>& recs) {
  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepRow row;
    row.value = grid[g];
    for (int t = 0; t < trials; ++t) {
      const TrialRecord& r = recs[g * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      if (r.feasible) {
        row.mean_ee_c += r.ee_c;
        row.mean_ee_s += r.ee_s;
        row.feasible_fraction += 1.0;
      }
      row.mean_iterations += r.outer_iterations;
      row.mean_seconds += r.seconds;
    }
    row.mean_ee_c /= trials;
    row.mean_ee_s /= trials;
    row.feasible_fraction /= trials;
    row.mean_iterations /= trials;
    row.mean_seconds /= trials;
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_d(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

const char* kSummaryHeader = "algorithm,param,value,mean_ee_c,mean_ee_s,feasible_fraction,mean_iterations,mean_seconds";
const char* kTrialsHeader =
    "algorithm,param,value,trial,seed,outcome,feasible,ee_c,ee_s,power,crb,sum_rate,outer_iterations,seconds";

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::eec_point: return "eec-point";
    case Algorithm::eec_extended: return "eec-extended";
    case Algorithm::ees_point: return "ees-point";
    case Algorithm::ees_extended: return "ees-extended";
    case Algorithm::power_min: return "power-min";
    case Algorithm::sumrate_max: return "sumrate-max";
    case Algorithm::pareto: return "pareto";
  }
  return "unknown";
}

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::rho: return "rho";
    case SweepParam::gamma: return "gamma";
    case SweepParam::Pmax: return "Pmax";
    case SweepParam::E: return "E";
    case SweepParam::K: return "K";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::eec_point, Algorithm::eec_extended, Algorithm::ees_point, Algorithm::ees_extended,
                      Algorithm::power_min, Algorithm::sumrate_max, Algorithm::pareto}) {
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

SweepParam parse_sweep_param(const std::string& s) {
  for (SweepParam p : {SweepParam::rho, SweepParam::gamma, SweepParam::Pmax, SweepParam::E, SweepParam::K}) {
    if (s == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("sweep grid must be ascending");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if ((param == SweepParam::E) != (algorithm == Algorithm::pareto)) {
    throw std::invalid_argument("the E parameter goes with the pareto algorithm only");
  }
  opts.validate();
}

bool SweepResult::all_infeasible() const {
  return std::all_of(trials.begin(), trials.end(), [](const TrialRecord& r) { return !r.feasible; });
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.algorithm == Algorithm::pareto) return run_pareto(spec);
  spec.validate();
  const int G = static_cast<int>(spec.grid.size());
  std::vector<TrialRecord> recs(static_cast<std::size_t>(G * spec.trials));
  parallel_for(G * spec.trials, spec.threads, [&](int idx) {
    const int g = idx / spec.trials;
    const int t = idx % spec.trials;
    TrialRecord& r = recs[static_cast<std::size_t>(idx)];
    r.value = spec.grid[static_cast<std::size_t>(g)];
    r.trial = t;
    r.seed = spec.seed + static_cast<std::uint64_t>(t);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RawConfig raw = override_param(spec.base, spec.param, r.value);
      raw["seed"] = std::to_string(r.seed);
      const SystemConfig cfg = make_config(raw);
      const ChannelSet ch = draw_channels(cfg);
      fill_record(r, dispatch(spec.algorithm, cfg, ch, spec.opts));
    } catch (const std::exception&) {
      r.outcome = "error";
      r.feasible = false;
    }
    if (spec.record_timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  SweepResult out;
  out.algorithm = spec.algorithm;
  out.param = spec.param;
  out.trials = std::move(recs);
  out.rows = summarize(spec.grid, spec.trials, out.trials);
  return out;
}

SweepResult run_pareto(const SweepSpec& spec) {
  spec.validate();
  const int G = static_cast<int>(spec.grid.size());
  std::vector<TrialRecord> recs(static_cast<std::size_t>(G * spec.trials));
  parallel_for(spec.trials, spec.threads, [&](int t) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(t);
    auto at = [&](int g) -> TrialRecord& {
      return recs[static_cast<std::size_t>(g) * static_cast<std::size_t>(spec.trials) + static_cast<std::size_t>(t)];
    };
    for (int g = 0; g < G; ++g) {
      at(g).value = spec.grid[static_cast<std::size_t>(g)];
      at(g).trial = t;
      at(g).seed = seed;
      at(g).outcome = "error";
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RawConfig raw = spec.base;
      raw["seed"] = std::to_string(seed);
      const SystemConfig cfg = make_config(raw);
      const ChannelSet ch = draw_channels(cfg);
      ParetoOptions po;
      po.algo = spec.opts;
      po.keep_qos = spec.keep_qos;
      double scale = 1.0;
      const BeamformerSolution best = solve_ees_point(cfg, ch, spec.opts);
      if (best.ok()) po.start = best.W;
      if (spec.E_relative) {
        if (!best.ok()) {
          for (int g = 0; g < G; ++g) at(g).outcome = to_string(best.outcome);
          return;
        }
        scale = best.achieved.at("ee_s");
      }
      std::vector<double> E;
      for (double v : spec.grid) E.push_back(v * scale);
      const std::vector<ParetoPoint> pts = solve_pareto_point(cfg, ch, E, po);
      for (int g = 0; g < G; ++g) {
        const ParetoPoint& p = pts[static_cast<std::size_t>(g)];
        TrialRecord& r = at(g);
        fill_record(r, p.solution);
        r.feasible = p.feasible;
        if (!p.feasible) r.ee_c = r.ee_s = r.power = r.crb = r.sum_rate = 0.0;
      }
    } catch (const std::exception&) {
      for (int g = 0; g < G; ++g) at(g).feasible = false;
    }
    if (spec.record_timing) {
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / G;
      for (int g = 0; g < G; ++g) at(g).seconds = sec;
    }
  });
  SweepResult out;
  out.algorithm = spec.algorithm;
  out.param = spec.param;
  out.trials = std::move(recs);
  out.rows = summarize(spec.grid, spec.trials, out.trials);
  return out;
}

void write_sweep_csv(const SweepResult& r, const std::string& summary_path, const std::string& trials_path) {
  std::ofstream s(summary_path);
  if (!s) throw std::runtime_error("cannot write '" + summary_path + "'");
  s << kSummaryHeader << '\n';
  const std::string a = to_string(r.algorithm), p = to_string(r.param);
  for (const auto& row : r.rows) {
    s << a << ',' << p << ',' << num(row.value) << ',' << num(row.mean_ee_c) << ',' << num(row.mean_ee_s) << ','
      << num(row.feasible_fraction) << ',' << num(row.mean_iterations) << ',' << num(row.mean_seconds) << '\n';
  }
  if (!s) throw std::runtime_error("write failed for '" + summary_path + "'");
  std::ofstream t(trials_path);
  if (!t) throw std::runtime_error("cannot write '" + trials_path + "'");
  t << kTrialsHeader << '\n';
  for (const auto& x : r.trials) {
    t << a << ',' << p << ',' << num(x.value) << ',' << x.trial << ',' << x.seed << ',' << x.outcome << ','
      << (x.feasible ? 1 : 0) << ',' << num(x.ee_c) << ',' << num(x.ee_s) << ',' << num(x.power) << ','
      << num(x.crb) << ',' << num(x.sum_rate) << ',' << x.outer_iterations << ',' << num(x.seconds) << '\n';
  }
  if (!t) throw std::runtime_error("write failed for '" + trials_path + "'");
}

SweepResult read_sweep_csv(const std::string& summary_path, const std::string& trials_path) {
  SweepResult r;
  std::ifstream s(summary_path);
  if (!s) throw std::runtime_error("cannot read '" + summary_path + "'");
  std::string line;
  if (!std::getline(s, line) || line != kSummaryHeader) throw std::runtime_error("unexpected summary header");
  bool first = true;
  while (std::getline(s, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 8) throw std::runtime_error("summary row has " + std::to_string(c.size()) + " cells");
    if (first) {
      r.algorithm = parse_algorithm(c[0]);
      r.param = parse_sweep_param(c[1]);
      first = false;
    }
    SweepRow row;
    row.value = to_d(c[2]);
    row.mean_ee_c = to_d(c[3]);
    row.mean_ee_s = to_d(c[4]);
    row.feasible_fraction = to_d(c[5]);
    row.mean_iterations = to_d(c[6]);
    row.mean_seconds = to_d(c[7]);
    r.rows.push_back(row);
  }
  std::ifstream t(trials_path);
  if (!t) throw std::runtime_error("cannot read '" + trials_path + "'");
  if (!std::getline(t, line) || line != kTrialsHeader) throw std::runtime_error("unexpected trials header");
  while (std::getline(t, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 14) throw std::runtime_error("trial row has " + std::to_string(c.size()) + " cells");
    TrialRecord x;
    x.value = to_d(c[2]);
    x.trial = std::stoi(c[3]);
    x.seed = std::stoull(c[4]);
    x.outcome = c[5];
    x.feasible = c[6] == "1";
    x.ee_c = to_d(c[7]);
    x.ee_s = to_d(c[8]);
    x.power = to_d(c[9]);
    x.crb = to_d(c[10]);
    x.sum_rate = to_d(c[11]);
    x.outer_iterations = std::stoi(c[12]);
    x.seconds = to_d(c[13]);
    r.trials.push_back(x);
  }
  return r;
}

void write_svg(const std::string& path, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, const std::vector<Series>& series) {
  const double W = 640, H = 420, l = 80, r = 20, t = 40, b = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto X = [&](double v) { return l + (v - x0) / (x1 - x0) * (W - l - r); };
  auto Y = [&](double v) { return H - b - (v - y0) / (y1 - y0) * (H - t - b); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  f << "<line x1=\"" << l << "\" y1=\"" << H - b << "\" x2=\"" << W - r << "\" y2=\"" << H - b
    << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << l << "\" y1=\"" << t << "\" x2=\"" << l << "\" y2=\"" << H - b << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.4g", xv);
    std::snprintf(by, sizeof by, "%.4g", yv);
    f << "<text x=\"" << X(xv) << "\" y=\"" << H - b + 18 << "\" text-anchor=\"middle\">" << bx << "</text>\n";
    f << "<text x=\"" << l - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << by << "</text>\n";
    f << "<line x1=\"" << l << "\" y1=\"" << Y(yv) << "\" x2=\"" << W - r << "\" y2=\"" << Y(yv)
      << "\" stroke=\"#ddd\"/>\n";
  }
  f << "<text x=\"" << (l + W - r) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  f << "<text transform=\"translate(18," << (t + H - b) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
    << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colors[k % 6];
    f << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) f << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    }
    f << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        f << "<circle cx=\"" << X(s.x[i]) << "\" cy=\"" << Y(s.y[i]) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      }
    }
    f << "<text x=\"" << W - r - 150 << "\" y=\"" << t + 16 * (k + 1) << "\" fill=\"" << col << "\">" << s.name
      << "</text>\n";
  }
  f << "</svg>\n";
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace isacee
