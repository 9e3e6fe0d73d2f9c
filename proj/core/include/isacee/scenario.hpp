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

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "isacee/types.hpp"

namespace isacee {

/// Flat key/value configuration as read from a file or command line.
/// Values carry their unit inline, e.g. "30 dBm", "0.15 deg", "10 dB".
using RawConfig = std::map<std::string, std::string>;

/// All physical parameters of one scenario, in SI units (watts, radians).
struct SystemConfig {
  int M = 16;
  int N_rx = 20;
  int L = 30;
  int K = 2;
  double eps_pa = 0.35;
  double P0 = 1.9952623149688795;
  double Pmax = 1.0;
  double sigma_c2 = 0.01;
  double sigma_s2 = 0.1;
  std::vector<double> gamma{10.0, 10.0};
  // Root-CRB threshold for the point target, radians. Infinity disables it.
  double rho = 0.0026179938779914945;
  // CRB threshold for extended-target response estimation. Infinity disables it.
  double tau = std::numeric_limits<double>::infinity();
  double theta = kPi / 2;
  cplx alpha{1.0, 0.0};
  std::uint64_t rng_seed = 1;

  /// Squared root-CRB threshold (the bound applied to crb_point).
  double crb_bound() const { return rho * rho; }
  bool crb_active() const { return std::isfinite(rho); }
  bool tau_active() const { return std::isfinite(tau); }

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct Scatterer {
  double theta;
  cplx alpha;
};

struct ChannelSet {
  std::vector<CVec> h;
  double theta = kPi / 2;
  cplx alpha{1.0, 0.0};
  std::vector<Scatterer> scatterers;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);
double linear_to_db(double lin);

/// Build a validated config. Every key of required_config_keys() must be present.
SystemConfig make_config(const RawConfig& raw);

/// Keys that make_config() insists on.
const std::vector<std::string>& required_config_keys();

/// Render a config back to raw form (watts, radians, linear units).
RawConfig to_raw(const SystemConfig& cfg);

/// Named parameter sets: "m16" (M=16), "m14" (M=14), "desk" (M=8).
RawConfig preset(std::string_view name);

/// Entries of `overrides` replace those of `base`.
RawConfig merge(RawConfig base, const RawConfig& overrides);

/// Parse "key = value" lines; '#' starts a comment.
RawConfig parse_config_text(std::string_view text);
RawConfig load_config_file(const std::string& path);

/// K i.i.d. CN(0, I_M) user channels; deterministic in cfg.rng_seed.
ChannelSet draw_channels(const SystemConfig& cfg);

}  // namespace isacee
