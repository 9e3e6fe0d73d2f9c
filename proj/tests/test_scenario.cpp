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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "isacee/scenario.hpp"

using namespace isacee;

TEST(Units, PowerConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watt(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watt(33.0), 1.9952623149688795, 1e-15);
  EXPECT_NEAR(watt_to_dbm(dbm_to_watt(17.5)), 17.5, 1e-12);
  EXPECT_NEAR(db_to_linear(10.0), 10.0, 1e-12);
  EXPECT_NEAR(linear_to_db(100.0), 20.0, 1e-12);
}

TEST(Config, M16PresetUnits) {
  const SystemConfig cfg = make_config(preset("m16"));
  EXPECT_EQ(cfg.M, 16);
  EXPECT_EQ(cfg.N_rx, 20);
  EXPECT_EQ(cfg.L, 30);
  EXPECT_DOUBLE_EQ(cfg.Pmax, 1.0);
  EXPECT_NEAR(cfg.P0, 1.9953, 1e-4);
  EXPECT_NEAR(cfg.rho, 0.15 * kPi / 180.0, 1e-15);
  EXPECT_NEAR(cfg.theta, kPi / 2, 1e-15);
  ASSERT_EQ(cfg.gamma.size(), 2u);
  EXPECT_NEAR(cfg.gamma[0], 10.0, 1e-12);
  EXPECT_FALSE(cfg.tau_active());
  EXPECT_EQ(make_config(preset("m14")).M, 14);
  EXPECT_EQ(make_config(preset("desk")).M, 8);
}

TEST(Config, RejectsInvariantViolations) {
  RawConfig raw = preset("desk");
  raw["K"] = "3";
  raw["M"] = "2";
  try {
    make_config(raw);
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("K exceeds M"), std::string::npos);
  }
  raw = preset("desk");
  raw.erase("rho");
  EXPECT_THROW(make_config(raw), std::invalid_argument);
  raw = preset("desk");
  raw["bogus"] = "1";
  EXPECT_THROW(make_config(raw), std::invalid_argument);
  raw = preset("desk");
  raw["eps_pa"] = "1.5";
  EXPECT_THROW(make_config(raw), std::invalid_argument);
  raw = preset("desk");
  raw["Pmax"] = "30 furlongs";
  EXPECT_THROW(make_config(raw), std::invalid_argument);
  EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Config, InfiniteThresholdsDisableConstraints) {
  RawConfig raw = preset("desk");
  raw["rho"] = "inf rad";
  raw["tau"] = "5";
  const SystemConfig cfg = make_config(raw);
  EXPECT_FALSE(cfg.crb_active());
  EXPECT_TRUE(cfg.tau_active());
  EXPECT_DOUBLE_EQ(cfg.tau, 5.0);
}

TEST(Config, RawRoundTrip) {
  RawConfig raw = preset("desk");
  raw["gamma"] = "3,7 lin";
  raw["alpha"] = "0.5,-0.25";
  const SystemConfig a = make_config(raw);
  const SystemConfig b = make_config(to_raw(a));
  EXPECT_EQ(a.M, b.M);
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_DOUBLE_EQ(a.P0, b.P0);
  EXPECT_DOUBLE_EQ(a.rho, b.rho);
  EXPECT_DOUBLE_EQ(a.theta, b.theta);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.rng_seed, b.rng_seed);
}

TEST(Config, TextParsing) {
  const RawConfig raw = parse_config_text("# comment\nM = 4\n  Pmax = 27 dBm  # trailing\n\ngamma=5 dB\n");
  EXPECT_EQ(raw.at("M"), "4");
  EXPECT_EQ(raw.at("Pmax"), "27 dBm");
  EXPECT_EQ(raw.at("gamma"), "5 dB");
  EXPECT_THROW(parse_config_text("no equals sign\n"), std::invalid_argument);

  const std::string path = ::testing::TempDir() + "isacee_cfg.txt";
  std::ofstream(path) << "K = 1\nrho = 1 deg\n";
  const SystemConfig cfg = make_config(merge(preset("desk"), load_config_file(path)));
  EXPECT_EQ(cfg.K, 1);
  EXPECT_EQ(cfg.gamma.size(), 1u);
  EXPECT_THROW(load_config_file(path + ".missing"), std::runtime_error);
}

TEST(Channels, DeterministicAndShaped) {
  RawConfig raw = preset("desk");
  raw["M"] = "4";
  raw["seed"] = "11";
  const SystemConfig cfg = make_config(raw);
  const ChannelSet a = draw_channels(cfg), b = draw_channels(cfg);
  ASSERT_EQ(a.h.size(), 2u);
  EXPECT_EQ(a.h[0].size(), 4);
  for (std::size_t k = 0; k < a.h.size(); ++k) EXPECT_EQ(a.h[k], b.h[k]);
  raw["seed"] = "12";
  const ChannelSet c = draw_channels(make_config(raw));
  EXPECT_NE(a.h[0], c.h[0]);
}

TEST(Channels, UnitVariancePerEntry) {
  RawConfig raw = preset("m16");
  raw["K"] = "16";
  double sum = 0.0;
  int count = 0;
  for (int s = 0; s < 50; ++s) {
    raw["seed"] = std::to_string(s);
    for (const auto& h : draw_channels(make_config(raw)).h) {
      sum += h.squaredNorm();
      count += static_cast<int>(h.size());
    }
  }
  EXPECT_NEAR(sum / count, 1.0, 0.05);
}
