// Copyright 2026 The stabsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "stabsw/config.hpp"

#include "gtest/gtest.h"

using namespace stabsw;

TEST(config, parses_keys_and_grid_forms) {
  const auto c = parse_config(
      "# ring\n"
      "n = 12\n"
      "h = 0.1:0.3:0.1   # inclusive range\n"
      "order = 4\n"
      "state = ghz\n"
      "observables = Z0, X0 ,YY:2\n"
      "tie_break = last\n"
      "mode = explicit\n",
      "tfim");
  EXPECT_EQ(c.model, "tfim");
  EXPECT_EQ(c.n, 12u);
  ASSERT_EQ(c.couplings.size(), 3u);
  EXPECT_DOUBLE_EQ(c.couplings[2], 0.3);
  EXPECT_EQ(c.order, 4u);
  EXPECT_EQ(c.state, "ghz");
  EXPECT_EQ(c.observables, (std::vector<std::string>{"Z0", "X0", "YY:2"}));
  EXPECT_EQ(c.tie_break, TieBreak::kLast);
  EXPECT_FALSE(c.translation_mode);
}

TEST(config, extents_and_coupling_name_follow_model) {
  const auto c = parse_config("extents = 6x4\nJ = -0.2, 0.1\n", "kagome");
  EXPECT_EQ(c.model, "kagome_tc");
  EXPECT_EQ(c.lx, 6u);
  EXPECT_EQ(c.ly, 4u);
  EXPECT_EQ(c.coupling_name, "J");
  EXPECT_EQ(c.couplings, (std::vector<double>{-0.2, 0.1}));
  EXPECT_THROW(parse_config("extents = 6x6\nh = 0.1\n", "kagome"), ConfigError);
}

TEST(config, rejects_malformed_input) {
  EXPECT_THROW(parse_config("n = 12\nn = 14\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("colour = blue\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("n 12\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("n = twelve\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("h = 0.3:0.1:0.1\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("model = toric_square\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("tie_break = middle\n", "tfim"), ConfigError);
  EXPECT_THROW(parse_config("", "spin_glass"), ConfigError);
}

TEST(config, empty_grid_is_a_config_error) {
  auto c = parse_config("n = 12\norder = 2\n", "tfim");
  c.out = testing::TempDir() + "stabsw_empty_grid";
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(config, validation_catches_bad_runs) {
  auto c = parse_config("n = 20\nh = 0.1\norder = 2\ned_compare = true\n", "tfim");
  c.out = testing::TempDir() + "stabsw_bad_runs";
  EXPECT_THROW(validate_config(c), ConfigError);  // ED beyond 14 qubits
  c.ed_compare = false;
  EXPECT_NO_THROW(validate_config(c));
  c.state = "all_right";
  c.couplings = {0.0};
  EXPECT_THROW(validate_config(c), ConfigError);
  c.state = "sideways";
  c.couplings = {1.0};
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(config, paramagnetic_frame_expands_in_inverse_field) {
  auto c = parse_config("n = 8\nh = 2\nstate = all_right\n", "tfim");
  EXPECT_DOUBLE_EQ(expansion_parameter(c, 2.0), 0.5);
  c.state = "all_up";
  EXPECT_DOUBLE_EQ(expansion_parameter(c, 2.0), 2.0);
}

TEST(config, kagome_frame_defaults_to_commuting_loops) {
  auto c = parse_config("extents = 4x4\nJ = 0.1\nperturbation = zz_ising\n", "kagome");
  EXPECT_TRUE(build_unit_model(c).warnings.empty());
  c.perturbation = "xx_ising";
  EXPECT_TRUE(build_unit_model(c).warnings.empty());
  c.frame = "z_loops";
  EXPECT_FALSE(build_unit_model(c).warnings.empty());
}
