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
// Exit codes of the stabsw binary. STABSW_CLI is its path, set by CMake.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(STABSW_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::path(testing::TempDir()) / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string out_dir(const std::string& name) { return (std::filesystem::path(testing::TempDir()) / name).string(); }

}  // namespace

TEST(cli, successful_run_exits_zero) {
  const auto cfg = write_config("cli_ok.conf", "n = 10\nh = 0.1\norder = 2\n");
  EXPECT_EQ(run_cli("tfim --config " + cfg + " --out " + out_dir("cli_ok") + " --emit-plotdata"), 0);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(out_dir("cli_ok")) / "plotdata.csv"));
}

TEST(cli, config_errors_exit_two) {
  const auto empty = write_config("cli_empty.conf", "n = 10\norder = 2\n");
  EXPECT_EQ(run_cli("tfim --config " + empty + " --out " + out_dir("cli_empty")), 2);
  const auto unknown = write_config("cli_unknown.conf", "n = 10\nh = 0.1\nflavour = up\n");
  EXPECT_EQ(run_cli("tfim --config " + unknown), 2);
  EXPECT_EQ(run_cli("tfim"), 2);  // --config is required
  EXPECT_EQ(run_cli("tfim --config /nonexistent/file.conf"), 2);
  EXPECT_EQ(run_cli("sideways"), 2);
}

TEST(cli, term_cap_breach_exits_three) {
  const auto cfg = write_config("cli_cap.conf", "extents = 4x4\nh = 0.1\norder = 4\n");
  EXPECT_EQ(run_cli("toric --config " + cfg + " --term-cap 10 --out " + out_dir("cli_cap")), 3);
}

TEST(cli, order_override_applies) {
  const auto cfg = write_config("cli_order.conf", "n = 10\nh = 0.1\norder = 2\n");
  EXPECT_EQ(run_cli("tfim --config " + cfg + " --order 0 --out " + out_dir("cli_order")), 2);
}
