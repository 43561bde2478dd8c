// Copyright 2026 The projens Authors
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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("projens_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  CliRun run(const std::string& command, const fs::path& config, const std::string& extra = "") const {
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + PROJENS_CLI_PATH + "\" " + command + " --config \"" + config.string() +
                            "\" --out \"" + (dir_ / "out").string() + "\" " + extra + " > /dev/null 2> \"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
  }

  fs::path dir_;
};

TEST_F(Cli, RabiTrace) {
  const fs::path cfg = fs::path(PROJENS_CONFIG_DIR) / "rabi.json";
  ASSERT_EQ(run("evolve", cfg).code, 0);
  std::ifstream in(dir_ / "out" / "observables.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.substr(line.rfind(',') + 1), "n_1");
  int rows = 0;
  while (std::getline(in, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    const double n1 = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_NEAR(n1, std::pow(std::sin(M_PI * t), 2), 1e-9) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 41);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "config.resolved.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "result.json"));
}

TEST_F(Cli, UnknownFieldIsConfigError) {
  const auto cfg = write("c.json", R"({"command": "evolve", "model": {"type": "rydberg", "n": 1, "omega": 1.0, "delta": 0.0, "omgea": 1.0},
                                       "times": [0.0, 1.0]})");
  const auto r = run("evolve", cfg);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("config.model.omgea"), std::string::npos) << r.err;
}

TEST_F(Cli, CommandMismatchAndTypeErrors) {
  const auto cfg = write("c.json", R"({"command": "ensemble", "model": {"type": "rydberg", "n": 1, "omega": 1.0},
                                       "times": [0.0]})");
  EXPECT_EQ(run("evolve", cfg).code, 2);
  const auto bad = write("d.json", R"({"command": "evolve", "model": {"type": "rydberg", "n": "two", "omega": 1.0},
                                       "times": [0.0]})");
  const auto r = run("evolve", bad);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("config.model.n"), std::string::npos) << r.err;
}

TEST_F(Cli, StochasticRunNeedsSeed) {
  const auto cfg = write("c.json", R"({"command": "evolve", "model": {"type": "rydberg", "n": 2, "omega": 1.0, "delta": 0.0},
                                       "times": [0.5], "samples": {"shots": 10}})");
  EXPECT_EQ(run("evolve", cfg).code, 2);
  EXPECT_EQ(run("evolve", cfg, "--seed 3").code, 0);
}

TEST_F(Cli, MalformedSampleFileIsInputError) {
  write("shots.txt", "0101\n01x1\n");
  const auto cfg = write("c.json", R"({"command": "benchmark", "model": {"type": "rydberg", "n": 4, "omega": 5.3,
                                       "delta": 0.5}, "times": [1.0], "samples": {"files": ["shots.txt"]}})");
  const auto r = run("benchmark", cfg);
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("shots.txt:2"), std::string::npos) << r.err;
}

}  // namespace
