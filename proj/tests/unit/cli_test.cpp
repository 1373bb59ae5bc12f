// Copyright 2026 The sdlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace sdlink::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("sdlink-cli-") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(std::vector<std::string> args) {
    out_.str({});
    err_.str({});
    return run_cli(args, out_, err_);
  }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, RunWritesOneTracePerSeed) {
  ASSERT_EQ(cli({"run", "--capacity", "2", "--seeds", "0..10", "--messages",
                 "3", "--jobs", "4", "--out", dir_.string()}),
            kPass);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    EXPECT_EQ(e.path().extension(), ".json");
    ++files;
  }
  EXPECT_EQ(files, 10);
  EXPECT_TRUE(fs::exists(path("trace-sdl-c2-seed7.json")));
}

TEST_F(CliTest, RunIsDeterministic) {
  const std::vector<std::string> base{"run", "--seed", "5", "--messages", "4",
                                      "--init", "arbitrary", "--out"};
  auto a = base;
  a.push_back(path("a"));
  auto b = base;
  b.push_back(path("b"));
  ASSERT_EQ(cli(a), kPass);
  ASSERT_EQ(cli(b), kPass);
  const std::string name = "trace-sdl-c1-seed5.json";
  EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name));
}

TEST_F(CliTest, CheckPassesCleanTrace) {
  ASSERT_EQ(cli({"run", "--seed", "1", "--messages", "3", "--out",
                 dir_.string()}),
            kPass);
  EXPECT_EQ(cli({"check", path("trace-sdl-c1-seed1.json"), "--report",
                 path("report.json")}),
            kPass);
  EXPECT_TRUE(fs::exists(path("report.json")));
}

TEST_F(CliTest, CheckFailsAbpScenario) {
  ASSERT_EQ(cli({"run", "--protocol", "abp", "--scenario", "abp-fail",
                 "--out", dir_.string()}),
            kPass);
  EXPECT_EQ(cli({"check", path("scenario-abp-fail-abp.json")}), kViolation);
}

TEST_F(CliTest, TightnessBoundsAreEnforced) {
  ASSERT_EQ(cli({"run", "--scenario", "ghost-tight", "--out", dir_.string()}),
            kPass);
  const auto trace = path("scenario-ghost-tight-sdl.json");
  EXPECT_EQ(cli({"check", trace}), kPass);
  EXPECT_EQ(cli({"check", trace, "--gamma", "0"}), kViolation);
}

TEST_F(CliTest, CheckEmptyTraceDocumentPasses) {
  write("empty.json", R"({"version": 1, "params": {"c": 1}})");
  EXPECT_EQ(cli({"check", path("empty.json")}), kPass);
}

TEST_F(CliTest, CheckNonQuiescentIsIncomplete) {
  ASSERT_EQ(cli({"run", "--seed", "0", "--max-steps", "3", "--out",
                 dir_.string()}),
            kIncomplete);
  EXPECT_EQ(cli({"check", path("trace-sdl-c1-seed0.json")}), kIncomplete);
}

TEST_F(CliTest, CheckParseErrorNamesLocation) {
  write("bad.json",
        R"({"version": 1, "params": {"c": 1}, "config_init": {
            "sender": {"phase": "idle", "ab": false, "cursor": "send",
                       "payload": null, "ack_count": 0},
            "receiver": {"last_delivered": false, "queue": []},
            "chan_data": [{"wire": "ack", "payload": {"kind": "synchro"},
                           "ab": true}],
            "chan_ack": []}})");
  EXPECT_EQ(cli({"check", path("bad.json")}), kUsage);
  EXPECT_NE(err_.str().find("/config_init/chan_data/0/wire"),
            std::string::npos)
      << err_.str();
  write("truncated.json", "{\"version\": ");
  EXPECT_EQ(cli({"check", path("truncated.json")}), kUsage);
}

TEST_F(CliTest, ExhaustiveCleanPasses) {
  EXPECT_EQ(cli({"exhaustive", "--capacity", "1", "--messages", "1",
                 "--report", path("explore.json")}),
            kPass);
  EXPECT_NE(out_.str().find("visited states: 243"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("explore.json")));
}

TEST_F(CliTest, ExhaustiveAbpWritesWitness) {
  EXPECT_EQ(cli({"exhaustive", "--protocol", "abp", "--init", "all",
                 "--witness", path("w.json")}),
            kViolation);
  EXPECT_TRUE(fs::exists(path("w.json")));
  EXPECT_NE(slurp(dir_ / "w.json").find("\"steps\""), std::string::npos);
}

TEST_F(CliTest, ExhaustiveDepthBoundIsIncomplete) {
  EXPECT_EQ(cli({"exhaustive", "--depth", "1"}), kIncomplete);
  EXPECT_NE(out_.str().find("PARTIAL"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}), kUsage);
  EXPECT_EQ(cli({"fly"}), kUsage);
  EXPECT_EQ(cli({"run", "--policy", "chaos"}), kUsage);
  EXPECT_EQ(cli({"run", "--capacity", "zero"}), kUsage);
  EXPECT_EQ(cli({"run", "--seed", "1", "--seeds", "0..2"}), kUsage);
  EXPECT_EQ(cli({"run", "--seeds", "5..2"}), kUsage);
  EXPECT_EQ(cli({"run", "--p-deliver", "2"}), kUsage);
  EXPECT_EQ(cli({"run", "--scenario", "nope"}), kUsage);
  EXPECT_EQ(cli({"check"}), kUsage);
  EXPECT_EQ(cli({"exhaustive", "--init", "some"}), kUsage);
  EXPECT_EQ(cli({"exhaustive", "--capacity", "0"}), kUsage);
}

}  // namespace
}  // namespace sdlink::cli
