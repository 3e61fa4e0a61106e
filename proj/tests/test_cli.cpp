// Copyright 2026 The isingclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "isingclf/cli.hpp"

using namespace isingclf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("isingclf_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("synth, benchmark and stats") {
  const auto dir = scratch("bench");
  const auto data = (dir / "d.csv").string();
  auto r = cli({"--seed", "3", "synth", "--out", data, "--features", "4", "--n-per-class", "30",
                "--layout", "uniform"});
  REQUIRE(r.code == 0);

  const std::vector<std::string> bench{"--data", data, "--seed", "5", "--splits", "3",
                                       "--pca-k", "3", "--methods", "field,ridge",
                                       "--out-dir", (dir / "a").string(), "benchmark"};
  r = cli(bench);
  REQUIRE(r.code == 0);
  auto again = bench;
  again[again.size() - 2] = (dir / "b").string();
  REQUIRE(cli(again).code == 0);
  for (const char* f : {"benchmark_report.json", "benchmark_splits.csv", "benchmark_aggregate.csv"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "benchmark_report.json"));
  CHECK(report["pairwise_tests"].size() == 4);
  CHECK(report["per_split"].size() == 6);
  CHECK(slurp(dir / "a" / "benchmark_splits.csv").find("\r\n") != std::string::npos);

  r = cli({"stats", "--input", (dir / "a" / "benchmark_splits.csv").string()});
  REQUIRE(r.code == 0);
  const auto stats = nlohmann::json::parse(r.out);
  CHECK(stats["pairwise_tests"].size() == 4);
  CHECK(stats["pairwise_tests"] == report["pairwise_tests"]);
}

TEST_CASE("config file and environment") {
  const auto dir = scratch("config");
  const auto data = (dir / "d.csv").string();
  REQUIRE(cli({"synth", "--out", data, "--features", "3", "--n-per-class", "20"}).code == 0);
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"dataset": ")" << data << R"(", "methods": ["field"], "seed": 2, "pca_k": 0,
              "n_splits": 2, "fractions": [0.9, 0.5], "cv_folds": 3,
              "out_dir": ")" << (dir / "out").string() << R"("})";
  }
  auto r = cli({"--config", (dir / "run.json").string(), "sweep"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "out" / "sweep_report.json"));
  CHECK(j["aggregate"].size() == 2);

  // Flags override the file.
  r = cli({"--config", (dir / "run.json").string(), "--fractions", "0.7", "sweep"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "out" / "sweep_report.json"))["aggregate"].size() == 1);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"dataset": "x.csv", "colour": 1})";
  }
  r = cli({"--config", (dir / "bad.json").string(), "benchmark"});
  CHECK(r.code != 0);
  CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("train, evaluate and solve") {
  const auto dir = scratch("train");
  const auto data = (dir / "d.csv").string();
  REQUIRE(cli({"synth", "--out", data, "--features", "4", "--n-per-class", "40",
               "--layout", "uniform"}).code == 0);
  const auto model = (dir / "m.json").string();
  auto r = cli({"--data", data, "--methods", "ridge", "--pca-k", "2", "train", "--model", model,
                "--hyperparameter", "0.01"});
  REQUIRE(r.code == 0);
  r = cli({"--data", data, "evaluate", "--model", model});
  REQUIRE(r.code == 0);
  const auto e = nlohmann::json::parse(r.out);
  CHECK(e["metrics"]["balanced_accuracy"].get<double>() >= 0.95);

  {
    std::ofstream p(dir / "p.txt");
    p << "3\n0 0 0\n0 1 -1\n1 2 -1\n0 2 -1\n";
  }
  r = cli({"--seed", "1", "solve", "--problem", (dir / "p.txt").string(), "--solver", "exhaustive"});
  REQUIRE(r.code == 0);
  const auto s = nlohmann::json::parse(r.out);
  CHECK(s["configurations"][0]["energy"].get<double>() == doctest::Approx(-3.0));
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code != 0);
  CHECK(cli({"frobnicate"}).code != 0);
  const auto r = cli({"--data", "/nonexistent.csv", "--methods", "sa", "benchmark"});
  CHECK(r.code == 1);
  CHECK(!r.err.empty());
  const auto m = cli({"--data", "/nonexistent.csv", "--methods", "lasso", "benchmark"});
  CHECK(m.code == 1);
}
