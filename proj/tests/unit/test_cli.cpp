// Copyright 2026 The lbpl-ntm Authors
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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "support/temp_dir.hpp"

using lbpl::testing::read_file;
using lbpl::testing::TempDir;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lbpl_ntm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lbpl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string generate_small(const TempDir& dir) {
  const std::string data = (dir.path() / "data").string();
  const auto r = invoke({"generate", "--out", data, "--docs", "24", "--doc-length", "20",
                         "--categories", "3", "--known", "2", "--vocab-size", "30",
                         "--gen-topics", "6", "--seed", "5"});
  REQUIRE(r.code == 0);
  return data;
}

}  // namespace

TEST_CASE("missing corpus prints usage and fails") {
  const auto r = invoke({"--out", "x"});
  CHECK(r.code != 0);
  CHECK(r.err.find("--corpus") != std::string::npos);
  CHECK(r.err.find("--iters") != std::string::npos);
}

TEST_CASE("unknown flag fails") { CHECK(invoke({"--no-such-flag"}).code != 0); }

TEST_CASE("generate then infer writes all outputs") {
  TempDir dir;
  const std::string data = generate_small(dir);
  const std::string out = (dir.path() / "run").string();
  const auto r = invoke({"infer", "--corpus", data + "/corpus.bow", "--labels",
                         data + "/labels.txt", "--vocab", data + "/vocab.txt", "--truth",
                         data + "/truth.txt", "--out", out, "--iters", "20", "--burn-in", "5",
                         "--chains", "2", "--topics", "6", "--audit-every", "5"});
  INFO(r.err);
  REQUIRE(r.code == 0);
  for (const char* f : {"config.txt", "assignments.tsv", "k_histogram.tsv", "metrics.json",
                        "chain_0/trace.csv", "chain_0/assignments.tsv", "chain_0/final.ckpt",
                        "chain_1/metrics.json"}) {
    CHECK_MESSAGE(std::filesystem::exists(std::filesystem::path(out) / f), f);
  }
  const std::string trace = read_file(std::filesystem::path(out) / "chain_0/trace.csv");
  CHECK(trace.rfind("iter,K,M,gamma,alpha,log_joint\n", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 21);

  const auto metrics = nlohmann::json::parse(read_file(std::filesystem::path(out) / "metrics.json"));
  CHECK(metrics["chains"].size() == 2);
  for (const char* key : {"nmi", "ari", "avg_f1"}) CHECK(metrics["mean"].contains(key));

  const std::string assignments = read_file(std::filesystem::path(out) / "assignments.tsv");
  CHECK(std::count(assignments.begin(), assignments.end(), '\n') == 24);
  CHECK(assignments.rfind("0\t", 0) == 0);
}

TEST_CASE("same seed gives byte-identical output") {
  TempDir dir;
  const std::string data = generate_small(dir);
  std::vector<std::string> outs;
  for (const char* name : {"a", "b"}) {
    const std::string out = (dir.path() / name).string();
    outs.push_back(out);
    REQUIRE(invoke({"--corpus", data + "/corpus.bow", "--labels", data + "/labels.txt",
                    "--out", out, "--iters", "15", "--chains", "2", "--topics", "5", "--seed",
                    "9"})
                .code == 0);
  }
  for (const char* f : {"assignments.tsv", "k_histogram.tsv", "chain_0/trace.csv",
                        "chain_1/trace.csv", "chain_1/final.ckpt"}) {
    CHECK_MESSAGE(read_file(std::filesystem::path(outs[0]) / f) ==
                      read_file(std::filesystem::path(outs[1]) / f),
                  f);
  }
  CHECK(read_file(std::filesystem::path(outs[0]) / "chain_0/trace.csv") !=
        read_file(std::filesystem::path(outs[0]) / "chain_1/trace.csv"));
}

TEST_CASE("config records defaults") {
  TempDir dir;
  const auto bow = dir.write("c.bow", "2 3 3\n0 0 2\n0 2 1\n1 1 1\n");
  const std::string out = (dir.path() / "run").string();
  REQUIRE(invoke({"--corpus", bow.string(), "--out", out, "--iters", "3"}).code == 0);
  const std::string config = read_file(std::filesystem::path(out) / "config.txt");
  for (const char* line : {"topics = 128\n", "zeta = 1\n", "beta = 0.01\n", "a_gamma = 1\n",
                           "b_gamma = 0.001\n", "a_alpha = 5\n", "b_alpha = 0.10000000000000001\n",
                           "iters = 3\n", "burn_in = 0\n", "chains = 1\n", "seed = 0\n"}) {
    CHECK_MESSAGE(config.find(line) != std::string::npos, line);
  }
  // No truth file, so no metrics.
  CHECK_FALSE(std::filesystem::exists(std::filesystem::path(out) / "metrics.json"));
}

TEST_CASE("malformed corpus reports file and line") {
  TempDir dir;
  const auto bow = dir.write("bad.bow", "2 3 3\n0 0 2\n0 7 1\n1 1 1\n");
  const auto r = invoke({"--corpus", bow.string(), "--out", (dir.path() / "o").string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("bad.bow") != std::string::npos);
  CHECK(r.err.find(":3") != std::string::npos);
}

TEST_CASE("invalid settings are rejected") {
  TempDir dir;
  const auto bow = dir.write("c.bow", "1 2 1\n0 0 1\n");
  const std::string out = (dir.path() / "o").string();
  CHECK(invoke({"--corpus", bow.string(), "--out", out, "--iters", "5", "--burn-in", "5"}).code !=
        0);
  CHECK(invoke({"--corpus", bow.string(), "--out", out, "--zeta", "-1"}).code != 0);
  CHECK(invoke({"--corpus", bow.string(), "--out", out, "--chains", "0"}).code != 0);
  CHECK(invoke({"generate", "--out", out, "--known", "9"}).code != 0);
}

TEST_CASE("geweke mode writes a table") {
  TempDir dir;
  const std::string out = (dir.path() / "g").string();
  const auto r = invoke({"geweke", "--out", out, "--samples", "200", "--thin", "2", "--gamma",
                         "1", "--alpha", "1"});
  INFO(r.err);
  REQUIRE(r.code == 0);
  const std::string table = read_file(std::filesystem::path(out) / "geweke.tsv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(table.find("num_tables") != std::string::npos);
}
