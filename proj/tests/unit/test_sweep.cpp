// Copyright 2026 The ffsim Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "ffsim/sweep.hpp"

namespace ffsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

SweepConfig small_config() {
  SweepConfig c;
  c.r_multiples = {1, 3};
  c.alphas = {0.0, 10.0};
  c.n_realizations = 4;
  c.threads = 1;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ffsim_sweep_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the wall-time column so reruns can be compared byte for byte.
std::string without_wall_time(const std::string& table) {
  std::stringstream in(table);
  std::string out, line;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

TEST(SweepConfig, DefaultsAndValidation) {
  SweepConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.r_multiples, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(c.alphas.front(), 1.0);
  EXPECT_EQ(c.alphas.back(), 1000.0);
  for (double a : {1.0, 10.0, 50.0, 100.0}) {
    EXPECT_NE(std::find(c.alphas.begin(), c.alphas.end(), a), c.alphas.end()) << a;
  }
  EXPECT_GE(c.thread_count(), 1);
  c.threads = 3;
  EXPECT_EQ(c.thread_count(), 3);
  auto bad = SweepConfig{};
  bad.r_multiples = {};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SweepConfig{};
  bad.r_multiples = {0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SweepConfig{};
  bad.alphas = {-1.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SweepConfig{};
  bad.alphas = {std::nan("")};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SweepConfig{};
  bad.n_realizations = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = SweepConfig{};
  bad.threads = -2;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(SweepConfig, JsonRoundTripAndOverrides) {
  const json j = json::parse(R"({
    "gate": "rx", "r_multiples": [2, 5], "alphas": [0, 3.5], "n_realizations": 9, "threads": 2,
    "verify_convergence": false, "output_dir": "o", "ramp_shape": "cosine",
    "device": {"b0": 0.5},
    "noise": {"trace_dt": 0.5, "master_seed": 17, "common_mode": true},
    "propagation": {"dt": 0.25, "method": "rk4", "max_halvings": 2}
  })");
  const auto c = sweep_config_from_json(j);
  EXPECT_EQ(c.gate, GateKind::rx_m_half_pi);
  EXPECT_EQ(c.r_multiples, (std::vector<int>{2, 5}));
  EXPECT_EQ(c.alphas, (std::vector<double>{0.0, 3.5}));
  EXPECT_EQ(c.n_realizations, 9);
  EXPECT_FALSE(c.verify_convergence);
  EXPECT_EQ(c.experiment.shape, RampShape::cosine);
  EXPECT_DOUBLE_EQ(c.experiment.device.b0, 0.5);
  EXPECT_DOUBLE_EQ(c.experiment.device.gamma_e, DeviceParams{}.gamma_e);
  EXPECT_DOUBLE_EQ(c.experiment.noise.trace_dt, 0.5);
  EXPECT_EQ(c.master_seed(), 17u);
  EXPECT_TRUE(c.experiment.noise.common_mode);
  EXPECT_DOUBLE_EQ(c.experiment.propagation.dt, 0.25);
  EXPECT_EQ(c.experiment.propagation.method, PropagationSettings::Method::rk4);
  EXPECT_EQ(c.experiment.propagation.max_halvings, 2);
  EXPECT_EQ(to_json(sweep_config_from_json(to_json(c))), to_json(c));
}

TEST(SweepConfig, MissingKeysKeepBase) {
  SweepConfig base;
  base.n_realizations = 123;
  const auto c = sweep_config_from_json(json::parse(R"({"alphas": [5]})"), base);
  EXPECT_EQ(c.n_realizations, 123);
  EXPECT_EQ(c.alphas, std::vector<double>{5.0});
}

TEST(SweepConfig, RejectsUnknownOrMalformed) {
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"alpha": [1]})")), std::invalid_argument);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"noise": {"fmin": 1}})")), std::invalid_argument);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"device": 3})")), std::invalid_argument);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"gate": "cz"})")), std::invalid_argument);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"ramp_shape": "cubic"})")), std::invalid_argument);
  EXPECT_THROW(sweep_config_from_json(json::parse(R"({"propagation": {"method": "euler"}})")), std::invalid_argument);
  EXPECT_THROW(sweep_config_from_json(json::parse("[1, 2]")), std::invalid_argument);
}

TEST(SweepConfig, LoadFromFile) {
  const auto dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "ok.json") << R"({"gate": "rz", "n_realizations": 3})";
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_EQ(load_sweep_config(dir / "ok.json").n_realizations, 3);
  EXPECT_THROW(load_sweep_config(dir / "bad.json"), std::invalid_argument);
  EXPECT_THROW(load_sweep_config(dir / "missing.json"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Table, FormatRows) {
  SweepResultRow row;
  row.gate = GateKind::rx_m_half_pi;
  row.k = 2;
  row.alpha = 10.0;
  row.stats = {0.99, 1e-4, 40, 2e-3};
  row.wall_time_s = 1.23456;
  EXPECT_EQ(format_row(row), "rx,2,10,0.99,0.0001,0.002,40,1.235");
  row.stats = {std::nan(""), std::nan(""), 0, std::nan("")};
  row.error = "x";
  EXPECT_EQ(format_row(row), "rx,2,10,nan,nan,nan,0,1.235");
  SweepResult empty;
  EXPECT_EQ(format_table(empty), std::string(kTableHeader) + "\n");
}

TEST(Table, ReadBackAndErrors) {
  const auto dir = scratch("table");
  fs::create_directories(dir);
  SweepResult res;
  SweepResultRow a;
  a.gate = GateKind::sqrt_iswap;
  a.k = 3;
  a.alpha = 50.0;
  a.stats = {0.987654321, 1.5e-5, 4, 3.25e-4};
  SweepResultRow b = a;
  b.k = 0;
  b.stats = {std::nan(""), std::nan(""), 0, std::nan("")};
  b.error = "boom";
  res.rows = {a, b};
  const auto files = emit(res, SweepConfig{}, dir, "t");
  const auto rows = read_table(files.table);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].gate, GateKind::sqrt_iswap);
  EXPECT_EQ(rows[0].k, 3);
  EXPECT_DOUBLE_EQ(rows[0].stats.mean_fidelity, 0.987654321);
  EXPECT_DOUBLE_EQ(rows[0].stats.std_error, 1.5e-5);
  EXPECT_TRUE(rows[0].ok());
  EXPECT_FALSE(rows[1].ok());
  EXPECT_TRUE(std::isnan(rows[1].stats.mean_fidelity));

  std::ofstream(dir / "bad_header.csv") << "gate,k\n";
  EXPECT_THROW(read_table(dir / "bad_header.csv"), std::runtime_error);
  std::ofstream(dir / "short_row.csv") << kTableHeader << "\nrz,1,2\n";
  EXPECT_THROW(read_table(dir / "short_row.csv"), std::runtime_error);
  EXPECT_THROW(read_table(dir / "none.csv"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Emit, UnwritableLocation) {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(emit(SweepResult{}, SweepConfig{}, dir / "file" / "sub", "t"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Sweep, SingleQubitGridAndManifest) {
  const auto cfg = small_config();
  const auto res = run_parallel_single_qubit(GateKind::rz_m_half_pi, cfg);
  EXPECT_EQ(res.experiment, "run-parallel-1q");
  ASSERT_EQ(res.rows.size(), cfg.r_multiples.size() * cfg.alphas.size());
  for (const auto& r : res.rows) {
    EXPECT_TRUE(r.ok()) << r.error;
    EXPECT_EQ(r.stats.n_realizations, r.alpha == 0.0 ? 1 : cfg.n_realizations);
    EXPECT_GT(r.stats.mean_fidelity, 0.5);
    EXPECT_LE(r.stats.mean_fidelity, 1.0);
    // Copies at a pitch of r0 interact strongly; from 3·r0 on they barely do.
    if (r.k == 3) EXPECT_GT(r.stats.mean_fidelity, 0.99);
    EXPECT_GT(r.dt_used, 0.0);
  }
  EXPECT_EQ(res.rows[0].k, 1);
  EXPECT_EQ(res.rows[3].k, 3);
  EXPECT_EQ(res.rows[3].alpha, 10.0);

  const auto dir = scratch("grid");
  const auto files = emit(res, cfg, dir, "parallel_rz");
  const std::string table = slurp(files.table);
  EXPECT_EQ(table.substr(0, table.find('\n')), kTableHeader);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  const json m = json::parse(slurp(files.manifest));
  EXPECT_EQ(m.at("tool"), "ffsim");
  EXPECT_EQ(m.at("version"), kVersion);
  EXPECT_EQ(m.at("experiment"), "run-parallel-1q");
  EXPECT_EQ(m.at("master_seed"), cfg.master_seed());
  EXPECT_EQ(m.at("table_header"), kTableHeader);
  EXPECT_EQ(m.at("cells").size(), 4u);
  EXPECT_TRUE(m.at("failed_cells").empty());
  EXPECT_EQ(m.at("config").at("gate"), "rz");
  EXPECT_EQ(m.at("protocol").at("gate"), "rz");
  EXPECT_TRUE(m.at("protocol").contains("isolated_fidelity"));
  EXPECT_EQ(sweep_config_from_json(m.at("config")).r_multiples, cfg.r_multiples);
  fs::remove_all(dir);
}

TEST(Sweep, RerunIsIdenticalApartFromWallTime) {
  auto cfg = small_config();
  cfg.r_multiples = {2};
  const auto a = run_parallel_single_qubit(GateKind::rz_m_half_pi, cfg);
  cfg.threads = 3;
  const auto b = run_parallel_single_qubit(GateKind::rz_m_half_pi, cfg);
  EXPECT_EQ(without_wall_time(format_table(a)), without_wall_time(format_table(b)));
}

TEST(Sweep, SeedChangesNoisyCellsOnly) {
  auto cfg = small_config();
  cfg.r_multiples = {2};
  cfg.verify_convergence = false;
  const auto a = run_parallel_single_qubit(GateKind::rz_m_half_pi, cfg);
  cfg.experiment.noise.master_seed += 1;
  const auto b = run_parallel_single_qubit(GateKind::rz_m_half_pi, cfg);
  EXPECT_EQ(a.rows[0].stats.mean_fidelity, b.rows[0].stats.mean_fidelity);
  EXPECT_NE(a.rows[1].stats.mean_fidelity, b.rows[1].stats.mean_fidelity);
}

TEST(Sweep, BaselineRowsAreIndependentOfSeparation) {
  auto cfg = small_config();
  cfg.verify_convergence = false;
  const auto base = run_noninteracting_baseline(GateKind::rz_m_half_pi, cfg);
  EXPECT_EQ(base.experiment, "baseline");
  ASSERT_EQ(base.rows.size(), cfg.alphas.size());
  for (const auto& r : base.rows) EXPECT_EQ(r.k, 0);
  for (int k : {1, 4}) {
    const auto row = run_cells("baseline", cfg, {{k, 10.0, false}}).rows.at(0);
    EXPECT_EQ(row.stats.mean_fidelity, base.rows[1].stats.mean_fidelity);
  }
}

TEST(Sweep, FailedCellIsMarkedAndRunContinues) {
  auto cfg = small_config();
  cfg.r_multiples = {1};
  cfg.alphas = {10.0};
  cfg.experiment.propagation.convergence_tol = 1e-15;
  cfg.experiment.propagation.max_halvings = 1;
  const auto res = run_parallel_single_qubit(GateKind::rz_m_half_pi, cfg);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_FALSE(res.rows[0].ok());
  EXPECT_EQ(res.rows[0].stats.n_realizations, 0);
  EXPECT_TRUE(std::isnan(res.rows[0].stats.mean_fidelity));
  const json m = manifest(res, cfg);
  ASSERT_EQ(m.at("failed_cells").size(), 1u);
  EXPECT_NE(m.at("failed_cells")[0].at("error").get<std::string>().find("converge"), std::string::npos);
}

TEST(Sweep, EntryPointsCheckGateWidth) {
  EXPECT_THROW(run_parallel_single_qubit(GateKind::sqrt_iswap, small_config()), std::invalid_argument);
  auto bad = small_config();
  bad.alphas = {};
  EXPECT_THROW(run_parallel_single_qubit(GateKind::rz_m_half_pi, bad), std::invalid_argument);
}

TEST(Timestamp, Iso8601Utc) {
  const auto t = utc_timestamp();
  ASSERT_EQ(t.size(), 20u);
  EXPECT_EQ(t[4], '-');
  EXPECT_EQ(t[10], 'T');
  EXPECT_EQ(t.back(), 'Z');
}

}  // namespace
}  // namespace ffsim
