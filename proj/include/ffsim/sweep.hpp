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

#ifndef FFSIM_SWEEP_HPP
#define FFSIM_SWEEP_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ffsim/experiment.hpp"
#include "json.hpp"

namespace ffsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kTableHeader =
    "gate,k,alpha,mean_fidelity,std_error,mean_leakage,n_realizations,wall_time_s";

struct SweepConfig {
  GateKind gate = GateKind::rz_m_half_pi;
  std::vector<int> r_multiples{1, 2, 3, 4};
  std::vector<double> alphas{1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0};  // V/m
  int n_realizations = 40;
  int threads = 0;  // 0: hardware concurrency
  /// Step-halving check on realization 0 of every cell. The remaining
  /// realizations run at the coarser step of the accepted pair.
  bool verify_convergence = true;
  std::string output_dir = "out";
  ExperimentSettings experiment;

  std::uint64_t master_seed() const { return experiment.noise.master_seed; }
  int thread_count() const;
  /// Throws std::invalid_argument on empty or out-of-range grids.
  void validate() const;
};

/// Unknown keys are rejected; missing keys keep the values of `base`.
SweepConfig sweep_config_from_json(const nlohmann::json& j, SweepConfig base = {});
nlohmann::json to_json(const SweepConfig& cfg);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// k = 0 marks a baseline row (no inter-copy interaction). A failed cell keeps
/// its error text and reports NaN statistics.
struct SweepResultRow {
  GateKind gate = GateKind::rz_m_half_pi;
  int k = 0;
  double alpha = 0.0;
  FidelityResult stats;
  double wall_time_s = 0.0;
  double halving_change = 0.0;
  double dt_used = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  std::string experiment;  // run-parallel-1q, run-parallel-2q, baseline
  std::vector<SweepResultRow> rows;
  nlohmann::json protocol;  // gate-level facts for the manifest
  std::string started_utc;
  std::string finished_utc;
};

SweepResult run_parallel_single_qubit(GateKind gate, const SweepConfig& cfg);
SweepResult run_parallel_two_qubit(const SweepConfig& cfg);
SweepResult run_noninteracting_baseline(GateKind gate, const SweepConfig& cfg);

/// Sweep over explicit cells; shared by the entry points above.
SweepResult run_cells(const std::string& experiment, const SweepConfig& cfg, const std::vector<CellSpec>& cells);

std::string format_row(const SweepResultRow& row);
std::string format_table(const SweepResult& result);
nlohmann::json manifest(const SweepResult& result, const SweepConfig& cfg);

struct EmittedFiles {
  std::filesystem::path table;
  std::filesystem::path manifest;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.manifest.json, creating `dir`.
/// Throws std::runtime_error when the files cannot be written.
EmittedFiles emit(const SweepResult& result, const SweepConfig& cfg, const std::filesystem::path& dir,
                  const std::string& stem);

/// Reads a table written by emit; error rows come back with NaN fields.
std::vector<SweepResultRow> read_table(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace ffsim

#endif  // FFSIM_SWEEP_HPP
