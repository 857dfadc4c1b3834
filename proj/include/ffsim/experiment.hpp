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

#ifndef FFSIM_EXPERIMENT_HPP
#define FFSIM_EXPERIMENT_HPP

#include <cstdint>
#include <vector>

#include "ffsim/fidelity.hpp"

namespace ffsim {

/// Noise band and seeding shared by every cell of a run.
struct NoiseSettings {
  double trace_dt = 1.0;    // ns; also sets f_max = 1/(2 trace_dt) unless f_max > 0
  double f_min = 0.0;       // GHz; 0 selects 1/(100 × longest gate duration)
  double f_max = 0.0;       // GHz
  int n_components = 96;
  bool common_mode = false;  // true: every site sees the same trace
  std::uint64_t master_seed = 20220509;

  void validate() const;
  NoiseSpec spec(double alpha) const;
};

/// Duration of the longest gate studied (the √iSWAP sequence), ns.
double longest_gate_duration(RampShape shape = RampShape::linear);

struct ExperimentSettings {
  DeviceParams device;
  PropagationSettings propagation;
  NoiseSettings noise;
  RampShape shape = RampShape::linear;
};

/// One gate copy ready for parallel execution: per-member programs, device
/// parameters at the gate's tunnel coupling and the virtual-Z frame that
/// best aligns the noiseless isolated copy with the target.
struct GateProtocol {
  GateKind kind = GateKind::rz_m_half_pi;
  DeviceParams params;
  std::vector<GateSchedule> members;
  FrameCorrection frame;
  double isolated_fidelity = 0.0;
  double isolated_leakage = 0.0;

  double duration() const;
  int width() const { return static_cast<int>(members.size()); }

  /// z gates keep the identity frame: their angle is the quantity under test.
  static GateProtocol prepare(GateKind kind, const ExperimentSettings& settings);
};

/// One (k, α) point. `interacting` false removes the coupling between the two
/// gate copies; a couple keeps its internal coupling.
struct CellSpec {
  int k = 2;
  double alpha = 0.0;
  bool interacting = true;
};

/// Bonds of two parallel copies: a single pair at k·r0 for one-qubit gates;
/// for couples (0,1) and (2,3) at r0 plus (1,2) at k·r0.
std::vector<Bond> parallel_bonds(const GateProtocol& g, const CellSpec& cell);

/// Noise stream key of a gate kind, shared by all cells so that realization r
/// sees the same trace shape at every k and α.
std::uint64_t gate_stream_key(GateKind kind);

struct VerifiedOutcome {
  RealizationOutcome outcome;
  double halving_change = 0.0;
  double dt_used = 0.0;
  int halvings = 0;
};

class ParallelExperiment {
 public:
  ParallelExperiment(GateProtocol protocol, ExperimentSettings settings);

  const GateProtocol& protocol() const { return protocol_; }
  const ExperimentSettings& settings() const { return settings_; }
  const ComplexOperator& target() const { return target_; }

  ArraySystem system(const CellSpec& cell, int realization) const;
  RealizationOutcome score(const SubspacePropagator& sim) const;
  RealizationOutcome run(const CellSpec& cell, int realization) const;
  /// Same as run, accepted only after step halving moves F by less than the
  /// convergence tolerance; throws ConvergenceError otherwise.
  VerifiedOutcome run_verified(const CellSpec& cell, int realization) const;

 private:
  GateProtocol protocol_;
  ExperimentSettings settings_;
  ComplexOperator target_;
  FrameCorrection frame_;
  std::vector<DeviceParams> site_params_;
};

}  // namespace ffsim

#endif  // FFSIM_EXPERIMENT_HPP
