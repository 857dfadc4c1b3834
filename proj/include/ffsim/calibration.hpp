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

#ifndef FFSIM_CALIBRATION_HPP
#define FFSIM_CALIBRATION_HPP

#include <stdexcept>

#include "ffsim/fidelity.hpp"

namespace ffsim {

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// arg(M₁₁/M₀₀) of the noiseless single-qubit propagator in the idle frame,
/// i.e. the angle θ of the z rotation exp(−iθσz/2) the schedule performs.
/// The schedule's tunnel coupling overrides p.tunnel_coupling.
double z_rotation_angle(const GateSchedule& s, const DeviceParams& p, const PropagationSettings& settings = {});

struct HoldCalibration {
  double hold = 0.0;          // ns
  double angle = 0.0;         // rad, achieved
  double fidelity = 0.0;      // against exp(−iθσz/2), idle frame
  int evaluations = 0;
};

/// Smallest hold T ∈ [0, 500 ns] such that the trapezoid `base` with its hold
/// replaced by T rotates by target_angle (mod 2π). Scans the unwrapped angle
/// and polishes the bracketed root with TOMS 748.
/// Throws std::invalid_argument for |target_angle| ≥ 2π and CalibrationError
/// when no root lies in the window.
HoldCalibration calibrate_hold(const GateSchedule& base, double target_angle, const DeviceParams& p,
                               const PropagationSettings& settings = {});

/// rz: the tabulated single-qubit z gate; sqrt_iswap: its corrective z step.
/// rx has no hold-controlled angle and is rejected.
HoldCalibration calibrate_hold(GateKind kind, double target_angle, const DeviceParams& p,
                               const PropagationSettings& settings = {});

}  // namespace ffsim

#endif  // FFSIM_CALIBRATION_HPP
