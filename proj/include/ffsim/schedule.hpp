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

#ifndef FFSIM_SCHEDULE_HPP
#define FFSIM_SCHEDULE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ffsim/device.hpp"
#include "json.hpp"

namespace ffsim {

/// Field detuning at which the electron sits at the interface between gates.
inline constexpr double kIdleField = 10000.0;  // V/m

enum class RampShape { linear, cosine };

struct DCSegment {
  enum class Kind { ramp, hold };

  Kind kind = Kind::hold;
  double start_value = kIdleField;  // V/m
  double end_value = kIdleField;    // V/m
  double duration = 0.0;            // ns
  RampShape shape = RampShape::linear;

  static DCSegment ramp(double from, double to, double duration, RampShape shape = RampShape::linear);
  static DCSegment hold(double value, double duration);

  /// Field at local time tau ∈ [0, duration].
  double value_at(double tau) const;
  /// d(field)/dt at local time tau, V/m/ns.
  double slope_at(double tau) const;
};

/// Resonant drive E_ac(t)·cos(2π f t + φ) with a triangular envelope.
struct ACDrive {
  double peak = 0.0;       // V/m
  double t_start = 0.0;    // ns
  double t_on = 0.0;       // ns
  double frequency = 0.0;  // GHz
  double phase = 0.0;      // rad

  double envelope(double t) const;
  double value(double t) const;
  bool active(double t) const { return t > t_start && t < t_start + t_on; }
};

struct FieldSample {
  double dEz;  // V/m
  double eac;  // V/m, instantaneous
};

/// Piecewise DC waveform plus an optional AC drive for one qubit.
struct GateSchedule {
  std::string label;
  std::vector<DCSegment> segments;
  std::optional<ACDrive> drive;
  double vt = 11.29;            // GHz, gate-specific tunnel coupling
  double quoted_adiabaticity = 0.0;  // K from the gate tables, metadata only

  double total_duration() const;
  FieldSample sample(double t) const;
  /// Segment boundaries and drive corners in increasing order, including 0
  /// and total_duration().
  std::vector<double> breakpoints() const;
  /// True when the field is constant and the drive is off on [t0, t1].
  bool is_static_on(double t0, double t1) const;
  /// Largest |d(field)/dt| of the DC waveform on [t0, t1], V/m/ns.
  double max_slope_on(double t0, double t1) const;
  /// Throws std::invalid_argument on malformed segments.
  void validate() const;
};

struct TrapezoidTiming {
  double idle = kIdleField;
  double intermediate = 1300.0;
  double clock = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double hold = 0.0;
  RampShape shape = RampShape::linear;
};

/// idle → intermediate (τ1) → clock (τ2) → hold (T) → mirrored back.
GateSchedule trapezoid(std::string label, const TrapezoidTiming& timing, double vt);

/// The trapezoid timing of a schedule built by trapezoid(); throws if the
/// schedule does not have that shape.
TrapezoidTiming trapezoid_timing(const GateSchedule& s);

/// Copy of a trapezoid schedule with a different clock-transition hold.
GateSchedule with_hold(const GateSchedule& s, double hold_ns);

GateSchedule idle_schedule(double duration_ns, double vt);

/// Concatenates schedules in time. At most one of them may carry a drive.
GateSchedule concat(const std::vector<GateSchedule>& parts, std::string label);

inline constexpr double kMinusHalfPi = -1.5707963267948966;

GateSchedule rz_schedule(double angle = kMinusHalfPi, RampShape shape = RampShape::linear);

/// `device` supplies everything but Vt; the drive frequency is the flip-flop
/// transition frequency at the clock-transition field.
GateSchedule rx_schedule(const DeviceParams& device, double angle = kMinusHalfPi,
                         RampShape shape = RampShape::linear);

struct SqrtIswapSequence {
  GateSchedule joint;       // applied to both qubits of the couple
  GateSchedule corrective;  // applied to one qubit while the partner idles
  double vt = 11.58;

  double total_duration() const { return joint.total_duration() + 2.0 * corrective.total_duration(); }
  /// Per-member programs: member 0 corrects first, member 1 second.
  GateSchedule member_program(int member) const;
};

SqrtIswapSequence sqrt_iswap_schedule(RampShape shape = RampShape::linear);

/// Landau-Zener style estimate min_t 2π ε0(t) / |dθ/dt| on the orbital
/// two-level system, θ the mixing angle. +∞ when nothing ramps.
double estimate_adiabaticity(const GateSchedule& s, const DeviceParams& device);

nlohmann::json to_json(const GateSchedule& s);
GateSchedule schedule_from_json(const nlohmann::json& j);

}  // namespace ffsim

#endif  // FFSIM_SCHEDULE_HPP
