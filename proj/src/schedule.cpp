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

#include "ffsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ffsim {

DCSegment DCSegment::ramp(double from, double to, double duration, RampShape shape) {
  return {Kind::ramp, from, to, duration, shape};
}

DCSegment DCSegment::hold(double value, double duration) {
  return {Kind::hold, value, value, duration, RampShape::linear};
}

double DCSegment::value_at(double tau) const {
  if (kind == Kind::hold || duration <= 0.0) return end_value;
  const double u = std::clamp(tau / duration, 0.0, 1.0);
  const double w = shape == RampShape::linear ? u : 0.5 * (1.0 - std::cos(std::numbers::pi * u));
  return start_value + (end_value - start_value) * w;
}

double DCSegment::slope_at(double tau) const {
  if (kind == Kind::hold || duration <= 0.0) return 0.0;
  const double u = std::clamp(tau / duration, 0.0, 1.0);
  const double dw = shape == RampShape::linear ? 1.0 : 0.5 * std::numbers::pi * std::sin(std::numbers::pi * u);
  return (end_value - start_value) * dw / duration;
}

double ACDrive::envelope(double t) const {
  if (t_on <= 0.0 || t <= t_start || t >= t_start + t_on) return 0.0;
  const double half = 0.5 * t_on;
  const double x = t - t_start;
  return peak * (x <= half ? x / half : (t_on - x) / half);
}

double ACDrive::value(double t) const {
  const double env = envelope(t);
  if (env == 0.0) return 0.0;
  return env * std::cos(2.0 * std::numbers::pi * frequency * t + phase);
}

double GateSchedule::total_duration() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration;
  return total;
}

FieldSample GateSchedule::sample(double t) const {
  FieldSample out{kIdleField, 0.0};
  if (t < 0.0) return out;
  double start = 0.0;
  bool inside = false;
  for (const auto& seg : segments) {
    if (t <= start + seg.duration) {
      out.dEz = seg.value_at(t - start);
      inside = true;
      break;
    }
    start += seg.duration;
  }
  if (!inside) return out;
  if (drive) out.eac = drive->value(t);
  return out;
}

std::vector<double> GateSchedule::breakpoints() const {
  std::vector<double> pts{0.0};
  double t = 0.0;
  for (const auto& seg : segments) {
    t += seg.duration;
    pts.push_back(t);
  }
  if (drive && drive->t_on > 0.0) {
    pts.push_back(drive->t_start);
    pts.push_back(drive->t_start + 0.5 * drive->t_on);
    pts.push_back(drive->t_start + drive->t_on);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            pts.end());
  return pts;
}

bool GateSchedule::is_static_on(double t0, double t1) const {
  if (drive && drive->t_on > 0.0) {
    const double d0 = drive->t_start;
    const double d1 = drive->t_start + drive->t_on;
    if (t0 < d1 && t1 > d0) return false;
  }
  double start = 0.0;
  for (const auto& seg : segments) {
    const double end = start + seg.duration;
    if (t0 < end && t1 > start && seg.start_value != seg.end_value) return false;
    start = end;
  }
  return true;
}

double GateSchedule::max_slope_on(double t0, double t1) const {
  double out = 0.0;
  double start = 0.0;
  for (const auto& seg : segments) {
    const double end = start + seg.duration;
    if (t0 < end && t1 > start && seg.kind == DCSegment::Kind::ramp) {
      const double a = std::max(t0, start) - start;
      const double b = std::min(t1, end) - start;
      for (double tau : {a, 0.5 * (a + b), b}) out = std::max(out, std::abs(seg.slope_at(tau)));
    }
    start = end;
  }
  return out;
}

void GateSchedule::validate() const {
  for (const auto& seg : segments) {
    if (!(seg.duration >= 0.0)) throw std::invalid_argument("segment duration must be >= 0 in " + label);
    if (seg.kind == DCSegment::Kind::hold && seg.start_value != seg.end_value) {
      throw std::invalid_argument("hold segment with differing endpoints in " + label);
    }
  }
  if (!segments.empty()) {
    if (segments.front().start_value != kIdleField || segments.back().end_value != kIdleField) {
      throw std::invalid_argument("schedule " + label + " must start and end at the idle field");
    }
  }
  if (drive && (drive->t_on < 0.0 || drive->t_start < 0.0)) {
    throw std::invalid_argument("drive window must be non-negative in " + label);
  }
}

GateSchedule trapezoid(std::string label, const TrapezoidTiming& tm, double vt) {
  GateSchedule s;
  s.label = std::move(label);
  s.vt = vt;
  s.segments = {
      DCSegment::ramp(tm.idle, tm.intermediate, tm.tau1, tm.shape),
      DCSegment::ramp(tm.intermediate, tm.clock, tm.tau2, tm.shape),
      DCSegment::hold(tm.clock, tm.hold),
      DCSegment::ramp(tm.clock, tm.intermediate, tm.tau2, tm.shape),
      DCSegment::ramp(tm.intermediate, tm.idle, tm.tau1, tm.shape),
  };
  s.validate();
  return s;
}

TrapezoidTiming trapezoid_timing(const GateSchedule& s) {
  if (s.segments.size() != 5 || s.segments[2].kind != DCSegment::Kind::hold) {
    throw std::invalid_argument("schedule " + s.label + " is not a trapezoid");
  }
  TrapezoidTiming tm;
  tm.idle = s.segments[0].start_value;
  tm.intermediate = s.segments[0].end_value;
  tm.clock = s.segments[2].start_value;
  tm.tau1 = s.segments[0].duration;
  tm.tau2 = s.segments[1].duration;
  tm.hold = s.segments[2].duration;
  tm.shape = s.segments[0].shape;
  return tm;
}

GateSchedule with_hold(const GateSchedule& s, double hold_ns) {
  if (!(hold_ns >= 0.0)) throw std::invalid_argument("hold duration must be >= 0");
  GateSchedule out = s;
  trapezoid_timing(s);  // shape check
  const double shift = hold_ns - out.segments[2].duration;
  out.segments[2].duration = hold_ns;
  if (out.drive && out.drive->t_start >= s.segments[0].duration + s.segments[1].duration + s.segments[2].duration) {
    out.drive->t_start += shift;
  }
  return out;
}

GateSchedule idle_schedule(double duration_ns, double vt) {
  GateSchedule s;
  s.label = "idle";
  s.vt = vt;
  s.segments = {DCSegment::hold(kIdleField, duration_ns)};
  return s;
}

GateSchedule concat(const std::vector<GateSchedule>& parts, std::string label) {
  if (parts.empty()) throw std::invalid_argument("concat of no schedules");
  GateSchedule out;
  out.label = std::move(label);
  out.vt = parts.front().vt;
  double offset = 0.0;
  for (const auto& p : parts) {
    if (p.vt != out.vt) throw std::invalid_argument("concat requires a common tunnel coupling");
    out.segments.insert(out.segments.end(), p.segments.begin(), p.segments.end());
    if (p.drive) {
      if (out.drive) throw std::invalid_argument("concat supports at most one driven part");
      out.drive = *p.drive;
      out.drive->t_start += offset;
      // cos(2π f t + φ) keeps its phase relative to the part's own clock.
      out.drive->phase -= 2.0 * std::numbers::pi * p.drive->frequency * offset;
    }
    offset += p.total_duration();
    out.quoted_adiabaticity = std::max(out.quoted_adiabaticity, p.quoted_adiabaticity);
  }
  out.validate();
  return out;
}

GateSchedule rz_schedule(double angle, RampShape shape) {
  if (std::abs(angle - kMinusHalfPi) > 1e-12) {
    throw std::invalid_argument("rz_schedule carries tabulated timings for -pi/2 only; use calibrate_hold");
  }
  TrapezoidTiming tm{kIdleField, 1300.0, 290.0, 2.0, 16.0, 0.08, shape};
  auto s = trapezoid("rz(-pi/2)", tm, 11.29);
  s.quoted_adiabaticity = 20.0;
  return s;
}

GateSchedule rx_schedule(const DeviceParams& device, double angle, RampShape shape) {
  if (std::abs(angle - kMinusHalfPi) > 1e-12) {
    throw std::invalid_argument("rx_schedule carries tabulated timings for -pi/2 only");
  }
  constexpr double kVt = 11.5;
  TrapezoidTiming tm{kIdleField, 1300.0, 0.0, 2.0, 4.0, 90.5, shape};
  auto s = trapezoid("rx(-pi/2)", tm, kVt);
  ACDrive drive;
  drive.peak = 180.0;
  drive.t_start = 25.0;
  drive.t_on = 40.0;
  drive.frequency = transition_frequency(device.with_tunnel_coupling(kVt), tm.clock);
  drive.phase = 0.0;
  s.drive = drive;
  s.quoted_adiabaticity = 20.0;
  return s;
}

GateSchedule SqrtIswapSequence::member_program(int member) const {
  const auto idle = idle_schedule(corrective.total_duration(), vt);
  if (member == 0) return concat({joint, corrective, idle}, "sqrt_iswap/member0");
  if (member == 1) return concat({joint, idle, corrective}, "sqrt_iswap/member1");
  throw std::invalid_argument("couple member must be 0 or 1");
}

SqrtIswapSequence sqrt_iswap_schedule(RampShape shape) {
  constexpr double kVt = 11.58;
  SqrtIswapSequence seq;
  seq.vt = kVt;
  seq.joint = trapezoid("sqrt_iswap/joint", {kIdleField, 1300.0, 0.0, 1.3, 195.0, 2.0, shape}, kVt);
  seq.joint.quoted_adiabaticity = 20.0;
  seq.corrective = trapezoid("sqrt_iswap/corrective_rz", {kIdleField, 1300.0, 0.0, 2.0, 4.0, 4.5, shape}, kVt);
  seq.corrective.quoted_adiabaticity = 33.0;
  return seq;
}

double estimate_adiabaticity(const GateSchedule& s, const DeviceParams& device) {
  const DeviceParams p = device.with_tunnel_coupling(s.vt);
  const double beta = p.dipole_frequency_per_field();
  double k_min = std::numeric_limits<double>::infinity();
  for (const auto& seg : s.segments) {
    if (seg.kind == DCSegment::Kind::hold || seg.start_value == seg.end_value || seg.duration <= 0.0) continue;
    constexpr int kSamples = 2001;
    for (int i = 0; i < kSamples; ++i) {
      const double tau = seg.duration * i / (kSamples - 1);
      const double rate = std::abs(seg.slope_at(tau));
      if (rate == 0.0) continue;
      const double eps = orbital_splitting(p, seg.value_at(tau));
      // |dθ/dt| = Vt β |dE/dt| / ε0².
      const double theta_dot = p.tunnel_coupling * beta * rate / (eps * eps);
      k_min = std::min(k_min, 2.0 * std::numbers::pi * eps / theta_dot);
    }
  }
  return k_min;
}

namespace {
const char* shape_name(RampShape s) { return s == RampShape::linear ? "linear" : "cosine"; }
RampShape shape_from(const std::string& s) {
  if (s == "linear") return RampShape::linear;
  if (s == "cosine") return RampShape::cosine;
  throw std::invalid_argument("unknown ramp shape " + s);
}
}  // namespace

nlohmann::json to_json(const GateSchedule& s) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& seg : s.segments) {
    segs.push_back({{"kind", seg.kind == DCSegment::Kind::ramp ? "ramp" : "hold"},
                    {"start", seg.start_value},
                    {"end", seg.end_value},
                    {"duration_ns", seg.duration},
                    {"shape", shape_name(seg.shape)}});
  }
  nlohmann::json j{{"label", s.label},
                   {"vt_ghz", s.vt},
                   {"quoted_adiabaticity", s.quoted_adiabaticity},
                   {"total_duration_ns", s.total_duration()},
                   {"segments", segs}};
  if (s.drive) {
    j["drive"] = {{"peak", s.drive->peak},
                  {"t_start_ns", s.drive->t_start},
                  {"t_on_ns", s.drive->t_on},
                  {"frequency_ghz", s.drive->frequency},
                  {"phase", s.drive->phase},
                  {"envelope", "triangular"}};
  } else {
    j["drive"] = nullptr;
  }
  return j;
}

GateSchedule schedule_from_json(const nlohmann::json& j) {
  GateSchedule s;
  s.label = j.at("label").get<std::string>();
  s.vt = j.at("vt_ghz").get<double>();
  s.quoted_adiabaticity = j.value("quoted_adiabaticity", 0.0);
  for (const auto& seg : j.at("segments")) {
    DCSegment d;
    d.kind = seg.at("kind").get<std::string>() == "ramp" ? DCSegment::Kind::ramp : DCSegment::Kind::hold;
    d.start_value = seg.at("start").get<double>();
    d.end_value = seg.at("end").get<double>();
    d.duration = seg.at("duration_ns").get<double>();
    d.shape = shape_from(seg.value("shape", "linear"));
    s.segments.push_back(d);
  }
  if (j.contains("drive") && !j["drive"].is_null()) {
    const auto& d = j["drive"];
    s.drive = ACDrive{d.at("peak").get<double>(), d.at("t_start_ns").get<double>(), d.at("t_on_ns").get<double>(),
                      d.at("frequency_ghz").get<double>(), d.value("phase", 0.0)};
  }
  s.validate();
  return s;
}

}  // namespace ffsim
