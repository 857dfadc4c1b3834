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

#include "ffsim/calibration.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

namespace ffsim {

namespace {

constexpr double kWindow = 500.0;  // ns
constexpr double kScanStep = 1.0;  // ns

Matrix idle_frame_single(const GateSchedule& s, const DeviceParams& p, const PropagationSettings& settings) {
  ArraySystem sys;
  sys.params = {p.with_tunnel_coupling(s.vt)};
  sys.fields = {NoisySchedule(s)};
  return to_idle_frame(evolve(sys, settings).matrix, sys.params, s.total_duration());
}

ComplexOperator z_rotation(double theta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -0.5 * theta);
  m(1, 1) = std::polar(1.0, 0.5 * theta);
  return ComplexOperator(m);
}

}  // namespace

double z_rotation_angle(const GateSchedule& s, const DeviceParams& p, const PropagationSettings& settings) {
  const Matrix m = idle_frame_single(s, p, settings);
  return std::arg(m(1, 1) / m(0, 0));
}

HoldCalibration calibrate_hold(const GateSchedule& base, double target_angle, const DeviceParams& p,
                               const PropagationSettings& settings) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (!(std::abs(target_angle) < two_pi)) throw std::invalid_argument("target_angle must lie in (-2pi, 2pi)");
  trapezoid_timing(base);  // rejects non-trapezoid schedules

  int evaluations = 0;
  auto angle_at = [&](double hold) {
    ++evaluations;
    return z_rotation_angle(with_hold(base, hold), p, settings);
  };
  auto finish = [&](double hold) {
    const Matrix m = idle_frame_single(with_hold(base, hold), p, settings);
    return HoldCalibration{hold, std::arg(m(1, 1) / m(0, 0)), entanglement_fidelity(m, z_rotation(target_angle)),
                           evaluations};
  };

  // u(T) = unwrapped angle − target; a root is any crossing of a multiple of 2π.
  double t_prev = 0.0;
  double u_prev = std::remainder(angle_at(0.0) - target_angle, two_pi);
  if (u_prev == 0.0) return finish(0.0);
  for (double t = kScanStep; t <= kWindow + 1e-9; t += kScanStep) {
    const double u = u_prev + std::remainder(angle_at(t) - target_angle - u_prev, two_pi);
    const double m_lo = std::floor(std::min(u, u_prev) / two_pi);
    const double m_hi = std::floor(std::max(u, u_prev) / two_pi);
    if (m_lo != m_hi || u == m_hi * two_pi) {
      const double level = m_hi * two_pi;
      const double ref = u_prev;
      auto g = [&](double hold) {
        return ref + std::remainder(angle_at(hold) - target_angle - ref, two_pi) - level;
      };
      boost::uintmax_t iters = 60;
      const auto tol = boost::math::tools::eps_tolerance<double>(40);
      const auto root = boost::math::tools::toms748_solve(g, t_prev, t, u_prev - level, u - level, tol, iters);
      return finish(0.5 * (root.first + root.second));
    }
    t_prev = t;
    u_prev = u;
  }
  throw CalibrationError("no hold in [0, 500] ns reaches the requested angle");
}

HoldCalibration calibrate_hold(GateKind kind, double target_angle, const DeviceParams& p,
                               const PropagationSettings& settings) {
  switch (kind) {
    case GateKind::rz_m_half_pi: return calibrate_hold(rz_schedule(), target_angle, p, settings);
    case GateKind::sqrt_iswap: return calibrate_hold(sqrt_iswap_schedule().corrective, target_angle, p, settings);
    case GateKind::rx_m_half_pi: break;
  }
  throw std::invalid_argument("hold calibration applies to z rotations only");
}

}  // namespace ffsim
