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

#include "ffsim/experiment.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffsim {

void NoiseSettings::validate() const {
  if (!(trace_dt > 0.0)) throw std::invalid_argument("noise trace_dt must be > 0");
  if (f_min < 0.0 || f_max < 0.0) throw std::invalid_argument("noise band edges must be >= 0");
  if (n_components < 1) throw std::invalid_argument("noise n_components must be >= 1");
}

NoiseSpec NoiseSettings::spec(double alpha) const {
  validate();
  NoiseSpec s = default_band(alpha, longest_gate_duration(), trace_dt, master_seed);
  if (f_min > 0.0) s.f_min = f_min;
  if (f_max > 0.0) s.f_max = f_max;
  s.n_components = n_components;
  s.validate();
  return s;
}

double longest_gate_duration(RampShape shape) {
  return std::max({rz_schedule(kMinusHalfPi, shape).total_duration(),
                   rx_schedule(DeviceParams{}, kMinusHalfPi, shape).total_duration(),
                   sqrt_iswap_schedule(shape).total_duration()});
}

double GateProtocol::duration() const {
  double d = 0.0;
  for (const auto& m : members) d = std::max(d, m.total_duration());
  return d;
}

namespace {

ArraySystem isolated_system(const GateProtocol& g) {
  ArraySystem sys;
  for (const auto& m : g.members) {
    sys.params.push_back(g.params);
    sys.fields.emplace_back(m);
  }
  if (g.width() == 2) sys.bonds = {{0, 1, coupling_strength(g.params, g.params.pitch)}};
  return sys;
}

}  // namespace

GateProtocol GateProtocol::prepare(GateKind kind, const ExperimentSettings& settings) {
  GateProtocol g;
  g.kind = kind;
  switch (kind) {
    case GateKind::rz_m_half_pi:
      g.members = {rz_schedule(kMinusHalfPi, settings.shape)};
      break;
    case GateKind::rx_m_half_pi:
      g.members = {rx_schedule(settings.device, kMinusHalfPi, settings.shape)};
      break;
    case GateKind::sqrt_iswap: {
      const auto seq = sqrt_iswap_schedule(settings.shape);
      g.members = {seq.member_program(0), seq.member_program(1)};
      break;
    }
  }
  g.params = settings.device.with_tunnel_coupling(g.members.front().vt);

  const ArraySystem sys = isolated_system(g);
  const auto sim = evolve(sys, settings.propagation);
  const Matrix m = to_idle_frame(sim.matrix, sys.params, g.duration());
  const auto target = ideal_gate(kind, 1);
  if (kind == GateKind::rz_m_half_pi) {
    g.frame = FrameCorrection::identity(1);
    g.isolated_fidelity = entanglement_fidelity(m, target);
  } else {
    const auto fit = fit_frame_correction(m, target);
    g.frame = fit.frame;
    g.isolated_fidelity = fit.fidelity;
  }
  g.isolated_leakage = sim.mean_leakage();
  return g;
}

std::vector<Bond> parallel_bonds(const GateProtocol& g, const CellSpec& cell) {
  if (cell.k < 1) throw std::invalid_argument("separation multiple k must be >= 1");
  const double r0 = g.params.pitch;
  const double between = cell.interacting ? coupling_strength(g.params, cell.k * r0) : 0.0;
  if (g.width() == 1) return {{0, 1, between}};
  const double inner = coupling_strength(g.params, r0);
  return {{0, 1, inner}, {2, 3, inner}, {1, 2, between}};
}

std::uint64_t gate_stream_key(GateKind kind) { return 0x5eed0000ULL + static_cast<std::uint64_t>(kind); }

ParallelExperiment::ParallelExperiment(GateProtocol protocol, ExperimentSettings settings)
    : protocol_(std::move(protocol)),
      settings_(std::move(settings)),
      target_(ideal_gate(protocol_.kind, 2)),
      frame_(protocol_.frame.repeated(2)),
      site_params_(2 * protocol_.width(), protocol_.params) {
  settings_.propagation.validate();
  settings_.noise.validate();
}

ArraySystem ParallelExperiment::system(const CellSpec& cell, int realization) const {
  if (cell.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (realization < 0) throw std::invalid_argument("realization must be >= 0");
  ArraySystem sys;
  sys.params = site_params_;
  const int n = static_cast<int>(site_params_.size());
  const double duration = protocol_.duration();
  const NoiseSpec spec = settings_.noise.spec(cell.alpha);
  for (int s = 0; s < n; ++s) {
    const GateSchedule& program = protocol_.members[s % protocol_.width()];
    if (cell.alpha == 0.0) {
      sys.fields.emplace_back(program);
    } else {
      sys.fields.emplace_back(program, generate_trace(spec, duration, settings_.noise.trace_dt,
                                                      static_cast<std::uint64_t>(realization),
                                                      noise_stream(gate_stream_key(protocol_.kind), settings_.noise.common_mode ? 0 : s)));
    }
  }
  sys.bonds = parallel_bonds(protocol_, cell);
  return sys;
}

RealizationOutcome ParallelExperiment::score(const SubspacePropagator& sim) const {
  const Matrix m = frame_.apply(to_idle_frame(sim.matrix, site_params_, protocol_.duration()));
  return {entanglement_fidelity(m, target_), sim.mean_leakage()};
}

RealizationOutcome ParallelExperiment::run(const CellSpec& cell, int realization) const {
  return score(evolve(system(cell, realization), settings_.propagation));
}

VerifiedOutcome ParallelExperiment::run_verified(const CellSpec& cell, int realization) const {
  const auto v = evolve_verified(system(cell, realization), settings_.propagation,
                                 [this](const SubspacePropagator& s) { return score(s).fidelity; });
  return {score(v.result), v.halving_change, v.dt_used, v.halvings};
}

}  // namespace ffsim
