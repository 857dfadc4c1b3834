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

#ifndef FFSIM_NOISE_HPP
#define FFSIM_NOISE_HPP

#include <cstdint>
#include <vector>

#include "ffsim/schedule.hpp"

namespace ffsim {

/// Band-limited 1/f noise on the control field: one-sided PSD α²/f on
/// [f_min, f_max].
struct NoiseSpec {
  double alpha = 0.0;      // V/m
  double f_min = 1e-5;     // GHz
  double f_max = 1.0;      // GHz
  int n_components = 96;
  std::uint64_t master_seed = 20220509;

  void validate() const;
};

/// One realization δE(t) sampled on a uniform grid.
struct NoiseTrace {
  double dt = 0.0;                 // ns
  std::vector<double> samples;     // V/m, samples[i] = δE(i·dt)
  std::uint64_t realization = 0;

  double duration() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }
  /// Linear interpolation; throws std::out_of_range beyond the covered span.
  double at(double t) const;
};

/// Stream key that keeps realizations of different qubits and gates apart.
std::uint64_t noise_stream(std::uint64_t gate_key, std::uint64_t qubit);

/// δE(t) = Σ a_k cos(2π f_k t + θ_k): f_k log-spaced on [f_min, f_max],
/// a_k = α·sqrt(2 ln(f_{k+1}/f_k)), θ_k uniform. The phases depend only on
/// (spec.master_seed, stream, realization).
NoiseTrace generate_trace(const NoiseSpec& spec, double duration, double dt, std::uint64_t realization,
                          std::uint64_t stream = 0);

/// Schedule with the trace added to the DC field. The AC amplitude is left
/// untouched.
class NoisySchedule {
 public:
  NoisySchedule() = default;
  explicit NoisySchedule(GateSchedule schedule);
  NoisySchedule(GateSchedule schedule, NoiseTrace trace);

  FieldSample sample(double t) const;
  const GateSchedule& schedule() const { return schedule_; }
  bool noisy() const { return has_noise_; }
  const NoiseTrace& trace() const { return trace_; }
  double total_duration() const { return schedule_.total_duration(); }

 private:
  GateSchedule schedule_;
  NoiseTrace trace_;
  bool has_noise_ = false;
};

/// Throws std::invalid_argument when the trace is shorter than the schedule.
NoisySchedule apply_noise(const GateSchedule& s, const NoiseTrace& n);

/// Default band for a gate: f_min = 1/(100·duration), f_max = 1/(2·dt).
NoiseSpec default_band(double alpha, double gate_duration, double trace_dt, std::uint64_t seed);

struct SpectrumCheck {
  std::vector<double> band_frequency;  // GHz, geometric band centres
  std::vector<double> band_power;      // mean one-sided periodogram, (V/m)²/GHz
  double slope = 0.0;                  // log-log fit over the bands
  double pooled_cross_correlation = 0.0;
};

/// Ensemble-averaged periodogram of `n_traces` realizations, band-averaged in
/// `bands_per_decade` log bins inside [f_min, f_max], with a least-squares
/// log-log slope. Also reports the pooled correlation between consecutive
/// realizations.
SpectrumCheck verify_spectrum(const NoiseSpec& spec, int n_samples, double dt, int n_traces,
                              int bands_per_decade = 8);

}  // namespace ffsim

#endif  // FFSIM_NOISE_HPP
