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

#include "ffsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace ffsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Small counter-based generator: the k-th uniform of a stream is a pure
// function of (seed, k), so phases never depend on evaluation order.
double uniform01(std::uint64_t seed, std::uint64_t k) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("noise alpha must be >= 0");
  if (!(f_min > 0.0) || !(f_min < f_max)) throw std::invalid_argument("noise band requires 0 < f_min < f_max");
  if (n_components < 1) throw std::invalid_argument("noise needs at least one component");
}

double NoiseTrace::at(double t) const {
  if (samples.empty()) return 0.0;
  if (t < -1e-9 || t > duration() + 1e-9) {
    throw std::out_of_range("noise trace queried at t = " + std::to_string(t) + " ns beyond its span " +
                            std::to_string(duration()) + " ns");
  }
  const double x = std::clamp(t / dt, 0.0, static_cast<double>(samples.size() - 1));
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= samples.size()) return samples.back();
  const double w = x - static_cast<double>(i);
  return samples[i] + w * (samples[i + 1] - samples[i]);
}

std::uint64_t noise_stream(std::uint64_t gate_key, std::uint64_t qubit) {
  return splitmix64(splitmix64(gate_key) ^ (qubit * 0xd1b54a32d192ed03ULL));
}

NoiseTrace generate_trace(const NoiseSpec& spec, double duration, double dt, std::uint64_t realization,
                          std::uint64_t stream) {
  spec.validate();
  if (!(duration > 0.0) || !(dt > 0.0)) throw std::invalid_argument("trace duration and dt must be > 0");
  NoiseTrace tr;
  tr.dt = dt;
  tr.realization = realization;
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)) + 1;
  tr.samples.assign(n, 0.0);
  if (spec.alpha == 0.0) return tr;

  const int m = spec.n_components;
  const double span = std::log(spec.f_max / spec.f_min);
  const double log_ratio = m > 1 ? span / (m - 1) : span;
  const double amp = spec.alpha * std::sqrt(2.0 * log_ratio);
  const std::uint64_t seed = splitmix64(splitmix64(spec.master_seed) ^ stream) ^ splitmix64(~realization);

  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; k < m; ++k) {
    const double f = m > 1 ? spec.f_min * std::exp(log_ratio * k) : spec.f_min;
    const double theta = two_pi * uniform01(seed, static_cast<std::uint64_t>(k));
    // Rotate a phasor instead of calling cos per sample.
    const std::complex<double> step = std::polar(1.0, two_pi * f * dt);
    std::complex<double> z = std::polar(amp, theta);
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 256 == 0) z = std::polar(amp, two_pi * f * dt * static_cast<double>(i) + theta);
      tr.samples[i] += z.real();
      z *= step;
    }
  }
  return tr;
}

NoisySchedule::NoisySchedule(GateSchedule schedule) : schedule_(std::move(schedule)) {}

NoisySchedule::NoisySchedule(GateSchedule schedule, NoiseTrace trace)
    : schedule_(std::move(schedule)), trace_(std::move(trace)), has_noise_(true) {
  if (trace_.duration() + 1e-9 < schedule_.total_duration()) {
    throw std::invalid_argument("noise trace (" + std::to_string(trace_.duration()) + " ns) shorter than schedule " +
                                schedule_.label + " (" + std::to_string(schedule_.total_duration()) + " ns)");
  }
}

FieldSample NoisySchedule::sample(double t) const {
  FieldSample s = schedule_.sample(t);
  if (has_noise_) s.dEz += trace_.at(t);
  return s;
}

NoisySchedule apply_noise(const GateSchedule& s, const NoiseTrace& n) { return NoisySchedule(s, n); }

NoiseSpec default_band(double alpha, double gate_duration, double trace_dt, std::uint64_t seed) {
  NoiseSpec spec;
  spec.alpha = alpha;
  spec.f_min = 1.0 / (100.0 * gate_duration);
  spec.f_max = 1.0 / (2.0 * trace_dt);
  spec.master_seed = seed;
  return spec;
}

SpectrumCheck verify_spectrum(const NoiseSpec& spec, int n_samples, double dt, int n_traces, int bands_per_decade) {
  spec.validate();
  if (n_samples < 16 || n_traces < 2) throw std::invalid_argument("verify_spectrum needs >= 16 samples, >= 2 traces");
  const auto n = static_cast<std::size_t>(n_samples);
  const double duration = dt * static_cast<double>(n - 1);

  std::vector<double> window(n);
  double w2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
    w2 += window[i] * window[i];
  }

  Eigen::FFT<double> fft;
  std::vector<double> mean_power(n / 2 + 1, 0.0);
  std::vector<double> prev;
  double cross = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (int r = 0; r < n_traces; ++r) {
    auto tr = generate_trace(spec, duration, dt, static_cast<std::uint64_t>(r));
    tr.samples.resize(n);
    if (!prev.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        cross += prev[i] * tr.samples[i];
        norm_a += prev[i] * prev[i];
        norm_b += tr.samples[i] * tr.samples[i];
      }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = tr.samples[i] * window[i];
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, x);
    for (std::size_t m = 1; m < n / 2; ++m) mean_power[m] += 2.0 * std::norm(spectrum[m]) * dt / w2;
    prev = std::move(tr.samples);
  }
  for (auto& v : mean_power) v /= n_traces;

  SpectrumCheck out;
  out.pooled_cross_correlation = cross / std::sqrt(norm_a * norm_b);
  const double df = 1.0 / (dt * static_cast<double>(n));
  const double lo = std::log10(spec.f_min);
  const double hi = std::log10(std::min(spec.f_max, 0.5 / dt));
  const int n_bands = static_cast<int>(std::floor((hi - lo) * bands_per_decade));
  for (int b = 0; b < n_bands; ++b) {
    const double f0 = std::pow(10.0, lo + static_cast<double>(b) / bands_per_decade);
    const double f1 = std::pow(10.0, lo + static_cast<double>(b + 1) / bands_per_decade);
    double sum = 0.0;
    int count = 0;
    for (std::size_t m = 1; m < n / 2; ++m) {
      const double f = df * static_cast<double>(m);
      if (f >= f0 && f < f1) {
        sum += mean_power[m];
        ++count;
      }
    }
    if (count == 0) continue;
    out.band_frequency.push_back(std::sqrt(f0 * f1));
    out.band_power.push_back(sum / count);
  }
  const std::size_t k = out.band_frequency.size();
  if (k >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double x = std::log10(out.band_frequency[i]);
      const double y = std::log10(out.band_power[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return out;
}

}  // namespace ffsim
