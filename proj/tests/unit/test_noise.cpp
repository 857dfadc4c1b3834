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
#include <complex>
#include <numeric>

#include "ffsim/noise.hpp"

namespace ffsim {
namespace {

NoiseSpec band(double alpha, double f_min = 1e-3, double f_max = 0.5) {
  NoiseSpec s;
  s.alpha = alpha;
  s.f_min = f_min;
  s.f_max = f_max;
  return s;
}

TEST(NoiseSpec, Validation) {
  EXPECT_NO_THROW(band(1.0).validate());
  EXPECT_THROW(band(-1.0).validate(), std::invalid_argument);
  EXPECT_THROW(band(1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(band(1.0, 0.5, 0.5).validate(), std::invalid_argument);
  auto s = band(1.0);
  s.n_components = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(GenerateTrace, ZeroAlphaIsSilent) {
  const auto tr = generate_trace(band(0.0), 100.0, 1.0, 3);
  EXPECT_EQ(tr.samples.size(), 101u);
  for (double v : tr.samples) EXPECT_EQ(v, 0.0);
}

TEST(GenerateTrace, Deterministic) {
  const auto a = generate_trace(band(10.0), 50.0, 0.5, 7, 3);
  const auto b = generate_trace(band(10.0), 50.0, 0.5, 7, 3);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, generate_trace(band(10.0), 50.0, 0.5, 8, 3).samples);
  EXPECT_NE(a.samples, generate_trace(band(10.0), 50.0, 0.5, 7, 4).samples);
  auto reseeded = band(10.0);
  reseeded.master_seed += 1;
  EXPECT_NE(a.samples, generate_trace(reseeded, 50.0, 0.5, 7, 3).samples);
}

TEST(GenerateTrace, CoversDuration) {
  const auto tr = generate_trace(band(1.0), 36.08, 1.0, 0);
  EXPECT_EQ(tr.samples.size(), 38u);
  EXPECT_GE(tr.duration(), 36.08);
  EXPECT_EQ(generate_trace(band(1.0), 10.0, 1.0, 0).samples.size(), 11u);
  EXPECT_THROW(generate_trace(band(1.0), 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(generate_trace(band(1.0), 10.0, 0.0, 0), std::invalid_argument);
}

TEST(GenerateTrace, SinusoidSumOracle) {
  NoiseSpec s = band(3.0);
  s.n_components = 1;
  const auto tr = generate_trace(s, 20.0, 0.25, 5);
  const double amp = 3.0 * std::sqrt(2.0 * std::log(s.f_max / s.f_min));
  const double theta = std::acos(std::clamp(tr.samples[0] / amp, -1.0, 1.0));
  // One component at f_min: either sign of the phase reproduces sample 0.
  double best = 1e9;
  for (double th : {theta, -theta}) {
    double err = 0.0;
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      err = std::max(err, std::abs(tr.samples[i] - amp * std::cos(2.0 * M_PI * s.f_min * 0.25 * i + th)));
    }
    best = std::min(best, err);
  }
  EXPECT_LT(best, 1e-9);
}

TEST(GenerateTrace, VarianceScalesAsAlphaSquared) {
  std::vector<double> var;
  for (double alpha : {1.0, 10.0, 100.0}) {
    double sum = 0.0;
    int count = 0;
    for (int r = 0; r < 200; ++r) {
      const auto tr = generate_trace(band(alpha), 400.0, 1.0, r);
      for (double v : tr.samples) {
        sum += v * v;
        ++count;
      }
    }
    var.push_back(sum / count);
  }
  EXPECT_NEAR(var[1] / var[0], 100.0, 1.0);
  EXPECT_NEAR(var[2] / var[0], 10000.0, 100.0);
}

TEST(GenerateTrace, EnsembleVarianceMatchesBandIntegral) {
  const auto s = band(5.0);
  double sum = 0.0;
  int count = 0;
  for (int r = 0; r < 4000; ++r) {
    const auto tr = generate_trace(s, 10.0, 1.0, r);
    sum += tr.samples[3] * tr.samples[3];
    ++count;
  }
  const double m = s.n_components;
  const double want = 25.0 * std::log(s.f_max / s.f_min) * m / (m - 1.0);
  EXPECT_NEAR(sum / count / want, 1.0, 0.06);
}

TEST(GenerateTrace, RealizationsUncorrelated) {
  const auto s = band(1.0, 1.0 / 42760.0, 0.5);
  constexpr int kPairs = 4000;
  for (int i : {0, 500, 999}) {
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int r = 0; r < kPairs; ++r) {
      const double x = generate_trace(s, 999.0, 1.0, r).samples[i];
      const double y = generate_trace(s, 999.0, 1.0, r + kPairs).samples[i];
      sxy += x * y;
      sxx += x * x;
      syy += y * y;
    }
    EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 0.05) << "sample " << i;
  }
}

TEST(VerifySpectrum, SlopeAndLevel) {
  const auto s = band(2.0);
  const auto chk = verify_spectrum(s, 4096, 1.0, 1000);
  EXPECT_NEAR(chk.slope, -1.0, 0.1);
  EXPECT_LT(std::abs(chk.pooled_cross_correlation), 0.05);
  ASSERT_GE(chk.band_frequency.size(), 10u);
  for (std::size_t b = 2; b + 2 < chk.band_frequency.size(); ++b) {
    EXPECT_NEAR(chk.band_power[b] * chk.band_frequency[b] / 4.0, 1.0, 0.35) << chk.band_frequency[b];
  }
  EXPECT_THROW(verify_spectrum(s, 8, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(verify_spectrum(s, 64, 1.0, 1), std::invalid_argument);
}

// Direct DFT periodogram, no window, band-averaged in quarter decades.
TEST(VerifySpectrum, IndependentPeriodogramSlope) {
  const auto s = band(1.0);
  constexpr int kN = 2048;
  constexpr int kTraces = 64;
  const int m_lo = static_cast<int>(std::ceil(4e-3 * kN));
  const int m_hi = static_cast<int>(0.2 * kN);
  std::vector<double> power(m_hi + 1, 0.0);
  for (int r = 0; r < kTraces; ++r) {
    const auto tr = generate_trace(s, kN - 1.0, 1.0, 1000 + r);
    for (int m = m_lo; m <= m_hi; ++m) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < kN; ++i) acc += tr.samples[i] * std::polar(1.0, -2.0 * M_PI * m * i / kN);
      power[m] += 2.0 * std::norm(acc) / kN / kTraces;
    }
  }
  std::vector<double> lx, ly;
  for (double d0 = std::log10(static_cast<double>(m_lo) / kN); d0 + 0.25 <= std::log10(0.2); d0 += 0.25) {
    double sum = 0.0;
    int count = 0;
    for (int m = m_lo; m <= m_hi; ++m) {
      const double lf = std::log10(static_cast<double>(m) / kN);
      if (lf >= d0 && lf < d0 + 0.25) {
        sum += power[m];
        ++count;
      }
    }
    if (count == 0) continue;
    lx.push_back(d0 + 0.125);
    ly.push_back(std::log10(sum / count));
  }
  ASSERT_GE(lx.size(), 4u);
  const double n = lx.size();
  const double sx = std::accumulate(lx.begin(), lx.end(), 0.0);
  const double sy = std::accumulate(ly.begin(), ly.end(), 0.0);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  EXPECT_NEAR((n * sxy - sx * sy) / (n * sxx - sx * sx), -1.0, 0.15);
}

TEST(NoiseTrace, InterpolationAndBounds) {
  NoiseTrace tr;
  tr.dt = 2.0;
  tr.samples = {0.0, 4.0, -2.0};
  EXPECT_DOUBLE_EQ(tr.duration(), 4.0);
  EXPECT_DOUBLE_EQ(tr.at(1.0), 2.0);
  EXPECT_DOUBLE_EQ(tr.at(3.0), 1.0);
  EXPECT_DOUBLE_EQ(tr.at(4.0), -2.0);
  EXPECT_THROW(tr.at(4.5), std::out_of_range);
  EXPECT_THROW(tr.at(-1.0), std::out_of_range);
}

TEST(ApplyNoise, ShiftsOnlyTheDcField) {
  const auto rx = rx_schedule(DeviceParams{});
  NoiseTrace flat;
  flat.dt = 1.0;
  flat.samples.assign(104, 100.0);
  const auto noisy = apply_noise(rx, flat);
  NoiseTrace zero = flat;
  std::fill(zero.samples.begin(), zero.samples.end(), 0.0);
  NoiseTrace twice = flat;
  for (auto& v : twice.samples) v *= 2.0;
  const auto quiet = apply_noise(rx, zero);
  const auto doubled = apply_noise(rx, twice);
  for (double t = 0.0; t <= 102.5; t += 0.77) {
    const auto base = rx.sample(t);
    EXPECT_DOUBLE_EQ(noisy.sample(t).dEz, base.dEz + 100.0);
    EXPECT_DOUBLE_EQ(noisy.sample(t).eac, base.eac);
    EXPECT_DOUBLE_EQ(quiet.sample(t).dEz, base.dEz);
    EXPECT_DOUBLE_EQ(doubled.sample(t).dEz - base.dEz, 2.0 * (noisy.sample(t).dEz - base.dEz));
  }
  EXPECT_TRUE(noisy.noisy());
  EXPECT_FALSE(NoisySchedule(rx).noisy());
}

TEST(ApplyNoise, RejectsShortTrace) {
  NoiseTrace short_trace;
  short_trace.dt = 1.0;
  short_trace.samples.assign(30, 0.0);
  EXPECT_THROW(apply_noise(rz_schedule(), short_trace), std::invalid_argument);
}

TEST(DefaultBand, Edges) {
  const auto s = default_band(10.0, 427.6, 1.0, 99);
  EXPECT_DOUBLE_EQ(s.f_min, 1.0 / 42760.0);
  EXPECT_DOUBLE_EQ(s.f_max, 0.5);
  EXPECT_EQ(s.master_seed, 99u);
  EXPECT_EQ(s.alpha, 10.0);
}

TEST(NoiseStream, DistinctKeys) {
  EXPECT_NE(noise_stream(1, 0), noise_stream(1, 1));
  EXPECT_NE(noise_stream(1, 0), noise_stream(2, 0));
  EXPECT_EQ(noise_stream(5, 3), noise_stream(5, 3));
}

}  // namespace
}  // namespace ffsim
