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

#include "dense_oracle.hpp"
#include "ffsim/coupling.hpp"
#include "ffsim/propagator.hpp"

namespace ffsim {
namespace {

using testing::computational_columns;
using testing::dense_cf4;
using testing::project;
using testing::uniform_grid;

ArraySystem single(const GateSchedule& s, const DeviceParams& base = {}) {
  ArraySystem sys;
  sys.params = {base.with_tunnel_coupling(s.vt)};
  sys.fields = {NoisySchedule(s)};
  return sys;
}

// Dense 8-dim reference on a 2 ps grid aligned with the schedule breakpoints.
Matrix single_site_reference(const ArraySystem& sys) {
  const auto& f = sys.fields[0];
  const auto& p = sys.params[0];
  auto h = [&](double t) {
    const auto s = f.sample(t);
    return build_hamiltonian(p, s.dEz, s.eac).matrix();
  };
  const auto grid = uniform_grid(f.schedule().breakpoints(), 0.002);
  return project(dense_cf4(h, computational_columns(1, 8), grid), 1);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// |tr(a† b)|² normalised by |tr(b† b)|²; 1 when a matches b up to a phase.
double overlap(const Matrix& a, const Matrix& b) {
  return std::norm((a.adjoint() * b).trace()) / std::norm((b.adjoint() * b).trace());
}

TEST(ComputationalProjector, Indices) {
  const auto one = computational_projector(1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0], basis::kLogicalZero);
  EXPECT_EQ(one[1], basis::kLogicalOne);
  const auto two = computational_projector(2);
  ASSERT_EQ(two.size(), 4u);
  EXPECT_EQ(two[0], 8 * basis::kLogicalZero + basis::kLogicalZero);
  EXPECT_EQ(two[1], 8 * basis::kLogicalZero + basis::kLogicalOne);
  EXPECT_EQ(two[2], 8 * basis::kLogicalOne + basis::kLogicalZero);
  EXPECT_EQ(two[3], 8 * basis::kLogicalOne + basis::kLogicalOne);
  Matrix p = Matrix::Zero(64, 64);
  for (auto i : two) p(i, i) = 1.0;
  EXPECT_EQ((p * p - p).norm(), 0.0);
  EXPECT_EQ(Eigen::FullPivLU<Matrix>(p).rank(), 4);
  EXPECT_EQ(computational_projector(4).size(), 16u);
  EXPECT_THROW(computational_projector(0), std::invalid_argument);
  EXPECT_THROW(computational_projector(7), std::invalid_argument);
}

TEST(SectorIndex, MatchesSectorPositions) {
  EXPECT_EQ(sector_index_of(0u, 1), kSectorZero);
  EXPECT_EQ(sector_index_of(1u, 1), kSectorOne);
  EXPECT_EQ(sector_index_of(0b10u, 2), 4 * kSectorOne + kSectorZero);
}

TEST(Settings, ValidateAndRefine) {
  PropagationSettings s;
  EXPECT_NO_THROW(s.validate());
  const auto r = s.refined(2);
  EXPECT_DOUBLE_EQ(r.dt, s.dt / 4.0);
  EXPECT_DOUBLE_EQ(r.angle_step, s.angle_step / 4.0);
  EXPECT_EQ(r.drive_steps_per_period, 4 * s.drive_steps_per_period);
  auto bad = s;
  bad.dt = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = s;
  bad.angle_step = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = s;
  bad.drive_steps_per_period = 2;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = s;
  bad.convergence_tol = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = s;
  bad.max_halvings = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(ArraySystem, Validation) {
  ArraySystem empty;
  EXPECT_THROW(evolve(empty, {}), std::invalid_argument);
  auto sys = single(rz_schedule());
  sys.params.push_back(sys.params[0]);
  EXPECT_THROW(evolve(sys, {}), std::invalid_argument);
  sys = single(rz_schedule());
  sys.bonds = {{0, 0, 1.0}};
  EXPECT_THROW(evolve(sys, {}), std::invalid_argument);
  sys.bonds = {{0, 3, 1.0}};
  EXPECT_THROW(evolve(sys, {}), std::invalid_argument);
  ArraySystem pair = single(rz_schedule());
  pair.params.push_back(pair.params[0]);
  pair.fields.push_back(pair.fields[0]);
  pair.bonds = {{0, 1, std::nan("")}};
  EXPECT_THROW(evolve(pair, {}), std::invalid_argument);
  ArraySystem big;
  for (int i = 0; i < 7; ++i) {
    big.params.push_back(DeviceParams{});
    big.fields.emplace_back(idle_schedule(1.0, 11.29));
  }
  EXPECT_THROW(big.validate(), std::invalid_argument);
}

TEST(TimeGrid, CoversScheduleAndBreakpoints) {
  const auto sys = single(rx_schedule(DeviceParams{}));
  const PropagationSettings settings;
  const auto grid = time_grid(sys, settings);
  double t = 0.0;
  for (const auto& st : grid) {
    EXPECT_NEAR(st.t0, t, 1e-9);
    if (!st.exact) EXPECT_LE(st.h, settings.dt + 1e-12);
    t = st.t0 + st.h;
  }
  EXPECT_NEAR(t, sys.duration(), 1e-9);
  for (double b : sys.fields[0].schedule().breakpoints()) {
    bool hit = false;
    for (const auto& st : grid) hit = hit || std::abs(st.t0 - b) < 1e-9 || std::abs(st.t0 + st.h - b) < 1e-9;
    EXPECT_TRUE(hit) << b;
  }
  for (const auto& st : grid) {
    if (st.t0 > 25.0 && st.t0 + st.h < 65.0) {
      EXPECT_LE(st.h, 1.0 / (settings.drive_steps_per_period * sys.fields[0].schedule().drive->frequency) + 1e-12);
    }
  }
}

TEST(TimeGrid, StaticIdleIsOneExactStep) {
  const auto grid = time_grid(single(idle_schedule(40.0, 11.29)), {});
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_TRUE(grid[0].exact);
  EXPECT_DOUBLE_EQ(grid[0].h, 40.0);
}

TEST(Evolve, OrbitalOnlyIdleIsGlobalPhase) {
  DeviceParams p;
  p.b0 = 0.0;
  p.hyperfine_bulk_mhz = 0.0;
  const auto sim = evolve(single(idle_schedule(17.3, 11.29), p), {});
  const Complex phase = sim.matrix(0, 0);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LT((sim.matrix - phase * Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT(sim.mean_leakage(), 1e-12);
}

TEST(Evolve, ConstantHamiltonianMatchesExpm) {
  const DeviceParams p;
  ArraySystem sys = single(idle_schedule(23.7, 11.29));
  sys.params.push_back(sys.params[0]);
  sys.fields.push_back(sys.fields[0]);
  sys.bonds = {{0, 1, coupling_strength(p, p.pitch)}};
  const auto sim = evolve(sys, {});
  const ComplexOperator h2 = build_two_qubit(p, ArrayGeometry{}, kIdleField, kIdleField, 0.0, 0.0);
  const Matrix u = expm_unitary(h2, 23.7).matrix();
  const Matrix want = project(u * computational_columns(2, 64), 2);
  EXPECT_LT(max_abs(sim.matrix - want), 1e-9);
}

TEST(Evolve, RzMatchesDenseReferenceAndIsDiagonal) {
  const auto sys = single(rz_schedule());
  const Matrix ref = single_site_reference(sys);
  EXPECT_LT(std::abs(ref(0, 1)), 1e-4);
  EXPECT_LT(std::abs(ref(1, 0)), 1e-4);
  const auto sim = evolve(sys, {});
  EXPECT_LT(max_abs(sim.matrix - ref), 1e-4);
  EXPECT_LT(max_abs(evolve(sys, PropagationSettings{}.refined(2)).matrix - ref), 1e-5);
  EXPECT_LT(1.0 - overlap(sim.matrix, ref), 1e-6);
}

TEST(Evolve, RxMatchesDenseReference) {
  const auto sys = single(rx_schedule(DeviceParams{}));
  const Matrix ref = single_site_reference(sys);
  const auto sim = evolve(sys, {});
  EXPECT_LT(max_abs(sim.matrix - ref), 5e-4);
  EXPECT_LT(max_abs(evolve(sys, PropagationSettings{}.refined(2)).matrix - ref), 1e-4);
  EXPECT_LT(1.0 - overlap(sim.matrix, ref), 1e-5);
  // |⟨1|U|0⟩| of a π/2 rotation.
  EXPECT_NEAR(std::abs(ref(1, 0)), std::sqrt(0.5), 0.05);
}

// Slow toy device: the phase per step stays small, so the asymptotic order shows.
TEST(Evolve, FourthOrderConvergence) {
  DeviceParams p;
  p.b0 = 0.005;
  p.donor_depth = 1.5e-11;
  p.tunnel_coupling = 0.3;
  const auto s = trapezoid("toy", {kIdleField, 1300.0, 290.0, 3.0, 5.0, 4.0, RampShape::linear}, 0.3);
  ArraySystem sys;
  sys.params = {p};
  sys.fields = {NoisySchedule(s)};
  const Matrix ref = single_site_reference(sys);
  PropagationSettings coarse;
  coarse.dt = 0.5;
  coarse.angle_step = 2.5;
  const double e0 = max_abs(evolve(sys, coarse).matrix - ref);
  const double e1 = max_abs(evolve(sys, coarse.refined(1)).matrix - ref);
  const double e2 = max_abs(evolve(sys, coarse.refined(2)).matrix - ref);
  EXPECT_GT(e0 / e1, 12.0);
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e2, 1e-7);
}

TEST(Evolve, Rk4CrossCheck) {
  PropagationSettings rk;
  rk.method = PropagationSettings::Method::rk4;
  const auto sys = single(rz_schedule());
  EXPECT_LT(max_abs(evolve(sys, rk).matrix - single_site_reference(sys)), 2e-5);
}

TEST(Evolve, NormAndLeakageOfTabulatedGates) {
  const DeviceParams p;
  const auto seq = sqrt_iswap_schedule();
  ArraySystem couple;
  couple.params = {p.with_tunnel_coupling(seq.vt), p.with_tunnel_coupling(seq.vt)};
  couple.fields = {NoisySchedule(seq.member_program(0)), NoisySchedule(seq.member_program(1))};
  couple.bonds = {{0, 1, coupling_strength(p, p.pitch)}};
  for (const auto& sys : {single(rz_schedule()), single(rx_schedule(p)), couple}) {
    const auto sim = evolve(sys, {});
    for (Eigen::Index c = 0; c < sim.matrix.cols(); ++c) EXPECT_LE(sim.matrix.col(c).norm(), 1.0 + 1e-9);
    EXPECT_LT(sim.mean_leakage(), 1e-2);
    for (double l : sim.leakage) EXPECT_GE(l, 0.0);
  }
}

TEST(Evolve, TwoSiteStructuredMatchesDense) {
  const DeviceParams base;
  const auto rx = rx_schedule(base);
  const DeviceParams p = base.with_tunnel_coupling(rx.vt);
  ArraySystem sys;
  sys.params = {p, p};
  sys.fields = {NoisySchedule(rx), NoisySchedule(rx)};
  ArrayGeometry g;
  g.separation_multiple = 1;
  sys.bonds = {{0, 1, coupling_strength(p, g.separation())}};
  const PropagationSettings settings;
  const auto grid = time_grid(sys, settings);
  auto h = [&](double t) {
    const auto a = sys.fields[0].sample(t);
    const auto b = sys.fields[1].sample(t);
    return build_two_qubit(p, g, a.dEz, b.dEz, a.eac, b.eac).matrix();
  };
  const Matrix want = project(dense_cf4(h, computational_columns(2, 64), grid), 2);
  EXPECT_LT(max_abs(evolve(sys, settings).matrix - want), 1e-9);
}

TEST(Evolve, FourSiteStructuredMatchesDense) {
  const auto chk = testing::four_site_dense_check();
  EXPECT_LT(chk.steps, 12u);
  EXPECT_LT(chk.off_sector, 1e-9);
  EXPECT_LT(chk.max_difference, 1e-8);
}

TEST(EvolveVerified, AcceptsAndRejects) {
  const auto sys = single(rz_schedule());
  const AcceptanceMetric metric = [](const SubspacePropagator& s) { return std::norm(s.matrix.trace()) / 4.0; };
  const auto v = evolve_verified(sys, {}, metric);
  EXPECT_LT(v.halving_change, 1e-5);
  EXPECT_GE(v.halvings, 1);
  EXPECT_DOUBLE_EQ(v.dt_used, PropagationSettings{}.dt / std::pow(2.0, v.halvings));
  PropagationSettings strict;
  strict.convergence_tol = 1e-15;
  strict.max_halvings = 1;
  strict.dt = 4.0;
  strict.angle_step = 0.5;
  EXPECT_THROW(evolve_verified(sys, strict, metric), ConvergenceError);
}

}  // namespace
}  // namespace ffsim
