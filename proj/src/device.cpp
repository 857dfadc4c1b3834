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

#include "ffsim/device.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ffsim {

namespace {

struct SpinFactors {
  ComplexOperator id2 = ComplexOperator::identity(2);
  ComplexOperator sx, sy, sz;
  SpinFactors() {
    auto s = spin_half_ops();
    sx = s.x;
    sy = s.y;
    sz = s.z;
  }
};

const SpinFactors& spin_factors() {
  static const SpinFactors f;
  return f;
}

}  // namespace

void DeviceParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid DeviceParams: ") + what);
  };
  require(donor_depth > 0.0, "donor_depth must be > 0");
  require(tunnel_coupling > 0.0, "tunnel_coupling must be > 0");
  require(pitch > 0.0, "pitch must be > 0");
  require(eps_r >= 1.0, "eps_r must be >= 1");
  require(b0 >= 0.0, "b0 must be >= 0");
  require(hyperfine_bulk_mhz >= 0.0, "hyperfine_bulk_mhz must be >= 0");
}

double orbital_splitting(const DeviceParams& p, double dEz) {
  return std::hypot(p.tunnel_coupling, p.dipole_frequency_per_field() * dEz);
}

double hyperfine(const DeviceParams& p, double dEz) {
  return p.hyperfine_bulk_mhz / (1.0 + std::exp(p.hyperfine_fit * dEz));
}

OrbitalMixing orbital_mixing(const DeviceParams& p, double dEz) {
  const double field_term = p.dipole_frequency_per_field() * dEz;
  const double eps = std::hypot(p.tunnel_coupling, field_term);
  return {eps, field_term / eps, p.tunnel_coupling / eps};
}

ComplexOperator build_hamiltonian(const DeviceParams& p, double dEz, double eac, double /*drive_phase_arg*/) {
  const auto& s = spin_factors();
  const auto mix = orbital_mixing(p, dEz);
  const auto id2 = ComplexOperator::identity(2);
  const auto sz_orb = pauli(PauliAxis::z);
  const auto sx_orb = pauli(PauliAxis::x);
  const double a_ghz = hyperfine(p, dEz) * 1e-3;

  // Position operator (interface vs donor) in the orbital eigenbasis.
  const auto position = mix.cos_theta * sz_orb + mix.sin_theta * sx_orb;

  const auto e_sz = kron({id2, s.sz, id2});
  const auto n_iz = kron({id2, id2, s.sz});
  const auto s_dot_i = kron(s.sx, s.sx) + kron(s.sy, s.sy) + kron(s.sz, s.sz);

  const double zeeman_e = p.gamma_e * p.b0;
  const double zeeman_n = p.gamma_n * p.b0;

  ComplexOperator h = zeeman_e * e_sz;
  h += zeeman_e * p.delta_gamma * kron({0.5 * id2 + 0.5 * position, s.sz, id2});
  h -= zeeman_n * n_iz;
  h += a_ghz * kron(0.5 * id2 - 0.5 * position, s_dot_i);

  const double drive = p.dipole_frequency_per_field() * eac / 2.0;
  const auto orbital = (-mix.splitting / 2.0) * sz_orb - drive * position;
  h += kron({orbital, id2, id2});
  return h;
}

SiteBlock build_site_block(const DeviceParams& p, double dEz, double eac) {
  const auto mix = orbital_mixing(p, dEz);
  const double a_ghz = hyperfine(p, dEz) * 1e-3;
  const double zeeman_e = p.gamma_e * p.b0;
  const double zeeman_n = p.gamma_n * p.b0;
  const double drive = p.dipole_frequency_per_field() * eac / 2.0;

  // Spin factor basis {|↑⇓⟩, |↓⇑⟩}: Sz = diag(½, −½), Iz = −Sz,
  // S·I = −¼ + ½ X.
  Eigen::Matrix2cd sz;
  sz << 0.5, 0.0, 0.0, -0.5;
  Eigen::Matrix2cd sdi;
  sdi << -0.25, 0.5, 0.5, -0.25;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();

  Eigen::Matrix2cd oz;
  oz << 1.0, 0.0, 0.0, -1.0;
  Eigen::Matrix2cd ox;
  ox << 0.0, 1.0, 1.0, 0.0;
  const Eigen::Matrix2cd position = mix.cos_theta * oz + mix.sin_theta * ox;

  const Eigen::Matrix2cd zeeman_orb = zeeman_e * (id + p.delta_gamma * (0.5 * id + 0.5 * position));
  const Eigen::Matrix2cd hyper_orb = a_ghz * (0.5 * id - 0.5 * position);
  const Eigen::Matrix2cd orbital = (-mix.splitting / 2.0) * oz - drive * position;

  SiteBlock h;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Eigen::Matrix2cd blk = zeeman_orb(a, b) * sz + hyper_orb(a, b) * sdi + orbital(a, b) * id;
      // −γn B0 Iz with Iz = −Sz on this sector.
      if (a == b) blk += zeeman_n * sz;
      h.block<2, 2>(2 * a, 2 * b) = blk;
    }
  }
  return h;
}

LogicalLevels logical_levels(const DeviceParams& p, double dEz) {
  const SiteBlock h = build_site_block(p, dEz, 0.0);
  Eigen::SelfAdjointEigenSolver<SiteBlock> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("site eigendecomposition failed");
  const auto& v = es.eigenvectors();
  int best_zero = 0;
  int best_one = 0;
  double ov_zero = -1.0;
  double ov_one = -1.0;
  for (int k = 0; k < 4; ++k) {
    const double oz = std::norm(v(kSectorZero, k));
    const double oo = std::norm(v(kSectorOne, k));
    if (oz > ov_zero) {
      ov_zero = oz;
      best_zero = k;
    }
    if (oo > ov_one) {
      ov_one = oo;
      best_one = k;
    }
  }
  return {es.eigenvalues()(best_zero), es.eigenvalues()(best_one), ov_zero, ov_one};
}

double transition_frequency(const DeviceParams& p, double dEz) {
  const auto lv = logical_levels(p, dEz);
  if (lv.overlap_zero < 0.5 || lv.overlap_one < 0.5) {
    throw std::runtime_error("qubit states ill-defined at dEz = " + std::to_string(dEz) +
                             " V/m (overlaps " + std::to_string(lv.overlap_zero) + ", " +
                             std::to_string(lv.overlap_one) + ")");
  }
  return lv.one - lv.zero;
}

}  // namespace ffsim
