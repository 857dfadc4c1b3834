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

#include "ffsim/coupling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ffsim {

void ArrayGeometry::validate() const {
  if (n_active != 2 && n_active != 4) throw std::invalid_argument("ArrayGeometry supports 2 or 4 active qubits");
  if (!(pitch > 0.0)) throw std::invalid_argument("ArrayGeometry pitch must be > 0");
  if (separation_multiple < 1) throw std::invalid_argument("separation must be a positive multiple of the pitch");
}

ComplexOperator position_operator(const DeviceParams& p, double dEz) {
  const auto mix = orbital_mixing(p, dEz);
  return mix.cos_theta * pauli(PauliAxis::z) + mix.sin_theta * pauli(PauliAxis::x);
}

ComplexOperator dipole_operator(const DeviceParams& p, double dEz) {
  const double ed = phys::kElementaryCharge * p.donor_depth;
  return (0.5 * ed) * (ComplexOperator::identity(2) + position_operator(p, dEz));
}

double coupling_strength(const DeviceParams& p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("inter-qubit distance must be > 0");
  const double ed = phys::kElementaryCharge * p.donor_depth;
  const double energy = ed * ed / (4.0 * std::numbers::pi * phys::kVacuumPermittivity * p.eps_r * r * r * r);
  return energy / phys::kPlanck * 1e-9;
}

Eigen::Matrix2cd interface_projector(const DeviceParams& p, double dEz) {
  const auto mix = orbital_mixing(p, dEz);
  Eigen::Matrix2cd pr;
  pr << 0.5 * (1.0 + mix.cos_theta), 0.5 * mix.sin_theta, 0.5 * mix.sin_theta, 0.5 * (1.0 - mix.cos_theta);
  return pr;
}

namespace {

// Orbital operator of one 8-dim site, identity on both spins.
ComplexOperator on_orbital(const ComplexOperator& orb) { return kron(orb, ComplexOperator::identity(4)); }

ComplexOperator embed(const ComplexOperator& op, int site, int n_sites) {
  const auto id = ComplexOperator::identity(basis::kSiteDim);
  ComplexOperator out = site == 0 ? op : id;
  for (int s = 1; s < n_sites; ++s) out = kron(out, s == site ? op : id);
  return out;
}

}  // namespace

ComplexOperator dipole_dipole(const DeviceParams& p, double dEz_i, double dEz_j, double r) {
  // Perpendicular geometry: the (p·r) terms vanish and only p_i·p_j remains.
  const double ed = phys::kElementaryCharge * p.donor_depth;
  const double scale = coupling_strength(p, r) / (ed * ed);
  return scale * kron(on_orbital(dipole_operator(p, dEz_i)), on_orbital(dipole_operator(p, dEz_j)));
}

ComplexOperator build_two_qubit(const DeviceParams& p, const ArrayGeometry& g, double dEz_i, double dEz_j,
                                double eac_i, double eac_j) {
  const auto id = ComplexOperator::identity(basis::kSiteDim);
  ComplexOperator h = kron(build_hamiltonian(p, dEz_i, eac_i), id) + kron(id, build_hamiltonian(p, dEz_j, eac_j));
  if (g.interacting) h += dipole_dipole(p, dEz_i, dEz_j, g.separation());
  return h;
}

ComplexOperator build_four_qubit(const DeviceParams& p, const ArrayGeometry& g, const std::array<double, 4>& dEz,
                                 const std::array<double, 4>& eac) {
  if (g.n_active != 4) throw std::invalid_argument("build_four_qubit requires n_active = 4");
  const long long dim = basis::space_dim(4);
  ComplexOperator h = ComplexOperator::zero(dim);
  for (int s = 0; s < 4; ++s) h += embed(build_hamiltonian(p, dEz[s], eac[s]), s, 4);
  const auto id = ComplexOperator::identity(basis::kSiteDim);
  const auto id64 = ComplexOperator::identity(64);
  h += kron(dipole_dipole(p, dEz[0], dEz[1], g.intra_couple()), id64);
  h += kron(id64, dipole_dipole(p, dEz[2], dEz[3], g.intra_couple()));
  if (g.interacting) h += kron({id, dipole_dipole(p, dEz[1], dEz[2], g.separation()), id});
  return h;
}

}  // namespace ffsim
