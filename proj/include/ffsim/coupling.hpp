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

#ifndef FFSIM_COUPLING_HPP
#define FFSIM_COUPLING_HPP

#include <array>

#include "ffsim/device.hpp"

namespace ffsim {

/// Active qubits of a linear array. Dipoles point vertically and the array
/// runs laterally, so every dipole is perpendicular to every separation.
/// Idle qubits between active ones carry no dipole and are not simulated.
struct ArrayGeometry {
  int n_active = 2;            // 2 or 4
  double pitch = 180e-9;       // r0, m
  int separation_multiple = 1; // k, separation r = k·r0
  bool interacting = true;     // false drops the coupling between the two gate copies

  double separation() const { return separation_multiple * pitch; }
  double intra_couple() const { return pitch; }
  void validate() const;
};

/// (d·e·dEz/(h ε0)) σz + (Vt/ε0) σx on the orbital factor; eigenvalues ±1,
/// +1 being the interface state |i⟩.
ComplexOperator position_operator(const DeviceParams& p, double dEz);

/// (e·d/2)(1 + position), in C·m.
ComplexOperator dipole_operator(const DeviceParams& p, double dEz);

/// e²d² / (4π ε_vac ε_r r³ h) in GHz: the interaction energy of two fully
/// interface-bound electrons at distance r.
double coupling_strength(const DeviceParams& p, double r);

/// Dipole-dipole interaction of two sites at distance r, 64×64, GHz.
/// Throws std::invalid_argument for r <= 0.
ComplexOperator dipole_dipole(const DeviceParams& p, double dEz_i, double dEz_j, double r);

ComplexOperator build_two_qubit(const DeviceParams& p, const ArrayGeometry& g, double dEz_i, double dEz_j,
                                double eac_i, double eac_j);

/// Sites i, j, k, l. Couplings i–j and k–l at r0, j–k at the geometry's
/// separation (absent when not interacting); the remaining pairs are
/// neglected. Dense 4096×4096.
ComplexOperator build_four_qubit(const DeviceParams& p, const ArrayGeometry& g, const std::array<double, 4>& dEz,
                                 const std::array<double, 4>& eac);

/// Projector onto the interface position state, (1 + position)/2, 2×2.
Eigen::Matrix2cd interface_projector(const DeviceParams& p, double dEz);

}  // namespace ffsim

#endif  // FFSIM_COUPLING_HPP
