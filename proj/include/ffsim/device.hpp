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

#ifndef FFSIM_DEVICE_HPP
#define FFSIM_DEVICE_HPP

#include <array>

#include "ffsim/operator.hpp"

namespace ffsim {

namespace phys {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
}  // namespace phys

/// Device constants of a phosphorus flip-flop qubit. Frequencies in GHz
/// unless the field name says otherwise.
struct DeviceParams {
  double b0 = 0.4;                   // T
  double delta_gamma = -0.002;       // relative shift of γe at the interface
  double gamma_e = 27.97;            // GHz/T
  double gamma_n = 0.01723;          // GHz/T
  double donor_depth = 15e-9;        // m, donor to interface
  double tunnel_coupling = 11.29;    // GHz
  double hyperfine_bulk_mhz = 117.0; // MHz
  double hyperfine_fit = 5.174e-4;   // m/V
  double eps_r = 11.7;
  double pitch = 180e-9;             // m

  /// Throws std::invalid_argument when a physical bound is violated.
  void validate() const;

  DeviceParams with_tunnel_coupling(double vt_ghz) const {
    DeviceParams p = *this;
    p.tunnel_coupling = vt_ghz;
    return p;
  }

  /// d·e/h expressed in GHz per V/m.
  double dipole_frequency_per_field() const {
    return donor_depth * phys::kElementaryCharge / phys::kPlanck * 1e-9;
  }
};

/// Orbital splitting ε0 at field detuning dEz (V/m), GHz.
double orbital_splitting(const DeviceParams& p, double dEz);

/// Fitted hyperfine coupling A(dEz), MHz.
double hyperfine(const DeviceParams& p, double dEz);

/// Direction cosines of the orbital position operator in the {|g⟩,|e⟩}
/// basis: cos² + sin² = 1 by construction.
struct OrbitalMixing {
  double splitting;  // ε0, GHz
  double cos_theta;  // d·e·dEz / (h ε0)
  double sin_theta;  // Vt / ε0
};

OrbitalMixing orbital_mixing(const DeviceParams& p, double dEz);

/// Full 8×8 single-site Hamiltonian in GHz. `eac` is the instantaneous AC
/// field E_ac(t)·cos(ω t + φ); the phase argument is kept for diagnostics only.
ComplexOperator build_hamiltonian(const DeviceParams& p, double dEz, double eac, double drive_phase_arg = 0.0);

/// Full-space indices of the Sz + Iz = 0 sector, in increasing order:
/// |g↑⇓⟩, |g↓⇑⟩, |e↑⇓⟩, |e↓⇑⟩. The site Hamiltonian never leaves it.
inline constexpr std::array<int, 4> kFlipFlopSector = {
    basis::site_index(basis::Orbital::g, basis::Spin::up, basis::Spin::down),
    basis::site_index(basis::Orbital::g, basis::Spin::down, basis::Spin::up),
    basis::site_index(basis::Orbital::e, basis::Spin::up, basis::Spin::down),
    basis::site_index(basis::Orbital::e, basis::Spin::down, basis::Spin::up),
};

/// Sector positions of the logical states.
inline constexpr int kSectorZero = 1;
inline constexpr int kSectorOne = 0;

using SiteBlock = Eigen::Matrix4cd;

/// build_hamiltonian restricted to kFlipFlopSector.
SiteBlock build_site_block(const DeviceParams& p, double dEz, double eac);

/// Dressed energies (GHz) of the eigenstates continuously connected to
/// |0⟩ = |g↓⇑⟩ and |1⟩ = |g↑⇓⟩ at zero drive.
struct LogicalLevels {
  double zero;
  double one;
  double overlap_zero;
  double overlap_one;
};

LogicalLevels logical_levels(const DeviceParams& p, double dEz);

/// Flip-flop transition frequency ε_ff(dEz) in GHz. Throws std::runtime_error
/// when the identified eigenstates overlap the logical states by less than 0.5.
double transition_frequency(const DeviceParams& p, double dEz);

}  // namespace ffsim

#endif  // FFSIM_DEVICE_HPP
