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

#ifndef FFSIM_PROPAGATOR_HPP
#define FFSIM_PROPAGATOR_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "ffsim/coupling.hpp"
#include "ffsim/noise.hpp"

namespace ffsim {

/// Step control. A time-dependent interval is cut into steps no longer than
/// dt, no longer than angle_step / |dθ/dt| (θ the orbital mixing angle of
/// the fastest site) and, while a drive is on, no longer than one
/// drive_steps_per_period-th of the carrier period.
struct PropagationSettings {
  enum class Method { piecewise_expm, rk4 };

  double dt = 1.0;                  // ns
  double angle_step = 0.04;         // rad
  int drive_steps_per_period = 20;
  Method method = Method::piecewise_expm;
  double convergence_tol = 1e-5;    // fidelity units
  int max_halvings = 5;

  void validate() const;
  /// dt, angle_step halved and drive_steps_per_period doubled, `times` times.
  PropagationSettings refined(int times = 1) const;
};

/// Projected propagator on the 2^n computational states, qubit 0 most
/// significant, |0…0⟩ first.
struct SubspacePropagator {
  Matrix matrix;
  std::vector<double> leakage;  // 1 − column norm², per column

  double mean_leakage() const;
};

/// Dipole-dipole link between two simulated sites: strength·Π_a ⊗ Π_b with
/// Π the interface projector, strength in GHz.
struct Bond {
  int a = 0;
  int b = 1;
  double strength = 0.0;
};

/// Everything evolve() needs: per-site device settings and control fields
/// plus the coupling graph.
struct ArraySystem {
  std::vector<DeviceParams> params;
  std::vector<NoisySchedule> fields;
  std::vector<Bond> bonds;

  int n_sites() const { return static_cast<int>(fields.size()); }
  double duration() const;
  void validate() const;
};

/// Full-space (8^n) indices of the computational states, ordered as in
/// SubspacePropagator.
std::vector<long long> computational_projector(int n_qubits);

/// One integration step [t0, t0 + h]; `exact` marks a constant-field interval
/// that is integrated with a single exponential.
struct TimeStep {
  double t0;
  double h;
  bool exact;
};

std::vector<TimeStep> time_grid(const ArraySystem& system, const PropagationSettings& settings);

/// Sector Hamiltonian of a set of sites at time t, dimension 4^m, GHz.
/// `sites` lists system site indices; bonds outside the set are ignored.
/// The sector Hamiltonian is real symmetric.
Eigen::MatrixXd sector_hamiltonian(const ArraySystem& system, const std::vector<int>& sites, double t);

/// Sector index (within `sites`) of a computational basis state given as bits.
long long sector_index_of(unsigned bits, int m);

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SubspacePropagator evolve(const ArraySystem& system, const PropagationSettings& settings);

using AcceptanceMetric = std::function<double(const SubspacePropagator&)>;

struct VerifiedPropagation {
  SubspacePropagator result;
  double dt_used = 0.0;
  double halving_change = 0.0;  // |metric(dt) − metric(dt/2)|
  int halvings = 0;
};

/// Evolves at dt and dt/2 and accepts the finer result once the metric moves
/// by less than convergence_tol, halving up to max_halvings times.
/// Throws ConvergenceError with the last observed change otherwise.
VerifiedPropagation evolve_verified(const ArraySystem& system, PropagationSettings settings,
                                    const AcceptanceMetric& metric);

}  // namespace ffsim

#endif  // FFSIM_PROPAGATOR_HPP
