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

#ifndef FFSIM_FIDELITY_HPP
#define FFSIM_FIDELITY_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ffsim/propagator.hpp"

namespace ffsim {

enum class GateKind { rz_m_half_pi, rx_m_half_pi, sqrt_iswap };

std::string to_string(GateKind kind);
/// Accepts the enum spelling and the short names rz, rx, sqrt_iswap.
GateKind gate_kind_from_string(std::string_view name);
/// Qubits acted on by one copy of the gate.
int gate_width(GateKind kind);

/// Target unitary of `n_parallel` simultaneous copies (Kronecker power),
/// qubit 0 most significant.
ComplexOperator ideal_gate(GateKind kind, int n_parallel);

/// |Tr(target† · sim)|² / d². `sim` may be non-unitary (leaky).
double entanglement_fidelity(const Matrix& sim, const ComplexOperator& target);
double entanglement_fidelity(const SubspacePropagator& sim, const ComplexOperator& target);

/// Removes the free precession of the idle qubits: row c is multiplied by
/// exp(+i 2π E_c T), with E_c the summed idle logical energies of state c.
Matrix to_idle_frame(const Matrix& sim, const std::vector<DeviceParams>& params, double duration);

/// Virtual Z rotations, diag(1, e^{iφ}) per qubit, applied before (pre) and
/// after (post) the simulated operation.
struct FrameCorrection {
  std::vector<double> pre;
  std::vector<double> post;

  static FrameCorrection identity(int n_qubits);
  int n_qubits() const { return static_cast<int>(pre.size()); }
  Matrix apply(const Matrix& sim) const;
  /// The same correction on `copies` consecutive blocks of qubits.
  FrameCorrection repeated(int copies) const;
};

struct FrameFit {
  FrameCorrection frame;
  double fidelity = 0.0;
};

/// Frame correction maximizing entanglement_fidelity(frame.apply(sim), target).
FrameFit fit_frame_correction(const Matrix& sim, const ComplexOperator& target);

struct FidelityResult {
  double mean_fidelity = 0.0;
  double std_error = 0.0;
  int n_realizations = 0;
  double mean_leakage = 0.0;

  double mean_infidelity() const { return 1.0 - mean_fidelity; }
};

struct RealizationOutcome {
  double fidelity = 0.0;
  double leakage = 0.0;
};

class RealizationError : public std::runtime_error {
 public:
  RealizationError(int realization, const std::string& what);
  int realization() const { return realization_; }

 private:
  int realization_;
};

/// Runs `run(r)` for r = 0 … n-1 on up to `n_threads` threads and reduces in
/// index order. alpha == 0 collapses the ensemble to one realization.
/// A throwing realization aborts with RealizationError carrying its index.
FidelityResult averaged_infidelity(const std::function<RealizationOutcome(int)>& run, double alpha,
                                   int n_realizations, int n_threads = 1);

/// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& values);

}  // namespace ffsim

#endif  // FFSIM_FIDELITY_HPP
