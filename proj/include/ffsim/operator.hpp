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

#ifndef FFSIM_OPERATOR_HPP
#define FFSIM_OPERATOR_HPP

#include <complex>
#include <initializer_list>
#include <span>
#include <tuple>

#include <Eigen/Dense>

namespace ffsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Dense complex square matrix. Hamiltonians are carried in GHz, propagators
/// are dimensionless.
class ComplexOperator {
 public:
  ComplexOperator() = default;
  explicit ComplexOperator(Matrix m);
  ComplexOperator(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexOperator identity(Eigen::Index dim);
  static ComplexOperator zero(Eigen::Index dim);
  static ComplexOperator diagonal(std::span<const Complex> entries);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return m_(row, col); }

  ComplexOperator adjoint() const { return ComplexOperator(m_.adjoint()); }
  Complex trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }

  /// ‖A − A†‖_F / ‖A‖_F, zero for the zero matrix.
  double hermiticity_error() const;
  bool is_hermitian(double rel_tol = 1e-12) const { return hermiticity_error() <= rel_tol; }

  ComplexOperator& operator+=(const ComplexOperator& o);
  ComplexOperator& operator-=(const ComplexOperator& o);
  ComplexOperator& operator*=(Complex s);

  friend ComplexOperator operator+(ComplexOperator a, const ComplexOperator& b) { return a += b; }
  friend ComplexOperator operator-(ComplexOperator a, const ComplexOperator& b) { return a -= b; }
  friend ComplexOperator operator*(ComplexOperator a, Complex s) { return a *= s; }
  friend ComplexOperator operator*(Complex s, ComplexOperator a) { return a *= s; }
  friend ComplexOperator operator*(double s, ComplexOperator a) { return a *= Complex(s); }
  friend ComplexOperator operator*(const ComplexOperator& a, const ComplexOperator& b);

 private:
  Matrix m_;
};

enum class PauliAxis { x, y, z };

/// Pauli matrix in the {|g⟩, |e⟩} orbital basis.
ComplexOperator pauli(PauliAxis axis);

struct SpinHalfOps {
  ComplexOperator x;
  ComplexOperator y;
  ComplexOperator z;
};

/// Standard spin-1/2 operators; index 0 is the +1/2 eigenstate of Sz.
SpinHalfOps spin_half_ops();

ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b);
ComplexOperator kron(std::initializer_list<ComplexOperator> factors);

/// exp(−i 2π h t) for Hermitian h in GHz and t in ns.
/// Throws std::invalid_argument for non-Hermitian input.
ComplexOperator expm_unitary(const ComplexOperator& h, double t_ns);

/// Same as expm_unitary on a raw matrix, without the Hermiticity guard.
Matrix expm_hermitian(const Matrix& h, double t_ns);

/// ‖U†U − 1‖_F.
double unitarity_error(const Matrix& u);

/// Site Hilbert space layout: orbital ⊗ electron spin ⊗ nuclear spin,
/// slowest to fastest. Multi-site spaces put site 0 in the slowest index.
namespace basis {

inline constexpr int kSiteDim = 8;

enum class Orbital : int { g = 0, e = 1 };
// Index 0 of each spin factor is the +1/2 state, matching spin_half_ops().
enum class Spin : int { up = 0, down = 1 };

constexpr int site_index(Orbital orb, Spin electron, Spin nucleus) {
  return static_cast<int>(orb) * 4 + static_cast<int>(electron) * 2 + static_cast<int>(nucleus);
}

/// |0⟩ ≡ |g↓⇑⟩ and |1⟩ ≡ |g↑⇓⟩.
inline constexpr int kLogicalZero = site_index(Orbital::g, Spin::down, Spin::up);
inline constexpr int kLogicalOne = site_index(Orbital::g, Spin::up, Spin::down);

constexpr long long space_dim(int n_sites) {
  long long d = 1;
  for (int i = 0; i < n_sites; ++i) d *= kSiteDim;
  return d;
}

}  // namespace basis

}  // namespace ffsim

#endif  // FFSIM_OPERATOR_HPP
