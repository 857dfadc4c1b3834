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

#include "ffsim/operator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ffsim {

ComplexOperator::ComplexOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("ComplexOperator must be square, got " + std::to_string(m_.rows()) +
                                "x" + std::to_string(m_.cols()));
  }
}

ComplexOperator::ComplexOperator(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  m_ = Matrix::Zero(n, n);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument("ComplexOperator initializer is not square");
    }
    Eigen::Index c = 0;
    for (const auto& v : row) m_(r, c++) = v;
    ++r;
  }
}

ComplexOperator ComplexOperator::identity(Eigen::Index dim) { return ComplexOperator(Matrix::Identity(dim, dim)); }

ComplexOperator ComplexOperator::zero(Eigen::Index dim) { return ComplexOperator(Matrix::Zero(dim, dim)); }

ComplexOperator ComplexOperator::diagonal(std::span<const Complex> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return ComplexOperator(std::move(m));
}

double ComplexOperator::hermiticity_error() const {
  const double norm = m_.norm();
  if (norm == 0.0) return 0.0;
  return (m_ - m_.adjoint()).norm() / norm;
}

ComplexOperator& ComplexOperator::operator+=(const ComplexOperator& o) {
  if (o.dim() != dim()) throw std::invalid_argument("operator dimension mismatch in +");
  m_ += o.m_;
  return *this;
}

ComplexOperator& ComplexOperator::operator-=(const ComplexOperator& o) {
  if (o.dim() != dim()) throw std::invalid_argument("operator dimension mismatch in -");
  m_ -= o.m_;
  return *this;
}

ComplexOperator& ComplexOperator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

ComplexOperator operator*(const ComplexOperator& a, const ComplexOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch in *");
  return ComplexOperator(a.m_ * b.m_);
}

ComplexOperator pauli(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::x:
      return ComplexOperator{{0.0, 1.0}, {1.0, 0.0}};
    case PauliAxis::y:
      return ComplexOperator{{0.0, -kI}, {kI, 0.0}};
    case PauliAxis::z:
      return ComplexOperator{{1.0, 0.0}, {0.0, -1.0}};
  }
  throw std::invalid_argument("unknown Pauli axis");
}

SpinHalfOps spin_half_ops() {
  return {0.5 * pauli(PauliAxis::x), 0.5 * pauli(PauliAxis::y), 0.5 * pauli(PauliAxis::z)};
}

ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b) {
  const Eigen::Index na = a.dim();
  const Eigen::Index nb = b.dim();
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.matrix();
    }
  }
  return ComplexOperator(std::move(out));
}

ComplexOperator kron(std::initializer_list<ComplexOperator> factors) {
  if (factors.size() == 0) throw std::invalid_argument("kron of an empty factor list");
  auto it = factors.begin();
  ComplexOperator out = *it++;
  for (; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

Matrix expm_hermitian(const Matrix& h, double t_ns) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigendecomposition failed");
  const double w = 2.0 * std::numbers::pi * t_ns;
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, -w * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexOperator expm_unitary(const ComplexOperator& h, double t_ns) {
  if (!h.is_hermitian(1e-10)) {
    throw std::invalid_argument("expm_unitary requires a Hermitian generator (relative error " +
                                std::to_string(h.hermiticity_error()) + ")");
  }
  return ComplexOperator(expm_hermitian(h.matrix(), t_ns));
}

double unitarity_error(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

}  // namespace ffsim
