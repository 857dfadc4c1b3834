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

#include "ffsim/fidelity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

namespace ffsim {

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::rz_m_half_pi: return "rz";
    case GateKind::rx_m_half_pi: return "rx";
    case GateKind::sqrt_iswap: return "sqrt_iswap";
  }
  throw std::invalid_argument("unknown gate kind");
}

GateKind gate_kind_from_string(std::string_view name) {
  if (name == "rz" || name == "rz_m_half_pi") return GateKind::rz_m_half_pi;
  if (name == "rx" || name == "rx_m_half_pi") return GateKind::rx_m_half_pi;
  if (name == "sqrt_iswap" || name == "sqrtiswap") return GateKind::sqrt_iswap;
  throw std::invalid_argument("unknown gate name: " + std::string(name));
}

int gate_width(GateKind kind) { return kind == GateKind::sqrt_iswap ? 2 : 1; }

ComplexOperator ideal_gate(GateKind kind, int n_parallel) {
  if (n_parallel < 1) throw std::invalid_argument("n_parallel must be >= 1");
  if (n_parallel * gate_width(kind) > 6) throw std::invalid_argument("ideal_gate supports at most 6 qubits");
  const double c = std::sqrt(0.5);
  Matrix unit;
  switch (kind) {
    case GateKind::rz_m_half_pi:
      unit = Matrix::Zero(2, 2);
      unit(0, 0) = std::polar(1.0, std::numbers::pi / 4.0);
      unit(1, 1) = std::polar(1.0, -std::numbers::pi / 4.0);
      break;
    case GateKind::rx_m_half_pi:
      unit.resize(2, 2);
      unit << c, Complex(0.0, c), Complex(0.0, c), c;
      break;
    case GateKind::sqrt_iswap:
      unit = Matrix::Identity(4, 4);
      unit(1, 1) = unit(2, 2) = c;
      unit(1, 2) = unit(2, 1) = Complex(0.0, c);
      break;
  }
  Matrix out = unit;
  for (int i = 1; i < n_parallel; ++i) out = Eigen::kroneckerProduct(out, unit).eval();
  return ComplexOperator(out);
}

double entanglement_fidelity(const Matrix& sim, const ComplexOperator& target) {
  if (sim.rows() != target.dim() || sim.cols() != target.dim()) {
    throw std::invalid_argument("entanglement_fidelity: dimension mismatch");
  }
  const double d = static_cast<double>(target.dim());
  return std::norm((target.matrix().adjoint() * sim).trace()) / (d * d);
}

double entanglement_fidelity(const SubspacePropagator& sim, const ComplexOperator& target) {
  return entanglement_fidelity(sim.matrix, target);
}

Matrix to_idle_frame(const Matrix& sim, const std::vector<DeviceParams>& params, double duration) {
  const int n = static_cast<int>(params.size());
  if (sim.rows() != (Eigen::Index{1} << n)) throw std::invalid_argument("to_idle_frame: dimension mismatch");
  std::vector<LogicalLevels> levels;
  for (const auto& p : params) levels.push_back(logical_levels(p, kIdleField));
  Matrix out = sim;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    double e = 0.0;
    for (int q = 0; q < n; ++q) e += ((r >> (n - 1 - q)) & 1) ? levels[q].one : levels[q].zero;
    out.row(r) *= std::polar(1.0, 2.0 * std::numbers::pi * e * duration);
  }
  return out;
}

FrameCorrection FrameCorrection::identity(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("frame correction needs at least one qubit");
  return {std::vector<double>(n_qubits, 0.0), std::vector<double>(n_qubits, 0.0)};
}

namespace {

double bit_phase(const std::vector<double>& angles, Eigen::Index state) {
  const int n = static_cast<int>(angles.size());
  double ph = 0.0;
  for (int q = 0; q < n; ++q) {
    if ((state >> (n - 1 - q)) & 1) ph += angles[q];
  }
  return ph;
}

Complex corrected_trace(const Matrix& w, const FrameCorrection& f) {
  Complex t = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) t += w(i, j) * std::polar(1.0, bit_phase(f.post, i) + bit_phase(f.pre, j));
  }
  return t;
}

// Exact maximization over one angle: Tr = A + B e^{iφ}.
void ascend(const Matrix& w, FrameCorrection& f) {
  const int n = f.n_qubits();
  for (int side = 0; side < 2; ++side) {
    for (int q = 0; q < n; ++q) {
      double& ang = side == 0 ? f.post[q] : f.pre[q];
      Complex a = 0.0, b = 0.0;
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
          const Eigen::Index s = side == 0 ? i : j;
          const bool set = (s >> (n - 1 - q)) & 1;
          double ph = bit_phase(f.post, i) + bit_phase(f.pre, j);
          if (set) ph -= ang;
          (set ? b : a) += w(i, j) * std::polar(1.0, ph);
        }
      }
      if (std::abs(b) > 0.0) ang = std::remainder(std::arg(a) - std::arg(b), 2.0 * std::numbers::pi);
    }
  }
}

}  // namespace

Matrix FrameCorrection::apply(const Matrix& sim) const {
  if (sim.rows() != (Eigen::Index{1} << n_qubits()) || sim.cols() != sim.rows()) {
    throw std::invalid_argument("FrameCorrection::apply: dimension mismatch");
  }
  Matrix out = sim;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) *= std::polar(1.0, bit_phase(post, i) + bit_phase(pre, j));
  }
  return out;
}

FrameCorrection FrameCorrection::repeated(int copies) const {
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");
  FrameCorrection out;
  for (int c = 0; c < copies; ++c) {
    out.pre.insert(out.pre.end(), pre.begin(), pre.end());
    out.post.insert(out.post.end(), post.begin(), post.end());
  }
  return out;
}

FrameFit fit_frame_correction(const Matrix& sim, const ComplexOperator& target) {
  if (sim.rows() != target.dim() || sim.cols() != target.dim()) {
    throw std::invalid_argument("fit_frame_correction: dimension mismatch");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < target.dim()) ++n;
  if ((Eigen::Index{1} << n) != target.dim()) throw std::invalid_argument("fit_frame_correction: dimension is not 2^n");
  const Matrix w = target.matrix().conjugate().cwiseProduct(sim);
  const double d2 = static_cast<double>(target.dim()) * static_cast<double>(target.dim());

  FrameFit best{FrameCorrection::identity(n), std::norm(w.sum()) / d2};
  // A handful of fixed starting points guards against the rare local optimum.
  const int n_starts = 1 + 4 * n;
  for (int s = 0; s < n_starts; ++s) {
    FrameCorrection f = FrameCorrection::identity(n);
    for (int q = 0; q < n && s > 0; ++q) {
      f.pre[q] = std::remainder(2.399963229728653 * (s * 2 * n + q), 2.0 * std::numbers::pi);
      f.post[q] = std::remainder(2.399963229728653 * (s * 2 * n + n + q), 2.0 * std::numbers::pi);
    }
    double last = -1.0;
    for (int sweep = 0; sweep < 500; ++sweep) {
      ascend(w, f);
      const double v = std::norm(corrected_trace(w, f)) / d2;
      if (v - last < 1e-15) break;
      last = v;
    }
    const double v = std::norm(corrected_trace(w, f)) / d2;
    if (v > best.fidelity) best = {f, v};
  }
  return best;
}

RealizationError::RealizationError(int realization, const std::string& what)
    : std::runtime_error("realization " + std::to_string(realization) + ": " + what), realization_(realization) {}

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0, c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + c;
}

FidelityResult averaged_infidelity(const std::function<RealizationOutcome(int)>& run, double alpha,
                                   int n_realizations, int n_threads) {
  if (n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  const int n = alpha == 0.0 ? 1 : n_realizations;
  std::vector<RealizationOutcome> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < n; r = next++) {
      try {
        out[r] = run(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(n_threads, 1, n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (int r = 0; r < n; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw RealizationError(r, e.what());
    }
  }

  std::vector<double> f(n), l(n);
  for (int r = 0; r < n; ++r) {
    f[r] = out[r].fidelity;
    l[r] = out[r].leakage;
  }
  FidelityResult res;
  res.n_realizations = n;
  res.mean_fidelity = compensated_sum(f) / n;
  res.mean_leakage = compensated_sum(l) / n;
  if (n > 1) {
    std::vector<double> dev(n);
    for (int r = 0; r < n; ++r) dev[r] = (f[r] - res.mean_fidelity) * (f[r] - res.mean_fidelity);
    res.std_error = std::sqrt(compensated_sum(dev) / (n - 1) / n);
  }
  return res;
}

}  // namespace ffsim
