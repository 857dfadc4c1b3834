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

#include "ffsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ffsim {

using RealMatrix = Eigen::MatrixXd;

void PropagationSettings::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("propagation dt must be > 0");
  if (!(angle_step > 0.0)) throw std::invalid_argument("angle_step must be > 0");
  if (drive_steps_per_period < 4) throw std::invalid_argument("drive_steps_per_period must be >= 4");
  if (!(convergence_tol > 0.0 && convergence_tol < 1.0)) throw std::invalid_argument("convergence_tol in (0,1)");
  if (max_halvings < 1) throw std::invalid_argument("max_halvings must be >= 1");
}

PropagationSettings PropagationSettings::refined(int times) const {
  PropagationSettings out = *this;
  const double f = std::ldexp(1.0, -times);
  out.dt *= f;
  out.angle_step *= f;
  out.drive_steps_per_period <<= times;
  return out;
}

double SubspacePropagator::mean_leakage() const {
  if (leakage.empty()) return 0.0;
  return std::accumulate(leakage.begin(), leakage.end(), 0.0) / static_cast<double>(leakage.size());
}

double ArraySystem::duration() const {
  double d = 0.0;
  for (const auto& f : fields) d = std::max(d, f.total_duration());
  return d;
}

void ArraySystem::validate() const {
  if (fields.empty()) throw std::invalid_argument("ArraySystem has no sites");
  if (params.size() != fields.size()) throw std::invalid_argument("ArraySystem needs one DeviceParams per site");
  if (fields.size() > 6) throw std::invalid_argument("ArraySystem supports at most 6 sites");
  for (const auto& p : params) p.validate();
  for (const auto& b : bonds) {
    if (b.a < 0 || b.b < 0 || b.a >= n_sites() || b.b >= n_sites() || b.a == b.b) {
      throw std::invalid_argument("bond refers to an invalid site pair");
    }
    if (!std::isfinite(b.strength)) throw std::invalid_argument("bond strength must be finite");
  }
}

std::vector<long long> computational_projector(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 6) throw std::invalid_argument("computational_projector supports 1..6 qubits");
  const unsigned n_states = 1u << n_qubits;
  std::vector<long long> out(n_states);
  for (unsigned c = 0; c < n_states; ++c) {
    long long idx = 0;
    for (int q = 0; q < n_qubits; ++q) {
      const bool one = (c >> (n_qubits - 1 - q)) & 1u;
      idx = idx * basis::kSiteDim + (one ? basis::kLogicalOne : basis::kLogicalZero);
    }
    out[c] = idx;
  }
  return out;
}

long long sector_index_of(unsigned bits, int m) {
  long long idx = 0;
  for (int q = 0; q < m; ++q) {
    const bool one = (bits >> (m - 1 - q)) & 1u;
    idx = idx * 4 + (one ? kSectorOne : kSectorZero);
  }
  return idx;
}

namespace {

constexpr double kRk4Phase = 0.02;  // rad

long long ipow4(int m) { return 1LL << (2 * m); }

std::vector<double> merged_breakpoints(const ArraySystem& system) {
  const double total = system.duration();
  std::vector<double> pts{0.0, total};
  for (const auto& f : system.fields) {
    for (double t : f.schedule().breakpoints()) pts.push_back(t);
    if (f.noisy()) {
      const double step = f.trace().dt;
      const auto n = static_cast<long long>(std::floor(total / step + 1e-9));
      for (long long k = 1; k <= n; ++k) pts.push_back(step * static_cast<double>(k));
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double t : pts) {
    if (t < 0.0 || t > total + 1e-12) continue;
    if (out.empty() || t - out.back() > 1e-9) out.push_back(t);
  }
  return out;
}

// |dθ/dt| of the orbital mixing angle, rad/ns.
double angle_rate(const DeviceParams& p, double field, double slope) {
  const double eps = orbital_splitting(p, field);
  return p.tunnel_coupling * p.dipole_frequency_per_field() * std::abs(slope) / (eps * eps);
}

double max_angle_rate(const ArraySystem& system, int site, double a, double b) {
  const auto& f = system.fields[site];
  double slope = f.schedule().max_slope_on(a, b);
  if (f.noisy()) {
    const double t1 = std::min(b, f.trace().duration());
    if (t1 > a) slope += std::abs(f.trace().at(t1) - f.trace().at(a)) / (t1 - a);
  }
  if (slope == 0.0) return 0.0;
  double rate = 0.0;
  for (double t : {a, 0.5 * (a + b), b}) rate = std::max(rate, angle_rate(system.params[site], f.sample(t).dEz, slope));
  return rate;
}

// Connected components of the coupling graph; bonds of zero strength are
// treated as absent so uncoupled sites evolve separately.
std::vector<std::vector<int>> components(const ArraySystem& system) {
  std::vector<int> parent(system.n_sites());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& b : system.bonds) {
    if (b.strength != 0.0) parent[find(b.a)] = find(b.b);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> slot(system.n_sites(), -1);
  for (int s = 0; s < system.n_sites(); ++s) {
    const int r = find(s);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(s);
  }
  return out;
}

// psi <- exp(-i 2π t h) psi for real symmetric h.
void apply_exponential(const RealMatrix& h, double t_ns, Matrix& psi) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed during propagation");
  const double w = 2.0 * std::numbers::pi * t_ns;
  const RealMatrix& v = es.eigenvectors();
  Matrix coeff = v.transpose() * psi;
  for (Eigen::Index i = 0; i < coeff.rows(); ++i) coeff.row(i) *= std::polar(1.0, -w * es.eigenvalues()(i));
  psi.noalias() = v * coeff;
}

void rk4_step(const ArraySystem& system, const std::vector<int>& sites, double t0, double h, Matrix& psi) {
  const Complex f = -kI * (2.0 * std::numbers::pi);
  const RealMatrix h0 = sector_hamiltonian(system, sites, t0);
  const RealMatrix hm = sector_hamiltonian(system, sites, t0 + 0.5 * h);
  const RealMatrix h1 = sector_hamiltonian(system, sites, t0 + h);
  const Matrix k1 = f * (h0 * psi);
  const Matrix k2 = f * (hm * (psi + 0.5 * h * k1));
  const Matrix k3 = f * (hm * (psi + 0.5 * h * k2));
  const Matrix k4 = f * (h1 * (psi + h * k3));
  psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Matrix evolve_component(const ArraySystem& system, const std::vector<int>& sites, const std::vector<TimeStep>& grid,
                        const PropagationSettings& settings) {
  const int m = static_cast<int>(sites.size());
  const long long dim = ipow4(m);
  const unsigned n_cols = 1u << m;
  Matrix psi = Matrix::Zero(dim, n_cols);
  for (unsigned c = 0; c < n_cols; ++c) psi(sector_index_of(c, m), c) = 1.0;

  // Fourth-order commutator-free Magnus with two Gauss-Legendre nodes.
  const double s3 = std::sqrt(3.0);
  const double c1 = 0.5 - s3 / 6.0;
  const double c2 = 0.5 + s3 / 6.0;
  const double a1 = (3.0 - 2.0 * s3) / 12.0;
  const double a2 = (3.0 + 2.0 * s3) / 12.0;

  for (const auto& st : grid) {
    if (settings.method == PropagationSettings::Method::rk4) {
      // Substeps keep the phase advanced per step below kRk4Phase.
      const double bound = sector_hamiltonian(system, sites, st.t0 + 0.5 * st.h).cwiseAbs().rowwise().sum().maxCoeff();
      const double h_rk = std::min(settings.dt, kRk4Phase / (2.0 * std::numbers::pi * std::max(bound, 1e-12)));
      const int n = std::max(1, static_cast<int>(std::ceil(st.h / h_rk - 1e-9)));
      for (int i = 0; i < n; ++i) rk4_step(system, sites, st.t0 + st.h * i / n, st.h / n, psi);
      continue;
    }
    if (st.exact) {
      apply_exponential(sector_hamiltonian(system, sites, st.t0 + 0.5 * st.h), st.h, psi);
      continue;
    }
    const RealMatrix h1 = sector_hamiltonian(system, sites, st.t0 + c1 * st.h);
    const RealMatrix h2 = sector_hamiltonian(system, sites, st.t0 + c2 * st.h);
    apply_exponential(a2 * h1 + a1 * h2, st.h, psi);
    apply_exponential(a1 * h1 + a2 * h2, st.h, psi);
  }

  Matrix block(n_cols, n_cols);
  for (unsigned r = 0; r < n_cols; ++r) block.row(r) = psi.row(sector_index_of(r, m));
  return block;
}

}  // namespace

std::vector<TimeStep> time_grid(const ArraySystem& system, const PropagationSettings& settings) {
  const auto pts = merged_breakpoints(system);
  std::vector<TimeStep> grid;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    bool is_static = true;
    double h_max = settings.dt;
    for (int s = 0; s < system.n_sites(); ++s) {
      const auto& f = system.fields[s];
      if (f.noisy() || !f.schedule().is_static_on(a, b)) is_static = false;
      const double rate = max_angle_rate(system, s, a, b);
      if (rate > 0.0) h_max = std::min(h_max, settings.angle_step / rate);
      const auto& d = f.schedule().drive;
      if (d && d->t_on > 0.0 && a < d->t_start + d->t_on && b > d->t_start && d->frequency > 0.0) {
        h_max = std::min(h_max, 1.0 / (settings.drive_steps_per_period * d->frequency));
      }
    }
    if (is_static) {
      grid.push_back({a, b - a, true});
      continue;
    }
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h_max - 1e-9)));
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) grid.push_back({a + h * k, h, false});
  }
  return grid;
}

Eigen::MatrixXd sector_hamiltonian(const ArraySystem& system, const std::vector<int>& sites, double t) {
  const int m = static_cast<int>(sites.size());
  const long long dim = ipow4(m);
  std::vector<Eigen::Matrix4d> blocks(m);
  std::vector<Eigen::Matrix2d> proj(m);
  for (int s = 0; s < m; ++s) {
    const int site = sites[s];
    const FieldSample f = system.fields[site].sample(t);
    blocks[s] = build_site_block(system.params[site], f.dEz, f.eac).real();
    proj[s] = interface_projector(system.params[site], f.dEz).real();
  }
  RealMatrix h = RealMatrix::Zero(dim, dim);
  std::vector<long long> stride(m);
  for (int s = 0; s < m; ++s) stride[s] = ipow4(m - 1 - s);

  for (long long idx = 0; idx < dim; ++idx) {
    for (int s = 0; s < m; ++s) {
      const int d = static_cast<int>((idx / stride[s]) % 4);
      for (int e = 0; e < 4; ++e) h(idx, idx + (e - d) * stride[s]) += blocks[s](d, e);
    }
  }

  for (const auto& bond : system.bonds) {
    if (bond.strength == 0.0) continue;
    const auto ia = std::find(sites.begin(), sites.end(), bond.a);
    const auto ib = std::find(sites.begin(), sites.end(), bond.b);
    if (ia == sites.end() || ib == sites.end()) continue;
    const int sa = static_cast<int>(ia - sites.begin());
    const int sb = static_cast<int>(ib - sites.begin());
    // Π ⊗ 1_spin on each site: only the orbital digit (d / 2) changes.
    for (long long idx = 0; idx < dim; ++idx) {
      const int oa = static_cast<int>((idx / stride[sa]) % 4) / 2;
      const int ob = static_cast<int>((idx / stride[sb]) % 4) / 2;
      for (int pa = 0; pa < 2; ++pa) {
        for (int pb = 0; pb < 2; ++pb) {
          const double v = bond.strength * proj[sa](oa, pa) * proj[sb](ob, pb);
          if (v == 0.0) continue;
          h(idx, idx + (pa - oa) * 2 * stride[sa] + (pb - ob) * 2 * stride[sb]) += v;
        }
      }
    }
  }
  return h;
}

SubspacePropagator evolve(const ArraySystem& system, const PropagationSettings& settings) {
  system.validate();
  settings.validate();
  const auto grid = time_grid(system, settings);
  const int n = system.n_sites();
  const unsigned n_states = 1u << n;

  Matrix full = Matrix::Ones(n_states, n_states);
  for (const auto& comp : components(system)) {
    const Matrix block = evolve_component(system, comp, grid, settings);
    const int m = static_cast<int>(comp.size());
    for (unsigned r = 0; r < n_states; ++r) {
      for (unsigned c = 0; c < n_states; ++c) {
        unsigned lr = 0, lc = 0;
        for (int q = 0; q < m; ++q) {
          const int shift = n - 1 - comp[q];
          lr = (lr << 1) | ((r >> shift) & 1u);
          lc = (lc << 1) | ((c >> shift) & 1u);
        }
        full(r, c) *= block(lr, lc);
      }
    }
  }

  SubspacePropagator out;
  out.matrix = std::move(full);
  out.leakage.resize(n_states);
  for (unsigned c = 0; c < n_states; ++c) out.leakage[c] = std::max(0.0, 1.0 - out.matrix.col(c).squaredNorm());
  return out;
}

VerifiedPropagation evolve_verified(const ArraySystem& system, PropagationSettings settings,
                                    const AcceptanceMetric& metric) {
  settings.validate();
  SubspacePropagator coarse = evolve(system, settings);
  double coarse_value = metric(coarse);
  double change = 0.0;
  for (int k = 1; k <= settings.max_halvings; ++k) {
    const PropagationSettings fine = settings.refined(k);
    SubspacePropagator refined = evolve(system, fine);
    const double value = metric(refined);
    change = std::abs(value - coarse_value);
    if (change < settings.convergence_tol) return {std::move(refined), fine.dt, change, k};
    coarse = std::move(refined);
    coarse_value = value;
  }
  std::ostringstream msg;
  msg << "step-halving did not converge: last change " << change << " exceeds " << settings.convergence_tol
      << " after " << settings.max_halvings << " halvings from dt = " << settings.dt << " ns";
  throw ConvergenceError(msg.str());
}

}  // namespace ffsim
