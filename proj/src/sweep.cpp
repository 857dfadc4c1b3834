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

#include "ffsim/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ffsim/calibration.hpp"

namespace ffsim {

using nlohmann::json;

int SweepConfig::thread_count() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void SweepConfig::validate() const {
  if (r_multiples.empty()) throw std::invalid_argument("r_multiples must not be empty");
  for (int k : r_multiples) {
    if (k < 1) throw std::invalid_argument("r_multiples entries must be >= 1");
  }
  if (alphas.empty()) throw std::invalid_argument("alphas must not be empty");
  for (double a : alphas) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("alphas must be finite and >= 0");
  }
  if (n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  experiment.device.validate();
  experiment.propagation.validate();
  experiment.noise.validate();
}

namespace {

const char* shape_name(RampShape s) { return s == RampShape::cosine ? "cosine" : "linear"; }

RampShape shape_from(const std::string& s) {
  if (s == "linear") return RampShape::linear;
  if (s == "cosine") return RampShape::cosine;
  throw std::invalid_argument("unknown ramp_shape: " + s);
}

const char* method_name(PropagationSettings::Method m) {
  return m == PropagationSettings::Method::rk4 ? "rk4" : "piecewise_expm";
}

PropagationSettings::Method method_from(const std::string& s) {
  if (s == "piecewise_expm") return PropagationSettings::Method::piecewise_expm;
  if (s == "rk4") return PropagationSettings::Method::rk4;
  throw std::invalid_argument("unknown propagation method: " + s);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) throw std::invalid_argument(std::string("unknown key in ") + where + ": " + it.key());
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json device_json(const DeviceParams& p) {
  return {{"b0", p.b0},
          {"delta_gamma", p.delta_gamma},
          {"gamma_e", p.gamma_e},
          {"gamma_n", p.gamma_n},
          {"donor_depth", p.donor_depth},
          {"tunnel_coupling", p.tunnel_coupling},
          {"hyperfine_bulk_mhz", p.hyperfine_bulk_mhz},
          {"hyperfine_fit", p.hyperfine_fit},
          {"eps_r", p.eps_r},
          {"pitch", p.pitch}};
}

}  // namespace

SweepConfig sweep_config_from_json(const json& j, SweepConfig cfg) {
  check_keys(j,
             {"gate", "r_multiples", "alphas", "n_realizations", "threads", "verify_convergence", "output_dir",
              "ramp_shape", "device", "noise", "propagation"},
             "config");
  if (j.contains("gate")) cfg.gate = gate_kind_from_string(j.at("gate").get<std::string>());
  read(j, "r_multiples", cfg.r_multiples);
  read(j, "alphas", cfg.alphas);
  read(j, "n_realizations", cfg.n_realizations);
  read(j, "threads", cfg.threads);
  read(j, "verify_convergence", cfg.verify_convergence);
  read(j, "output_dir", cfg.output_dir);
  if (j.contains("ramp_shape")) cfg.experiment.shape = shape_from(j.at("ramp_shape").get<std::string>());
  if (j.contains("device")) {
    const json& d = j.at("device");
    check_keys(d,
               {"b0", "delta_gamma", "gamma_e", "gamma_n", "donor_depth", "tunnel_coupling", "hyperfine_bulk_mhz",
                "hyperfine_fit", "eps_r", "pitch"},
               "device");
    DeviceParams& p = cfg.experiment.device;
    read(d, "b0", p.b0);
    read(d, "delta_gamma", p.delta_gamma);
    read(d, "gamma_e", p.gamma_e);
    read(d, "gamma_n", p.gamma_n);
    read(d, "donor_depth", p.donor_depth);
    read(d, "tunnel_coupling", p.tunnel_coupling);
    read(d, "hyperfine_bulk_mhz", p.hyperfine_bulk_mhz);
    read(d, "hyperfine_fit", p.hyperfine_fit);
    read(d, "eps_r", p.eps_r);
    read(d, "pitch", p.pitch);
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, {"trace_dt", "f_min", "f_max", "n_components", "master_seed", "common_mode"}, "noise");
    NoiseSettings& s = cfg.experiment.noise;
    read(n, "trace_dt", s.trace_dt);
    read(n, "f_min", s.f_min);
    read(n, "f_max", s.f_max);
    read(n, "n_components", s.n_components);
    read(n, "common_mode", s.common_mode);
    read(n, "master_seed", s.master_seed);
  }
  if (j.contains("propagation")) {
    const json& p = j.at("propagation");
    check_keys(p, {"dt", "angle_step", "drive_steps_per_period", "method", "convergence_tol", "max_halvings"},
               "propagation");
    PropagationSettings& s = cfg.experiment.propagation;
    read(p, "dt", s.dt);
    read(p, "angle_step", s.angle_step);
    read(p, "drive_steps_per_period", s.drive_steps_per_period);
    if (p.contains("method")) s.method = method_from(p.at("method").get<std::string>());
    read(p, "convergence_tol", s.convergence_tol);
    read(p, "max_halvings", s.max_halvings);
  }
  cfg.validate();
  return cfg;
}

json to_json(const SweepConfig& cfg) {
  const auto& e = cfg.experiment;
  return {{"gate", to_string(cfg.gate)},
          {"r_multiples", cfg.r_multiples},
          {"alphas", cfg.alphas},
          {"n_realizations", cfg.n_realizations},
          {"threads", cfg.threads},
          {"verify_convergence", cfg.verify_convergence},
          {"output_dir", cfg.output_dir},
          {"ramp_shape", shape_name(e.shape)},
          {"device", device_json(e.device)},
          {"noise",
           {{"trace_dt", e.noise.trace_dt},
            {"f_min", e.noise.f_min},
            {"f_max", e.noise.f_max},
            {"n_components", e.noise.n_components},
            {"common_mode", e.noise.common_mode},
            {"master_seed", e.noise.master_seed}}},
          {"propagation",
           {{"dt", e.propagation.dt},
            {"angle_step", e.propagation.angle_step},
            {"drive_steps_per_period", e.propagation.drive_steps_per_period},
            {"method", method_name(e.propagation.method)},
            {"convergence_tol", e.propagation.convergence_tol},
            {"max_halvings", e.propagation.max_halvings}}}};
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed config " + path.string() + ": " + e.what());
  }
  return sweep_config_from_json(j);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

json protocol_json(const GateProtocol& g, const ExperimentSettings& settings) {
  const NoiseSpec band = settings.noise.spec(1.0);
  json j = {{"gate", to_string(g.kind)},
            {"tunnel_coupling_ghz", g.params.tunnel_coupling},
            {"duration_ns", g.duration()},
            {"isolated_fidelity", g.isolated_fidelity},
            {"isolated_leakage", g.isolated_leakage},
            {"frame_pre_rad", g.frame.pre},
            {"frame_post_rad", g.frame.post},
            {"noise_f_min_ghz", band.f_min},
            {"noise_f_max_ghz", band.f_max},
            {"noise_stream_key", gate_stream_key(g.kind)}};
  json members = json::array();
  for (const auto& m : g.members) members.push_back(to_json(m));
  j["member_programs"] = members;
  if (g.kind == GateKind::sqrt_iswap) {
    const auto seq = sqrt_iswap_schedule(settings.shape);
    j["corrective_steps"] = "simultaneous";
    j["corrective_angle_rad"] = z_rotation_angle(seq.corrective, g.params, settings.propagation);
  }
  return j;
}

SweepResultRow run_cell(const ParallelExperiment& base, const SweepConfig& cfg, const CellSpec& cell) {
  SweepResultRow row;
  row.gate = base.protocol().kind;
  row.k = cell.interacting ? cell.k : 0;
  row.alpha = cell.alpha;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ExperimentSettings settings = base.settings();
    RealizationOutcome first{};
    if (cfg.verify_convergence) {
      const VerifiedOutcome v = base.run_verified(cell, 0);
      first = v.outcome;
      row.halving_change = v.halving_change;
      // The accepted pair is (dt_used·2, dt_used); the coarser member is
      // within halving_change of the finer one.
      const int halvings = v.halvings - 1;
      if (halvings > 0) settings.propagation = settings.propagation.refined(halvings);
      row.dt_used = settings.propagation.dt;
    } else {
      row.dt_used = settings.propagation.dt;
    }
    const ParallelExperiment exp(base.protocol(), settings);
    const bool verified = cfg.verify_convergence;
    row.stats = averaged_infidelity(
        [&](int r) { return (verified && r == 0) ? first : exp.run(cell, r); }, cell.alpha, cfg.n_realizations,
        cfg.thread_count());
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.stats = {nan, nan, 0, nan};
    row.error = e.what();
  }
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

SweepResult run_cells(const std::string& experiment, const SweepConfig& cfg, const std::vector<CellSpec>& cells) {
  cfg.validate();
  SweepResult out;
  out.experiment = experiment;
  out.started_utc = utc_timestamp();
  const GateProtocol protocol = GateProtocol::prepare(cfg.gate, cfg.experiment);
  out.protocol = protocol_json(protocol, cfg.experiment);
  const ParallelExperiment base(protocol, cfg.experiment);
  for (const auto& cell : cells) out.rows.push_back(run_cell(base, cfg, cell));
  out.finished_utc = utc_timestamp();
  return out;
}

namespace {

std::vector<CellSpec> grid(const SweepConfig& cfg) {
  std::vector<CellSpec> cells;
  for (int k : cfg.r_multiples) {
    for (double a : cfg.alphas) cells.push_back({k, a, true});
  }
  return cells;
}

}  // namespace

SweepResult run_parallel_single_qubit(GateKind gate, const SweepConfig& cfg) {
  if (gate_width(gate) != 1) throw std::invalid_argument("run_parallel_single_qubit needs rz or rx");
  SweepConfig c = cfg;
  c.gate = gate;
  return run_cells("run-parallel-1q", c, grid(c));
}

SweepResult run_parallel_two_qubit(const SweepConfig& cfg) {
  SweepConfig c = cfg;
  c.gate = GateKind::sqrt_iswap;
  return run_cells("run-parallel-2q", c, grid(c));
}

SweepResult run_noninteracting_baseline(GateKind gate, const SweepConfig& cfg) {
  SweepConfig c = cfg;
  c.gate = gate;
  std::vector<CellSpec> cells;
  for (double a : c.alphas) cells.push_back({1, a, false});
  return run_cells("baseline", c, cells);
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string format_row(const SweepResultRow& row) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", row.wall_time_s);
  std::ostringstream s;
  s << to_string(row.gate) << ',' << row.k << ',' << num(row.alpha) << ',' << num(row.stats.mean_fidelity) << ','
    << num(row.stats.std_error) << ',' << num(row.stats.mean_leakage) << ',' << row.stats.n_realizations << ','
    << wall;
  return s.str();
}

std::string format_table(const SweepResult& result) {
  std::string t = std::string(kTableHeader) + "\n";
  for (const auto& r : result.rows) t += format_row(r) + "\n";
  return t;
}

json manifest(const SweepResult& result, const SweepConfig& cfg) {
  json cells = json::array();
  json failed = json::array();
  for (const auto& r : result.rows) {
    json c = {{"k", r.k}, {"alpha", r.alpha}, {"dt_used_ns", r.dt_used}, {"halving_change", r.halving_change}};
    if (!r.ok()) {
      c["error"] = r.error;
      failed.push_back({{"k", r.k}, {"alpha", r.alpha}, {"error", r.error}});
    }
    cells.push_back(c);
  }
  return {{"tool", "ffsim"},
          {"version", kVersion},
          {"experiment", result.experiment},
          {"master_seed", cfg.master_seed()},
          {"started_utc", result.started_utc},
          {"finished_utc", result.finished_utc},
          {"table_header", kTableHeader},
          {"config", to_json(cfg)},
          {"protocol", result.protocol},
          {"cells", cells},
          {"failed_cells", failed}};
}

EmittedFiles emit(const SweepResult& result, const SweepConfig& cfg, const std::filesystem::path& dir,
                  const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  EmittedFiles files{dir / (stem + ".csv"), dir / (stem + ".manifest.json")};
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + p.string());
  };
  write(files.table, format_table(result));
  write(files.manifest, manifest(result, cfg).dump(2) + "\n");
  return files;
}

std::vector<SweepResultRow> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) {
    throw std::runtime_error("unexpected table header in " + path.string());
  }
  std::vector<SweepResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw std::runtime_error("malformed row in " + path.string() + ": " + line);
    SweepResultRow r;
    r.gate = gate_kind_from_string(f[0]);
    r.k = std::stoi(f[1]);
    r.alpha = std::stod(f[2]);
    r.stats.mean_fidelity = std::stod(f[3]);
    r.stats.std_error = std::stod(f[4]);
    r.stats.mean_leakage = std::stod(f[5]);
    r.stats.n_realizations = std::stoi(f[6]);
    r.wall_time_s = std::stod(f[7]);
    if (r.stats.n_realizations == 0) r.error = "failed cell";
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ffsim
