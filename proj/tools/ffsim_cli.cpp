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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ffsim/calibration.hpp"
#include "ffsim/sweep.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<double> dt;
  std::optional<int> threads;
  std::vector<int> ks;
  std::vector<double> alphas;
  bool no_verify = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--realizations", c.realizations, "noise realizations per cell")->check(CLI::PositiveNumber);
  app->add_option("--dt", c.dt, "base integration step, ns")->check(CLI::PositiveNumber);
  app->add_option("--threads", c.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app->add_option("--k", c.ks, "separation multiples");
  app->add_option("--alpha", c.alphas, "noise amplitudes, V/m");
  app->add_flag("--no-verify", c.no_verify, "skip the step-halving check");
}

ffsim::SweepConfig resolve(const Common& c) {
  ffsim::SweepConfig cfg = c.config.empty() ? ffsim::SweepConfig{} : ffsim::load_sweep_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) cfg.experiment.noise.master_seed = *c.seed;
  if (c.realizations) cfg.n_realizations = *c.realizations;
  if (c.dt) cfg.experiment.propagation.dt = *c.dt;
  if (c.threads) cfg.threads = *c.threads;
  if (!c.ks.empty()) cfg.r_multiples = c.ks;
  if (!c.alphas.empty()) cfg.alphas = c.alphas;
  if (c.no_verify) cfg.verify_convergence = false;
  cfg.validate();
  return cfg;
}

int report(const ffsim::SweepResult& res, const ffsim::SweepConfig& cfg, const std::string& stem) {
  const auto files = ffsim::emit(res, cfg, cfg.output_dir, stem);
  std::cout << ffsim::format_table(res);
  std::cerr << "wrote " << files.table.string() << " and " << files.manifest.string() << "\n";
  int failed = 0;
  for (const auto& r : res.rows) failed += r.ok() ? 0 : 1;
  if (failed > 0) std::cerr << failed << " cell(s) failed; see the manifest\n";
  return failed > 0 ? 2 : 0;
}

void write_json(const std::string& dir, const std::string& name, const nlohmann::json& j) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  std::cerr << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flip-flop qubit parallel gate simulator"};
  app.require_subcommand(1);

  Common c1q, c2q, cbase, ccal, cnoise;
  std::string gate1q, gate_base, gate_cal = "rz";  // empty: take the gate from --config
  double cal_angle = ffsim::kMinusHalfPi;
  double noise_alpha = 1.0;
  int noise_traces = 64, noise_samples = 1 << 14;

  auto* p1q = app.add_subcommand("run-parallel-1q", "two parallel one-qubit gates over the (k, alpha) grid");
  add_common(p1q, c1q);
  p1q->add_option("--gate", gate1q, "rz or rx (default: config gate, else rz)")->check(CLI::IsMember({"rz", "rx"}));

  auto* p2q = app.add_subcommand("run-parallel-2q", "two parallel sqrt(iSWAP) couples over the (k, alpha) grid");
  add_common(p2q, c2q);

  auto* pbase = app.add_subcommand("baseline", "parallel gates without inter-copy interaction");
  add_common(pbase, cbase);
  pbase->add_option("--gate", gate_base, "rz, rx or sqrt_iswap")->check(CLI::IsMember({"rz", "rx", "sqrt_iswap"}));

  auto* pcal = app.add_subcommand("calibrate", "solve the hold time of a z rotation");
  add_common(pcal, ccal);
  pcal->add_option("--gate", gate_cal, "rz or sqrt_iswap (corrective step)")
      ->check(CLI::IsMember({"rz", "sqrt_iswap"}));
  pcal->add_option("--angle", cal_angle, "target angle, rad");

  auto* pnoise = app.add_subcommand("noise-verify", "periodogram check of the 1/f synthesis");
  add_common(pnoise, cnoise);
  pnoise->add_option("--noise-alpha", noise_alpha, "amplitude, V/m")->check(CLI::PositiveNumber);
  pnoise->add_option("--traces", noise_traces, "ensemble size")->check(CLI::PositiveNumber);
  pnoise->add_option("--samples", noise_samples, "samples per trace")->check(CLI::Range(16, 1 << 24));

  CLI11_PARSE(app, argc, argv);

  try {
    if (p1q->parsed()) {
      const auto cfg = resolve(c1q);
      const auto gate = gate1q.empty() ? cfg.gate : ffsim::gate_kind_from_string(gate1q);
      return report(ffsim::run_parallel_single_qubit(gate, cfg), cfg, "parallel_" + ffsim::to_string(gate));
    }
    if (p2q->parsed()) {
      const auto cfg = resolve(c2q);
      return report(ffsim::run_parallel_two_qubit(cfg), cfg, "parallel_sqrt_iswap");
    }
    if (pbase->parsed()) {
      const auto cfg = resolve(cbase);
      const auto gate = gate_base.empty() ? cfg.gate : ffsim::gate_kind_from_string(gate_base);
      return report(ffsim::run_noninteracting_baseline(gate, cfg), cfg, "baseline_" + ffsim::to_string(gate));
    }
    if (pcal->parsed()) {
      const auto cfg = resolve(ccal);
      const auto kind = ffsim::gate_kind_from_string(gate_cal);
      const double vt = kind == ffsim::GateKind::sqrt_iswap ? ffsim::sqrt_iswap_schedule().vt
                                                            : ffsim::rz_schedule().vt;
      const auto cal = ffsim::calibrate_hold(kind, cal_angle, cfg.experiment.device.with_tunnel_coupling(vt),
                                             cfg.experiment.propagation);
      const nlohmann::json j = {{"gate", gate_cal},       {"target_angle_rad", cal_angle},
                                {"hold_ns", cal.hold},    {"achieved_angle_rad", cal.angle},
                                {"fidelity", cal.fidelity}, {"evaluations", cal.evaluations},
                                {"version", ffsim::kVersion}, {"timestamp_utc", ffsim::utc_timestamp()},
                                {"config", ffsim::to_json(cfg)}};
      std::printf("hold %.6f ns  angle %.9f rad  fidelity %.9f\n", cal.hold, cal.angle, cal.fidelity);
      write_json(cfg.output_dir, "calibration_" + gate_cal + ".json", j);
      return 0;
    }
    if (pnoise->parsed()) {
      const auto cfg = resolve(cnoise);
      const auto& ns = cfg.experiment.noise;
      const auto spec = ns.spec(noise_alpha);
      const auto chk = ffsim::verify_spectrum(spec, noise_samples, ns.trace_dt, noise_traces);
      const bool pass = std::abs(chk.slope + 1.0) <= 0.1;
      const nlohmann::json j = {{"alpha", noise_alpha},
                                {"f_min_ghz", spec.f_min},
                                {"f_max_ghz", spec.f_max},
                                {"trace_dt_ns", ns.trace_dt},
                                {"traces", noise_traces},
                                {"samples", noise_samples},
                                {"band_frequency_ghz", chk.band_frequency},
                                {"band_power", chk.band_power},
                                {"slope", chk.slope},
                                {"pooled_cross_correlation", chk.pooled_cross_correlation},
                                {"slope_within_0.1", pass},
                                {"version", ffsim::kVersion},
                                {"timestamp_utc", ffsim::utc_timestamp()},
                                {"config", ffsim::to_json(cfg)}};
      std::printf("log-log slope %.4f (%s)  cross-correlation %.4f\n", chk.slope, pass ? "ok" : "out of range",
                  chk.pooled_cross_correlation);
      write_json(cfg.output_dir, "noise_verify.json", j);
      return pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
