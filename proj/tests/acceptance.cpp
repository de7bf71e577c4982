// Copyright 2026 The paracz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Acceptance checks. Prints one line per criterion and exits nonzero when any
// selected criterion fails. Pass criterion numbers as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "paracz/benchmarking.hpp"
#include "paracz/error.hpp"
#include "paracz/experiments.hpp"
#include "paracz/gates.hpp"
#include "paracz/optimizer.hpp"
#include "paracz/readout.hpp"

using namespace paracz;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

Device fitted_device(std::optional<double> phi = std::nullopt) {
  Device d;
  d.circuit = CircuitParams::fitted_device();
  d.bias = phi ? FluxBias{*phi} : cancellation_flux(d.circuit);
  d.hilbert = HilbertConfig{3, Frame::kLab};
  return d;
}

DecoherenceParams measured_decoherence() { return DecoherenceParams::uniform(16.3e-6, 22.7e-6); }

double mhz(double w) { return hertz(w) / 1e6; }

Verdict chevron_equivalence() {
  Device d = fitted_device();
  d.hilbert = HilbertConfig{2, Frame::kRwaTwoLevel};
  const double a = 0.004;
  const double g_p = parametric_strength(d.circuit, d.bias, a).g_p;
  const double w0 = transmon_frequency(d.circuit, Qubit::R, d.bias) -
                    transmon_frequency(d.circuit, Qubit::L, d.bias);
  SweepGrid grid;
  grid.axis1 = SweepAxis{"detuning", -3.0 * g_p, 3.0 * g_p, 9};
  grid.axis2 = SweepAxis{"time", 0.0, 4.0 * kPi / g_p, 9};
  const ChevronMap m = chevron_scan(d, w0, ChevronSpec{{1, 0}, {0, 1}, a}, grid);
  double worst = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      worst = std::max(worst, std::abs(m.population(i, j) - rwa_rabi(g_p, m.detunings[i], m.times[j])));
  return {worst < 1e-6, fmt("max population error %.2e on 9x9", worst)};
}

Verdict perturbative_zz() {
  const CircuitParams base = CircuitParams::fitted_device();
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> scale(0.8, 1.2), flux(0.0, 0.5);
  SimOptions rwa;
  rwa.counter_rotating = false;
  const HilbertConfig cfg{3, Frame::kLab};
  int accepted = 0, tried = 0;
  double worst = 0.0;
  while (accepted < 20 && tried < 100000) {
    ++tried;
    CircuitParams p = base;
    for (int k = 0; k < 2; ++k) {
      p.junction_inductance[k] *= scale(rng);
      p.geometric_inductance[k] *= scale(rng);
      p.shunt_capacitance[k] *= scale(rng);
    }
    p.mutual_capacitance *= scale(rng);
    p.squid_inductance_zero_flux *= scale(rng);
    const FluxBias phi{flux(rng)};
    DerivedSpectrum s;
    try {
      s = derived_spectrum(p, phi);
    } catch (const DivergenceError&) {
      continue;
    }
    const double delta = s.omega[1] - s.omega[0];
    // Every detuning in the perturbative denominators counts as Delta.
    const double nearest = std::min({std::abs(delta), std::abs(delta - s.anharmonicity[0]),
                                     std::abs(delta + s.anharmonicity[1])});
    if (!(std::abs(s.g_static) <= 0.1 * nearest)) continue;
    ++accepted;
    const double exact = diagonalize_static(p, phi, cfg, rwa).zeta;
    worst = std::max(worst, std::abs(s.zeta_static / exact - 1.0));
  }
  return {accepted == 20 && worst < 0.15,
          fmt("%d parameter sets, worst relative deviation %.3f", accepted, worst)};
}

Verdict rectification() {
  const Device d = fitted_device(0.0);
  std::string detail;
  bool pass = true;
  for (double a : {0.002, 0.005, 0.01}) {
    const RectificationMeasurement m = measure_rectification(d, Qubit::L, MHz(300), a);
    const double rel = std::abs(m.shift / m.predicted - 1.0);
    pass = pass && rel < 0.1;
    detail += fmt("a=%.3f: %.4f vs %.4f MHz (%.1e); ", a, mhz(m.shift), mhz(m.predicted), rel);
  }
  return {pass, detail};
}

Verdict zz_cancellation() {
  Device d = fitted_device();
  d.bias = flux_for_static_zz(d, MHz(-6), 0.3, 0.41);
  const ZZCancellationResult r = zz_cancellation_search(d, dispersive_pump_frequency(d), {0.0, 0.05});
  return {std::abs(r.refined_zeta) < kHz(10),
          fmt("phi=%.5f a*=%.6f refined zeta %.1f Hz", d.bias.phi, r.pump_amplitude_star,
              hertz(r.refined_zeta))};
}

Verdict cz_correctness() {
  const Device d = fitted_device();
  bool pass = true;
  std::string detail;
  auto check = [&](const char* name, const GateSpec& g) {
    const GateReport r = gate_report(d, g, std::nullopt);
    const double dphi = phase_distance(r.conditional_phase, kPi);
    const double sq = std::max(std::abs(r.single_qubit_phases[0]), std::abs(r.single_qubit_phases[1]));
    pass = pass && dphi < 0.01 && r.leakage < 1e-3 && sq < 1e-3;
    detail += fmt("%s: |cp-pi| %.1e leakage %.1e sq %.1e; ", name, dphi, r.leakage, sq);
  };
  check("p-SWAP 50 ns", compile_pswap_cz(d, 50e-9, Envelope::hann_edges(10e-9, 30e-9, 10e-9)));
  check("SWAP-free 60 ns", compile_swapfree_cz(d, 60e-9));
  return {pass, detail};
}

RBConfig rb_config(std::uint64_t seed) {
  RBConfig c;
  c.lengths = {1, 5, 10, 20, 40, 70, 100};
  c.sequences_per_length = 20;
  c.decoherence = measured_decoherence();
  c.seed = seed;
  return c;
}

Verdict decoherence_rb() {
  const Device d = fitted_device();
  RBConfig c = rb_config(7);
  GateSpec ideal;
  ideal.kind = GateKind::kPswapCz;
  ideal.duration = 70e-9;
  c.interleaved_gate = ideal;
  c.ideal_interleaved = true;
  const InterleavedResult r = run_interleaved_rb(d, c);
  const double eps_dec = decoherence_limit(70e-9, 16.3e-6, 22.7e-6).main;
  bool pass = std::abs(r.error / 4.2e-3 - 1.0) < 0.25;
  std::string detail = fmt("70 ns: eps %.3e +- %.1e (limit %.3e); compiled p-SWAP", r.error,
                           r.error_sigma, eps_dec);
  double last = 0.0;
  for (double t_g : {150e-9, 300e-9, 500e-9}) {
    RBConfig ci = rb_config(7);
    ci.interleaved_gate = compile_pswap_cz(d, t_g, Envelope::hann_edges(0.2 * t_g, 0.6 * t_g, 0.2 * t_g));
    const InterleavedResult ri = run_interleaved_rb(d, ci);
    pass = pass && ri.error > last;
    last = ri.error;
    detail += fmt(" %.0f ns %.3e", t_g * 1e9, ri.error);
  }
  return {pass, detail};
}

Verdict rb_math() {
  const CliffordGroup& g = CliffordGroup::instance();
  const auto sizes = g.class_sizes();
  bool closed = g.size() == 11520 && sizes == std::array<int, 4>{576, 5184, 5184, 576};
  for (int i = 0; closed && i < g.size(); ++i) {
    Matrix4 u = Matrix4::Identity();
    for (const NativeStep& s : g.element(i).decomposition) u = native_unitary(s) * u;
    closed = g.find(u) == i && g.compose(i, g.inverse(i)) == 0;
  }

  const Device d = fitted_device();
  RBConfig c;
  c.lengths = {1, 5, 10, 20, 40, 70, 100};
  c.sequences_per_length = 10;
  c.depolarizing_per_clifford = 0.01;
  c.seed = 1;
  GateSpec ideal;
  ideal.kind = GateKind::kPswapCz;
  ideal.duration = 1e-15;
  c.interleaved_gate = ideal;
  c.ideal_interleaved = true;
  const double f_ideal = run_interleaved_rb(d, c).fidelity;

  std::vector<DecayPoint> data;
  for (int n : {1, 3, 6, 10, 20, 40, 70, 100}) data.push_back({n, -0.3 * std::pow(0.97, n) + 0.5, 0.0});
  const DecayFit fit = fit_decay(data);
  const double fit_err =
      std::max({std::abs(fit.A + 0.3), std::abs(fit.P - 0.97), std::abs(fit.C - 0.5)});
  const bool trivial = interleaved_fidelity(0.97, 0.97, 2) == 1.0 &&
                       interleaved_fidelity(1.0, 0.0, 2) == 0.25;
  return {closed && f_ideal >= 0.9999 && fit_err < 1e-9 && trivial,
          fmt("group %s, ideal-gate F %.6f, fit round trip %.1e, F(1)/F(0.25) %s",
              closed ? "closed, 11520" : "BROKEN", f_ideal, fit_err, trivial ? "exact" : "wrong")};
}

Verdict optimizer_recovery() {
  Device d = fitted_device();
  d.sim.step = 5e-12;
  const GateSpec g = compile_pswap_cz(d, 50e-9, Envelope::hann_edges(10e-9, 30e-9, 10e-9));
  RBConfig rb;
  rb.decoherence = measured_decoherence();
  rb.lengths = {1, 3, 6, 10, 20, 35, 60, 100};
  rb.sequences_per_length = 40;
  rb.seed = 11;
  auto irb = [&](const GateSpec& x) {
    RBConfig c = rb;
    c.interleaved_gate = x;
    return run_interleaved_rb(d, c);
  };
  const InterleavedResult r0 = irb(g);
  GateSpec detuned = g;
  detuned.gate_tone->omega_p += MHz(2.0);
  const InterleavedResult r1 = irb(detuned);
  EsConfig es;
  es.population_m = 50;
  es.survival_rate_s = 0.2;
  es.scattering_p = 1.0;
  es.max_iterations = 30;
  es.seed = 3;
  es.initial_steps = {MHz(3.0), 0.05 * g.gate_tone->amplitude, 0.3, 0.3};
  ObjectiveSpec obj;
  obj.interleaved_count_M = 15;
  obj.repeats = 10;
  const GateOptimization opt = optimize_gate(d, detuned, es, obj, rb);
  const InterleavedResult r2 = irb(opt.gate);
  return {r2.error <= 1.1 * r0.error,
          fmt("error unperturbed %.3e, +2 MHz %.3e, after %zu iterations %.3e (ratio %.3f, "
              "pump offset %+.3f MHz)",
              r0.error, r1.error, opt.run.history.size(), r2.error, r2.error / r0.error,
              mhz(opt.gate.gate_tone->omega_p - g.gate_tone->omega_p))};
}

Verdict readout() {
  const double f = fidelity_from_pair_errors({0.030, 0.022, 0.027});
  BallModel m;
  m.centroids = {IQPoint{0.0, 0.0}, IQPoint{4.0, 0.0}, IQPoint{2.0, 2.0 * std::sqrt(3.0)}};
  const SeparationFidelity sf = separation_fidelity(m);
  std::mt19937_64 rng(11);
  const int shots = 10000;
  double worst_acc = 0.0;
  for (int b = 0; b < 3; ++b) {
    Populations p{};
    p[b == 0 ? 0 : b == 1 ? 1 : 3] = 1.0;
    const auto c = count_outcomes(simulate_shots(p, m, 100000, rng), m);
    worst_acc = std::max(worst_acc, std::abs(c[b] / 1e5 - sf.ball_fidelity[b]));
  }
  const Populations truth{0.4, 0.3, 0.2, 0.1};
  ShuffleCounts counts;
  counts.bare = count_outcomes(simulate_shots(truth, m, shots, rng), m);
  counts.pi_L = count_outcomes(simulate_shots(shuffle(truth, true, false), m, shots, rng), m);
  counts.pi_R = count_outcomes(simulate_shots(shuffle(truth, false, true), m, shots, rng), m);
  const ShuffleRecovery r = shuffle_recover(counts, m);
  double worst_z = 0.0;
  for (int s = 0; s < 4; ++s) {
    const double sigma = std::sqrt(truth[s] * (1.0 - truth[s]) / shots) * r.condition_number;
    worst_z = std::max(worst_z, std::abs(r.populations[s] - truth[s]) / sigma);
  }
  return {std::abs(f - 0.921) < 1e-12 && worst_acc < 0.01 && worst_z < 3.0,
          fmt("separation fidelity %.4f, accuracy vs erfc %.1e, shuffle recovery %.2f sigma", f,
              worst_acc, worst_z)};
}

Verdict subharmonic() {
  Device d = fitted_device();
  d.sim.direct_drive_coupling = {GHz(15.0), GHz(15.0)};
  const double wl = diagonalize_static(d.circuit, d.bias, d.hilbert).omega_L;
  const double a = 0.01;
  const auto scan = subharmonic_scan(d, {2}, a);
  const double peak = scan.at(0).max_transfer;
  const double off = floquet_transfer(d, scan.at(0).omega_p + MHz(50), a, Qubit::L);
  return {peak > 0.5 && off < 0.05,
          fmt("transfer %.3f at %.3f MHz from omega_L/2, %.1e at +50 MHz", peak,
              mhz(scan.at(0).omega_p - 0.5 * wl), off)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "chevron analytic equivalence", 10, chevron_equivalence},
      {2, "perturbative ZZ vs diagonalization", 5, perturbative_zz},
      {3, "rectification law", 120, rectification},
      {4, "ZZ cancellation", 600, zz_cancellation},
      {5, "cZ correctness", 600, cz_correctness},
      {6, "decoherence-limited RB", 1800, decoherence_rb},
      {7, "RB math", 60, rb_math},
      {8, "optimizer recovery", 3600, optimizer_recovery},
      {9, "readout", 120, readout},
      {10, "subharmonic transfer", 600, subharmonic},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d: %s %s: %s [%.1f s of %.0f s]\n", c.number, pass ? "PASS" : "FAIL",
                c.name, o.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
