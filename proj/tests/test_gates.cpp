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
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "paracz/error.hpp"
#include "paracz/experiments.hpp"
#include "paracz/gates.hpp"

using namespace paracz;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

Device device_at_cancellation() {
  Device d;
  d.circuit = CircuitParams::fitted_device();
  d.bias = cancellation_flux(d.circuit);
  d.hilbert = HilbertConfig{3, Frame::kLab};
  return d;
}

Matrix4 diag(cd a, cd b, cd c, cd e) {
  Matrix4 u = Matrix4::Zero();
  u.diagonal() << a, b, c, e;
  return u;
}

cd phase(double x) { return std::polar(1.0, x); }

// Bisection for swapfree_phase_integral(a) = pi.
double solve_swapfree(const Device& d, double wp, double t_g, double zeta_s) {
  double lo = 0.0, hi = 0.1;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = swapfree_phase_integral(d, wp, mid, t_g, zeta_s);
    (std::abs(f) < kPi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("conditional phase") {
  CHECK(conditional_phase(ideal_cz()) == Approx(kPi));
  CHECK(conditional_phase(Matrix4::Identity()) == Approx(0.0));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const double b = u(rng), g = u(rng), l = u(rng), r = u(rng);
    CHECK(phase_distance(conditional_phase(diag(1, phase(b), phase(g), phase(b + g + kPi))), kPi) < 1e-12);
    const Matrix4 zl = diag(1, phase(l), 1, phase(l));
    const Matrix4 zr = diag(1, 1, phase(r), phase(r));
    const Matrix4 cz = ideal_cz() * diag(1, phase(b), phase(g), 1);
    CHECK(phase_distance(conditional_phase(zl * cz * zr), conditional_phase(cz)) < 1e-12);
  }
  CHECK_THROWS_AS(conditional_phase(ideal_iswap()), NonDiagonalError);
}

TEST_CASE("single-qubit phases and virtual Z") {
  const Matrix4 u = diag(phase(0.3), phase(0.3 + 0.1), phase(0.3 - 0.7), phase(0.3 + 0.1 - 0.7 + kPi));
  const auto sq = single_qubit_phases(u);
  // Block order gg, ge, eg, ee: (eg/gg, ge/gg) = (-0.7, 0.1).
  CHECK(sq[0] == Approx(-0.7));
  CHECK(sq[1] == Approx(0.1));
  const HilbertConfig cfg{3, Frame::kLab};
  const Matrix z = virtual_z(cfg, 0.4, -1.1);
  CHECK(std::abs(z(cfg.index(2, 1), cfg.index(2, 1)) - std::polar(1.0, -(2 * 0.4 - 1.1))) < 1e-14);
  const Matrix4 block = computational_block(z, cfg);
  CHECK(std::abs(block(2, 2) - std::polar(1.0, -0.4)) < 1e-14);
  CHECK(std::abs(block(1, 1) - std::polar(1.0, 1.1)) < 1e-14);
  CHECK(wrap_phase(kPi) == Approx(kPi));
  CHECK(wrap_phase(-kPi) == Approx(kPi));
  CHECK(wrap_phase(3.0 * kPi / 2.0) == Approx(-kPi / 2.0));
}

TEST_CASE("idle gate") {
  const Device d = device_at_cancellation();
  const GateSpec idle = idle_gate(40e-9);
  const GateReport r = gate_report(d, idle, std::nullopt);
  CHECK((r.computational_unitary - Matrix4::Identity()).norm() < 1e-6);
  CHECK(r.leakage < 1e-12);
  const auto vz = calibrate_virtual_z(d, idle);
  CHECK(std::abs(vz[0]) < 1e-6);
  CHECK(std::abs(vz[1]) < 1e-6);
  CHECK_THROWS_AS(idle_gate(0.0).validate(), ValidationError);
}

TEST_CASE("p-SWAP cZ compilation") {
  const Device d = device_at_cancellation();
  const double k = pump_coupling_per_amplitude(d);

  CompileOptions open;
  open.refine = false;
  open.pump_frequency = GHz(0.78);
  const GateSpec rect = compile_pswap_cz(d, 40e-9, Envelope::rectangular(40e-9), open);
  // sqrt2 g_p / 2 pi = 12.5 MHz completes the 2 pi rotation in 40 ns.
  CHECK(std::sqrt(2.0) * k * rect.gate_tone->amplitude == Approx(MHz(12.5)).epsilon(1e-12));
  CHECK_THROWS_AS(compile_pswap_cz(d, 2e-9, Envelope::rectangular(2e-9), open), AmplitudeRangeError);

  const GateSpec g = compile_pswap_cz(d, 50e-9, Envelope::hann_edges(10e-9, 30e-9, 10e-9));
  const Matrix u = simulate_gate(d, g);
  const HilbertConfig& cfg = d.hilbert;
  CHECK(std::norm(u(cfg.index(0, 0), cfg.index(0, 0))) > 1.0 - 1e-4);
  const GateReport r = gate_report(d, g, std::nullopt);
  CHECK(phase_distance(r.conditional_phase, kPi) < 0.01);
  CHECK(r.leakage < 1e-3);
  CHECK(std::abs(r.single_qubit_phases[0]) < 1e-3);
  CHECK(std::abs(r.single_qubit_phases[1]) < 1e-3);

  // A virtual-Z pair never changes the conditional phase.
  GateSpec twisted = g;
  twisted.virtual_z = {g.virtual_z[0] + 0.8, g.virtual_z[1] - 2.1};
  const GateReport t = gate_report(d, twisted, std::nullopt);
  CHECK(phase_distance(t.conditional_phase, r.conditional_phase) < 1e-9);
  CHECK(std::abs(t.single_qubit_phases[0]) > 0.5);
}

TEST_CASE("SWAP-free cZ compilation") {
  const Device d = device_at_cancellation();
  const double wp = dispersive_pump_frequency(d);
  const double zeta_s = diagonalize_static(d.circuit, d.bias, d.hilbert).zeta;
  const GateSpec g = compile_swapfree_cz(d, 60e-9);
  CHECK(g.gate_tone->envelope.kind == EnvelopeKind::kPureHann);
  CHECK(g.gate_tone->omega_p == Approx(wp).epsilon(1e-12));
  const GateReport r = gate_report(d, g, std::nullopt);
  CHECK(phase_distance(r.conditional_phase, kPi) < 0.01);
  CHECK(r.leakage < 1e-3);

  // The quasi-static integral at the open-loop amplitude.
  const double a = solve_swapfree(d, wp, 60e-9, zeta_s);
  CHECK(std::abs(swapfree_phase_integral(d, wp, a, 60e-9, zeta_s)) == Approx(kPi).epsilon(1e-9));
  // A 1% change of a -2 MHz static ZZ moves the amplitude by under 2%.
  const double a1 = solve_swapfree(d, wp, 60e-9, MHz(-2));
  const double a2 = solve_swapfree(d, wp, 60e-9, 1.01 * MHz(-2));
  CHECK(std::abs(a2 / a1 - 1.0) < 0.02);

  // A 30 ns pure Hann needs a 44.4 MHz peak ZZ.
  CHECK(Envelope::pure_hann(30e-9).squared_area() * MHz(44.4444444444444) == Approx(kPi).epsilon(1e-12));
}

TEST_CASE("a compiled cZ flips the Ramsey phase") {
  const Device d = device_at_cancellation();
  const GateSpec g = compile_swapfree_cz(d, 60e-9);
  CrossRamseyOptions o;
  o.interleaved = simulate_gate(d, g);
  const double base = cross_ramsey_phase_difference(d, Qubit::L, 100e-9);
  const double flipped = cross_ramsey_phase_difference(d, Qubit::L, 100e-9, o);
  CHECK(phase_distance(flipped - base, kPi) < 0.05);
}

TEST_CASE("iSWAP compilation") {
  const Device d = device_at_cancellation();
  const double k = pump_coupling_per_amplitude(d);
  CompileOptions open;
  open.refine = false;
  open.pump_frequency = GHz(0.6);
  // 2 g_p / 2 pi = 100 MHz swaps in 5 ns.
  const GateSpec fast = compile_iswap(d, Envelope::rectangular(5e-9), open);
  CHECK(2.0 * k * fast.gate_tone->amplitude == Approx(MHz(100)).epsilon(1e-12));

  const GateSpec g = compile_iswap(d, Envelope::hann_edges(10e-9, 40e-9, 10e-9));
  const Matrix u = simulate_gate(d, g);
  const HilbertConfig& cfg = d.hilbert;
  CHECK(std::norm(u(cfg.index(0, 1), cfg.index(1, 0))) >= 0.999);
  CHECK(std::norm(u(cfg.index(0, 0), cfg.index(0, 0))) > 1.0 - 1e-4);
  const GateReport r = gate_report(d, g, std::nullopt);
  CHECK(std::isnan(r.conditional_phase));
  // The ee phase carries the pump-induced ZZ and is not part of the target.
  const Matrix4 diff = r.computational_unitary - ideal_iswap();
  CHECK(diff.topLeftCorner<3, 3>().cwiseAbs().maxCoeff() < 0.01);
  CHECK(std::abs(r.computational_unitary(3, 3)) > 0.999);
}

TEST_CASE("gate specs") {
  CHECK(gate_kind_from_string("pswap_cz") == GateKind::kPswapCz);
  CHECK(std::string(to_string(GateKind::kSwapfreeCz)) == "swapfree_cz");
  CHECK_THROWS_AS(gate_kind_from_string("cnot"), ValidationError);
  GateSpec g;
  g.kind = GateKind::kPswapCz;
  g.duration = 50e-9;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g.gate_tone = PumpTone{GHz(0.78), 0.01, 0.0, Envelope::pure_hann(60e-9), 0.0};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  CHECK((target_unitary(GateKind::kSwapfreeCz) - ideal_cz()).norm() == 0.0);
  CHECK((target_unitary(GateKind::kIdle) - Matrix4::Identity()).norm() == 0.0);
}
