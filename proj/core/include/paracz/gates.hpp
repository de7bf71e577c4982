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
#ifndef PARACZ_GATES_HPP_
#define PARACZ_GATES_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paracz/dynamics.hpp"

namespace paracz {

using Matrix4 = Eigen::Matrix4cd;

enum class GateKind { kIswap, kPswapCz, kSwapfreeCz, kIdle };

const char* to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& s);

enum class TwoPhotonPath { kFg, kGf };

struct GateSpec {
  GateKind kind = GateKind::kIdle;
  std::optional<PumpTone> gate_tone;
  std::optional<PumpTone> cancellation_tone;
  double duration = 0.0;
  std::array<double, 2> virtual_z{0.0, 0.0};  // Z(theta) = exp(-i theta n)

  std::vector<PumpTone> tones() const;
  void validate() const;
};

GateSpec idle_gate(double duration);

// Computational block ordered (gg, ge, eg, ee), first letter = qubit L.
struct GateReport {
  Matrix4 computational_unitary = Matrix4::Identity();
  double conditional_phase = 0.0;
  double leakage = 0.0;
  std::array<double, 2> single_qubit_phases{0.0, 0.0};
};

// Target unitaries in the computational block.
Matrix4 ideal_cz();
Matrix4 ideal_iswap();
Matrix4 target_unitary(GateKind kind);

// exp(-i (theta_L n_L + theta_R n_R)) on the full space of cfg.
Matrix virtual_z(const HilbertConfig& cfg, double theta_L, double theta_R);

std::array<int, 4> computational_indices(const HilbertConfig& cfg);
Matrix4 computational_block(const Matrix& u, const HilbertConfig& cfg);

// arg u_ee - arg u_eg - arg u_ge + arg u_gg, wrapped to (-pi, pi].
// Throws NonDiagonalError unless |u_ii| > 0.9 for all i.
double conditional_phase(const Matrix4& u);
// (arg(u_eg/u_gg), arg(u_ge/u_gg)).
std::array<double, 2> single_qubit_phases(const Matrix4& u);

double wrap_phase(double x);            // to (-pi, pi]
double phase_distance(double a, double b);  // |wrap(a - b)|

// Rotating-frame (dressed, computational frame) unitary over [0, duration],
// including the gate's virtual-Z correction.
Matrix simulate_gate(const Device& device, const GateSpec& gate);

std::array<double, 2> calibrate_virtual_z(const Device& device,
                                          const GateSpec& gate);

GateReport gate_report(const Device& device, const GateSpec& gate,
                       const std::optional<DecoherenceParams>& dec);

struct CompileOptions {
  TwoPhotonPath path = TwoPhotonPath::kFg;
  // Zero selects the pump frequency automatically.
  double pump_frequency = 0.0;
  std::optional<PumpTone> cancellation_tone;
  // Closed-loop refinement on the simulated gate after the open-loop solve.
  bool refine = true;
  double max_amplitude = 0.1;
};

// Pump strength per unit flux amplitude, 1/2 |dg_s/dphi|.
double pump_coupling_per_amplitude(const Device& device);

// Rectified resonance of |from> <-> |to> under a rectangular tone of the
// given amplitude, found by bisection on the symmetric response of a
// simulated pi-pulse chevron. guess is the starting pump frequency.
double chevron_center(const Device& device, BasisLabel from, BasisLabel to,
                      double amplitude, double coupling, double guess);

// Pump frequency of |from> <-> |to> with second-order rectification.
double rectified_transition(const Device& device, BasisLabel from, BasisLabel to,
                            double amplitude);

GateSpec compile_pswap_cz(const Device& device, double t_g, const Envelope& env,
                          const CompileOptions& options = {});
GateSpec compile_swapfree_cz(const Device& device, double t_g,
                             const CompileOptions& options = {});
GateSpec compile_iswap(const Device& device, const Envelope& env,
                       const CompileOptions& options = {});

// Quasi-static integral of (zeta_g(t) + zeta_static) over a pure-Hann gate
// of peak amplitude a.
double swapfree_phase_integral(const Device& device, double omega_p,
                               double amplitude, double t_g,
                               double static_zeta);

}  // namespace paracz

#endif  // PARACZ_GATES_HPP_
