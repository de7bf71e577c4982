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

#ifndef PARACZ_CIRCUIT_HPP_
#define PARACZ_CIRCUIT_HPP_

#include <array>

#include "paracz/units.hpp"

namespace paracz {

// Lumped-element description of two transmons sharing a SQUID coupler.
// SI units throughout.
struct CircuitParams {
  std::array<double, 2> junction_inductance{};   // qubit junction, H
  std::array<double, 2> geometric_inductance{};  // H
  std::array<double, 2> shunt_capacitance{};     // F
  double mutual_capacitance = 0.0;               // F
  double squid_inductance_zero_flux = 0.0;       // H
  // Critical-current ratio of the two SQUID junctions (small/large), in (0, 1].
  double squid_junction_ratio = 1.0;
  double anharmonicity_exponent = 2.0;

  // Throws ValidationError.
  void validate() const;

  // Effective SQUID asymmetry d = (1 - r) / (1 + r).
  double squid_asymmetry() const;

  // The fitted two-transmon device.
  static CircuitParams fitted_device();
};

struct FluxBias {
  double phi = 0.0;  // in units of the flux quantum
};

struct Couplings {
  double inductive = 0.0;   // g_L, rad/s
  double capacitive = 0.0;  // g_C, rad/s
  double total = 0.0;       // g_s = g_L - g_C
};

struct DerivedSpectrum {
  std::array<double, 2> omega{};
  std::array<double, 2> anharmonicity{};
  double g_inductive = 0.0;
  double g_capacitive = 0.0;
  double g_static = 0.0;
  double zeta_static = 0.0;
};

struct ParametricStrength {
  double g_p = 0.0;                  // 1/2 |dg_s/dphi| amplitude
  double slope_product_estimate = 0.0;  // 1/2 sqrt(|w_L'| |w_R'|) amplitude
};

inline constexpr double kFluxDerivativeStep = 1e-5;
inline constexpr double kZZDivergenceTolerance = kTwoPi * 1e6;

double squid_inductance(const CircuitParams& p, FluxBias bias);

double charging_frequency(const CircuitParams& p, Qubit k);  // E_c / hbar
double transmon_frequency(const CircuitParams& p, Qubit k, FluxBias bias);
double anharmonicity(const CircuitParams& p, Qubit k, FluxBias bias);
Couplings static_couplings(const CircuitParams& p, FluxBias bias);

// Second-order static ZZ. Throws DivergenceError when |delta - alpha_L| or
// |delta + alpha_R| is below tolerance.
double zz_static(double g_s, double delta, double alpha_L, double alpha_R,
                 double tolerance = kZZDivergenceTolerance);

DerivedSpectrum derived_spectrum(const CircuitParams& p, FluxBias bias);

// Central differences in phi with kFluxDerivativeStep.
double frequency_slope(const CircuitParams& p, Qubit k, FluxBias bias);
double frequency_curvature(const CircuitParams& p, Qubit k, FluxBias bias);
double coupling_slope(const CircuitParams& p, FluxBias bias);

ParametricStrength parametric_strength(const CircuitParams& p, FluxBias bias,
                                       double pump_amplitude);

// Gamma_phi = dphi |dw/dphi| with dphi = sqrt_A * sqrt(|ln(w_ir tau)|).
// sqrt_A_flux is the 1/f noise amplitude in flux quanta.
double flux_dephasing_rate(const CircuitParams& p, Qubit k, FluxBias bias,
                           double sqrt_A_flux, double ir_cutoff, double tau);

// Root of g_s on (0, 0.5), to |g_s| < 2 pi kHz. Throws NoSignChangeError.
FluxBias cancellation_flux(const CircuitParams& p);

}  // namespace paracz

#endif  // PARACZ_CIRCUIT_HPP_
