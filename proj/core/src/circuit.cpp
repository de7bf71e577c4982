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

#include "paracz/circuit.hpp"

#include <cmath>
#include <string>

#include "paracz/error.hpp"

namespace paracz {
namespace {

FluxBias shifted(FluxBias b, double d) { return FluxBias{b.phi + d}; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string(what) + " must be positive and finite");
}

double total_inductance(const CircuitParams& p, Qubit k, FluxBias bias) {
  const int i = index(k);
  return p.junction_inductance[i] + p.geometric_inductance[i] +
         squid_inductance(p, bias);
}

}  // namespace

void CircuitParams::validate() const {
  for (int i = 0; i < 2; ++i) {
    require_positive(junction_inductance[i], "junction_inductance");
    require_positive(geometric_inductance[i], "geometric_inductance");
    require_positive(shunt_capacitance[i], "shunt_capacitance");
  }
  require_positive(mutual_capacitance, "mutual_capacitance");
  require_positive(squid_inductance_zero_flux, "squid_inductance_zero_flux");
  if (!(squid_junction_ratio > 0.0 && squid_junction_ratio <= 1.0))
    throw ValidationError("squid_junction_ratio must lie in (0, 1]");
  if (!(anharmonicity_exponent >= 0.0) || !std::isfinite(anharmonicity_exponent))
    throw ValidationError("anharmonicity_exponent must be non-negative");
}

double CircuitParams::squid_asymmetry() const {
  return (1.0 - squid_junction_ratio) / (1.0 + squid_junction_ratio);
}

CircuitParams CircuitParams::fitted_device() {
  CircuitParams p;
  p.junction_inductance = {7.37e-9, 7.64e-9};
  p.geometric_inductance = {0.16e-9, 0.22e-9};
  p.shunt_capacitance = {83.48e-15, 65.15e-15};
  p.mutual_capacitance = 7.34e-15;
  p.squid_inductance_zero_flux = 0.23e-9;
  p.squid_junction_ratio = 0.75;
  p.anharmonicity_exponent = 2.0;
  return p;
}

double squid_inductance(const CircuitParams& p, FluxBias bias) {
  const double d = p.squid_asymmetry();
  const double c = std::cos(kPi * bias.phi);
  const double s = std::sin(kPi * bias.phi);
  return p.squid_inductance_zero_flux / std::sqrt(c * c + d * d * s * s);
}

double charging_frequency(const CircuitParams& p, Qubit k) {
  using namespace constants;
  const double ec = kElementaryCharge * kElementaryCharge /
                    (2.0 * p.shunt_capacitance[index(k)]);
  return ec / kHbar;
}

double transmon_frequency(const CircuitParams& p, Qubit k, FluxBias bias) {
  const double l = total_inductance(p, k, bias);
  return 1.0 / std::sqrt(l * p.shunt_capacitance[index(k)]) -
         charging_frequency(p, k);
}

double anharmonicity(const CircuitParams& p, Qubit k, FluxBias bias) {
  const double participation =
      p.junction_inductance[index(k)] / total_inductance(p, k, bias);
  return -charging_frequency(p, k) *
         std::pow(participation, p.anharmonicity_exponent);
}

Couplings static_couplings(const CircuitParams& p, FluxBias bias) {
  const double ls = squid_inductance(p, bias);
  const double wl = transmon_frequency(p, Qubit::L, bias);
  const double wr = transmon_frequency(p, Qubit::R, bias);
  const double mean = std::sqrt(wl * wr);
  const auto& lj = p.junction_inductance;
  const auto& c = p.shunt_capacitance;
  const double cm = p.mutual_capacitance;
  Couplings g;
  g.inductive = 0.5 * ls / std::sqrt((lj[0] + ls) * (lj[1] + ls)) * mean;
  g.capacitive = 0.5 * cm / std::sqrt((c[0] + cm) * (c[1] + cm)) * mean;
  g.total = g.inductive - g.capacitive;
  return g;
}

double zz_static(double g_s, double delta, double alpha_L, double alpha_R,
                 double tolerance) {
  const double a = delta - alpha_L;
  const double b = delta + alpha_R;
  if (std::abs(a) < tolerance || std::abs(b) < tolerance)
    throw DivergenceError("zz_static: detuning within tolerance of a two-photon resonance");
  return 2.0 * g_s * g_s * (alpha_L + alpha_R) / (a * b);
}

DerivedSpectrum derived_spectrum(const CircuitParams& p, FluxBias bias) {
  DerivedSpectrum s;
  for (Qubit k : {Qubit::L, Qubit::R}) {
    s.omega[index(k)] = transmon_frequency(p, k, bias);
    s.anharmonicity[index(k)] = anharmonicity(p, k, bias);
  }
  const Couplings g = static_couplings(p, bias);
  s.g_inductive = g.inductive;
  s.g_capacitive = g.capacitive;
  s.g_static = g.total;
  s.zeta_static = zz_static(g.total, s.omega[1] - s.omega[0], s.anharmonicity[0],
                            s.anharmonicity[1]);
  return s;
}

double frequency_slope(const CircuitParams& p, Qubit k, FluxBias bias) {
  const double h = kFluxDerivativeStep;
  return (transmon_frequency(p, k, shifted(bias, h)) -
          transmon_frequency(p, k, shifted(bias, -h))) /
         (2.0 * h);
}

double frequency_curvature(const CircuitParams& p, Qubit k, FluxBias bias) {
  const double h = 100.0 * kFluxDerivativeStep;
  return (transmon_frequency(p, k, shifted(bias, h)) -
          2.0 * transmon_frequency(p, k, bias) +
          transmon_frequency(p, k, shifted(bias, -h))) /
         (h * h);
}

double coupling_slope(const CircuitParams& p, FluxBias bias) {
  const double h = kFluxDerivativeStep;
  return (static_couplings(p, shifted(bias, h)).total -
          static_couplings(p, shifted(bias, -h)).total) /
         (2.0 * h);
}

ParametricStrength parametric_strength(const CircuitParams& p, FluxBias bias,
                                       double pump_amplitude) {
  if (!(pump_amplitude >= 0.0))
    throw ValidationError("pump amplitude must be non-negative");
  ParametricStrength s;
  s.g_p = 0.5 * std::abs(coupling_slope(p, bias)) * pump_amplitude;
  s.slope_product_estimate =
      0.5 *
      std::sqrt(std::abs(frequency_slope(p, Qubit::L, bias)) *
                std::abs(frequency_slope(p, Qubit::R, bias))) *
      pump_amplitude;
  return s;
}

double flux_dephasing_rate(const CircuitParams& p, Qubit k, FluxBias bias,
                           double sqrt_A_flux, double ir_cutoff, double tau) {
  if (!(tau > 0.0) || !(ir_cutoff > 0.0))
    throw ValidationError("flux_dephasing_rate needs tau > 0 and ir_cutoff > 0");
  const double dphi =
      sqrt_A_flux * std::sqrt(std::abs(std::log(ir_cutoff * tau)));
  return dphi * std::abs(frequency_slope(p, k, bias));
}

FluxBias cancellation_flux(const CircuitParams& p) {
  auto g = [&](double phi) { return static_couplings(p, FluxBias{phi}).total; };
  constexpr int kScan = 200;
  double lo = 0.0;
  double glo = g(lo);
  double hi = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double phi = 0.5 * i / kScan;
    const double gv = g(phi);
    if ((glo < 0.0) != (gv < 0.0)) {
      hi = phi;
      break;
    }
    lo = phi;
    glo = gv;
  }
  if (hi < 0.0)
    throw NoSignChangeError("static coupling does not change sign on (0, 0.5)");
  const double tol = kHz(1.0);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) < tol && hi - lo < 1e-12) break;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return FluxBias{mid};
}

}  // namespace paracz
