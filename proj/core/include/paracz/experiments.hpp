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
#ifndef PARACZ_EXPERIMENTS_HPP_
#define PARACZ_EXPERIMENTS_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paracz/dynamics.hpp"

namespace paracz {

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;

  std::vector<double> values() const;
  void validate() const;
};

struct SweepGrid {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  std::uint64_t seed = 0;

  void validate() const;
};

// Population of |to> after a rectangular tone at pump_center + detuning,
// starting in |from>. Rows follow axis1 (detuning, rad/s), columns axis2
// (time, s). In the two-level frame the transition must be eg <-> ge.
struct ChevronMap {
  std::vector<double> detunings;
  std::vector<double> times;
  Eigen::MatrixXd population;

  void write_csv(std::ostream& out) const;
};

struct ChevronSpec {
  BasisLabel from{1, 0};
  BasisLabel to{0, 1};
  double amplitude = 0.0;
};

ChevronMap chevron_scan(const Device& device, double pump_center,
                        const ChevronSpec& spec, const SweepGrid& grid);

// Second-order ZZ with the pumped-frame splitting delta_p = Delta - omega_p.
double zeta_parametric(double g_p, double delta_p, double alpha_L,
                       double alpha_R, double tolerance = kZZDivergenceTolerance);

// Frequency of transmon k measured from the Floquet spectrum of a constant
// tone, and the dressed-curvature prediction omega'' a^2 / 4.
struct RectificationMeasurement {
  double shift = 0.0;
  double predicted = 0.0;
  double curvature = 0.0;  // dressed omega_k'', rad/s per flux quantum^2
};

double dressed_frequency_curvature(const Device& device, Qubit k);
RectificationMeasurement measure_rectification(const Device& device, Qubit k,
                                               double omega_p, double amplitude);

// Rectified shifts of transmon k at each pump frequency for a line whose
// delivered amplitude is line_amplitude(omega_p).
std::vector<std::pair<double, double>> rectification_sweep(
    const Device& device, Qubit k, const std::vector<double>& omegas,
    const std::vector<double>& delivered_amplitudes);

struct CrossRamseyOptions {
  std::optional<PumpTone> tone;  // frequency, amplitude, phase; envelope is set here
  double ramp = 20e-9;           // Hann ramps of the tone inside the delay
  double start_time = 0.0;       // absolute time of the first pi/2 pulse
  // Applied in the rotating frame at the middle of the delay.
  std::optional<Matrix> interleaved;
  int phase_points = 16;
};

struct CrossRamseyResult {
  double phase = 0.0;     // phase accumulated by the target's |e>, rad
  double contrast = 0.0;  // peak-to-peak
  double residual = 0.0;  // RMS fit residual
};

// Throws FitError when contrast < 0.1.
CrossRamseyResult cross_ramsey(const Device& device, Qubit target,
                               bool control_prepared, double delay,
                               const CrossRamseyOptions& options = {});

// Phase difference (control in e) - (control in g) for one delay.
double cross_ramsey_phase_difference(const Device& device, Qubit target,
                                     double delay,
                                     const CrossRamseyOptions& options = {});

// zeta_total from the slope of the phase difference between two delays. The
// 2 pi ambiguity of the slope is resolved towards zeta_hint.
struct CrossRamseyZeta {
  double zeta = 0.0;
  double uncertainty = 0.0;
};
CrossRamseyZeta cross_ramsey_zeta(const Device& device, Qubit target,
                                  double delay_short, double delay_long,
                                  const CrossRamseyOptions& options = {},
                                  double zeta_hint = 0.0);

struct ZZCancellationOptions {
  int coarse_points = 9;
  double ramp = 20e-9;
  int short_periods = 8;     // plateau of the short cross-Ramsey delay
  double long_extra = 200e-9;  // extra plateau of the long delay, rounded to periods
  double target = kHz(1.0);
  int max_refinements = 8;
  bool refine = true;
  double min_detuning = MHz(20.0);
};

struct ZZCancellationResult {
  double pump_amplitude_star = 0.0;
  std::vector<std::pair<double, double>> zeta_total_curve;  // (amplitude, rad/s)
  double uncertainty = 0.0;  // on zeta_total at amplitude_star, rad/s
  double coarse_amplitude = 0.0;
  double coarse_amplitude_uncertainty = 0.0;
  std::array<double, 3> quadratic_fit{};  // c0 + c1 a + c2 a^2
  double fit_relative_rms = 0.0;
  double refined_zeta = 0.0;
  std::vector<std::pair<double, double>> refinement;  // (amplitude, cross-Ramsey zeta)
};

// Throws NoRootError, ValidationError when omega_p sits near a resonance.
ZZCancellationResult zz_cancellation_search(
    const Device& device, double omega_p, std::pair<double, double> amplitude_range,
    const ZZCancellationOptions& options = {});

// Flux where the diagonalized static ZZ equals target, searched on
// [lo, hi] by bisection.
FluxBias flux_for_static_zz(const Device& device, double target_zeta, double lo,
                            double hi);

// Pump frequency halfway between the single-photon (eg-ge) and the
// two-photon (ee-fg) resonances.
double dispersive_pump_frequency(const Device& device);

struct SubharmonicOptions {
  Qubit qubit = Qubit::L;
  double window = MHz(25.0);  // half-width around omega_k / n
  int coarse_points = 251;
};

struct SubharmonicPoint {
  int n = 1;
  double omega_p = 0.0;
  double max_transfer = 0.0;
};

// Peak |g> -> |e> transfer of transmon k near omega_k / n, estimated from
// the Floquet decomposition of one pump period.
std::vector<SubharmonicPoint> subharmonic_scan(const Device& device,
                                               const std::vector<int>& n_range,
                                               double amplitude,
                                               const SubharmonicOptions& options = {});

// Long-time bound on |g> -> |e> transfer at one pump frequency.
double floquet_transfer(const Device& device, double omega_p, double amplitude,
                        Qubit k);

// Largest |e> population of transmon k reached within duration (time domain).
double driven_transfer(const Device& device, double omega_p, double amplitude,
                       Qubit k, double duration, double sample_interval);

struct DecoherenceLimit {
  double main = 0.0;        // (2/5)(G1 + 2 G2) t_g
  double t2_star = 0.0;     // (2/5)(G1 + 2 G2*) t_g
  double minimal = 0.0;     // (4/5) G1 t_g
  double t2_equals_t1 = 0.0;  // (6/5) G1 t_g
};

DecoherenceLimit decoherence_limit(double t_g, double t1_eff, double t2_eff,
                                   std::optional<double> t2_star_eff = std::nullopt);

}  // namespace paracz

#endif  // PARACZ_EXPERIMENTS_HPP_
