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
#ifndef PARACZ_PULSES_HPP_
#define PARACZ_PULSES_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "paracz/circuit.hpp"

namespace paracz {

enum class EnvelopeKind { kHannEdges, kPureHann, kRectangular };

const char* to_string(EnvelopeKind kind);
EnvelopeKind envelope_kind_from_string(const std::string& s);

struct Envelope {
  EnvelopeKind kind = EnvelopeKind::kRectangular;
  double rise = 0.0;
  double plateau = 0.0;
  double fall = 0.0;

  static Envelope hann_edges(double rise, double plateau, double fall);
  static Envelope pure_hann(double duration);
  static Envelope rectangular(double duration);

  double duration() const { return rise + plateau + fall; }
  // Exact integral over [0, duration].
  double area() const;
  // Exact integral of the squared envelope.
  double squared_area() const;
  void validate() const;
};

// sin^2 Hann edges, flat plateau, zero outside [0, duration].
double envelope_value(const Envelope& env, double t);

struct PumpTone {
  double omega_p = 0.0;    // rad/s
  double amplitude = 0.0;  // flux quanta
  double phase = 0.0;
  Envelope envelope;
  double start = 0.0;  // s
  // First- and second-order DRAG coefficients. Carried for calibration
  // bookkeeping; they do not act on the waveform.
  std::array<double, 2> drag{0.0, 0.0};

  double end() const { return start + envelope.duration(); }
  double value(double t) const;  // this tone's contribution to phi(t)
  void validate() const;
};

FluxBias flux_waveform(FluxBias phi_s, const std::vector<PumpTone>& tones,
                       double t);

struct PulseSchedule {
  FluxBias bias;
  std::vector<PumpTone> tones;

  double flux(double t) const { return flux_waveform(bias, tones, t).phi; }
  // Upper bound on |phi(t) - phi_s|.
  double max_excursion() const;
  double end_time() const;
  double max_pump_frequency() const;
  void validate() const;
};

// delta_omega = omega'' a^2 / 4.
double rectified_shift(double omega_second_derivative, double pump_amplitude);

// Inverse of rectified_shift. Throws SignMismatchError.
double calibrate_pump_amplitude(double measured_shift,
                                double omega_second_derivative);

struct PumpLineCalibration {
  double reference_frequency = 0.0;
  std::vector<std::pair<double, double>> table;  // (omega_p, lambda)

  // Linear interpolation; throws DomainError outside the table.
  double lambda(double omega_p) const;
  // Generator amplitude that delivers target_amplitude at omega_p.
  double compensated_amplitude(double target_amplitude, double omega_p) const;
  void validate() const;

  void write_csv(std::ostream& out) const;
  static PumpLineCalibration read_csv(std::istream& in, double reference_frequency);
};

// lambda(w) proportional to 1/sqrt|shift(w)|, normalized at the reference.
// Throws ZeroShiftError.
PumpLineCalibration build_compensation(
    std::vector<std::pair<double, double>> rectification_samples,
    double reference_frequency);

}  // namespace paracz

#endif  // PARACZ_PULSES_HPP_
