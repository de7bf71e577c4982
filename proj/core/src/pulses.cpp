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

#include "paracz/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "paracz/error.hpp"

namespace paracz {
namespace {

double hann_rise(double t, double rise) {
  const double s = std::sin(kPi * t / (2.0 * rise));
  return s * s;
}

}  // namespace

const char* to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::kHannEdges:
      return "hann_edges";
    case EnvelopeKind::kPureHann:
      return "pure_hann";
    case EnvelopeKind::kRectangular:
      return "rectangular";
  }
  return "?";
}

EnvelopeKind envelope_kind_from_string(const std::string& s) {
  if (s == "hann_edges") return EnvelopeKind::kHannEdges;
  if (s == "pure_hann") return EnvelopeKind::kPureHann;
  if (s == "rectangular") return EnvelopeKind::kRectangular;
  throw ValidationError("unknown envelope kind '" + s + "'");
}

Envelope Envelope::hann_edges(double rise, double plateau, double fall) {
  return Envelope{EnvelopeKind::kHannEdges, rise, plateau, fall};
}

Envelope Envelope::pure_hann(double duration) {
  return Envelope{EnvelopeKind::kPureHann, 0.5 * duration, 0.0, 0.5 * duration};
}

Envelope Envelope::rectangular(double duration) {
  return Envelope{EnvelopeKind::kRectangular, 0.0, duration, 0.0};
}

double Envelope::area() const { return 0.5 * rise + plateau + 0.5 * fall; }

double Envelope::squared_area() const {
  return 0.375 * rise + plateau + 0.375 * fall;
}

void Envelope::validate() const {
  if (!(rise >= 0.0 && plateau >= 0.0 && fall >= 0.0))
    throw ValidationError("envelope segments must be non-negative");
  if (!(duration() > 0.0) || !std::isfinite(duration()))
    throw ValidationError("envelope duration must be positive");
  if (kind == EnvelopeKind::kPureHann &&
      (plateau != 0.0 || std::abs(rise - fall) > 1e-15 * duration()))
    throw ValidationError("pure_hann envelope needs plateau = 0 and rise = fall");
  if (kind == EnvelopeKind::kRectangular && (rise != 0.0 || fall != 0.0))
    throw ValidationError("rectangular envelope has no rise or fall");
}

double envelope_value(const Envelope& env, double t) {
  const double total = env.duration();
  if (t < 0.0 || t > total) return 0.0;
  if (t < env.rise) return hann_rise(t, env.rise);
  const double fall_start = env.rise + env.plateau;
  if (t <= fall_start) return 1.0;
  return hann_rise(total - t, env.fall);
}

double PumpTone::value(double t) const {
  const double e = envelope_value(envelope, t - start);
  if (e == 0.0) return 0.0;
  return amplitude * e * std::cos(omega_p * t + phase);
}

void PumpTone::validate() const {
  if (!(omega_p > 0.0) || !std::isfinite(omega_p))
    throw ValidationError("pump frequency must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw ValidationError("pump amplitude must be non-negative");
  if (!std::isfinite(phase) || !std::isfinite(start))
    throw ValidationError("pump phase and start must be finite");
  envelope.validate();
}

FluxBias flux_waveform(FluxBias phi_s, const std::vector<PumpTone>& tones,
                       double t) {
  double phi = phi_s.phi;
  for (const PumpTone& tone : tones) phi += tone.value(t);
  return FluxBias{phi};
}

double PulseSchedule::max_excursion() const {
  double a = 0.0;
  for (const PumpTone& tone : tones) a += tone.amplitude;
  return a;
}

double PulseSchedule::end_time() const {
  double t = 0.0;
  for (const PumpTone& tone : tones) t = std::max(t, tone.end());
  return t;
}

double PulseSchedule::max_pump_frequency() const {
  double w = 0.0;
  for (const PumpTone& tone : tones) w = std::max(w, tone.omega_p);
  return w;
}

void PulseSchedule::validate() const {
  if (!std::isfinite(bias.phi)) throw ValidationError("flux bias must be finite");
  for (const PumpTone& tone : tones) tone.validate();
}

double rectified_shift(double omega_second_derivative, double pump_amplitude) {
  return 0.25 * omega_second_derivative * pump_amplitude * pump_amplitude;
}

double calibrate_pump_amplitude(double measured_shift,
                                double omega_second_derivative) {
  if (measured_shift == 0.0) return 0.0;
  if (omega_second_derivative == 0.0 ||
      (measured_shift > 0.0) != (omega_second_derivative > 0.0))
    throw SignMismatchError("measured shift and frequency curvature differ in sign");
  return 2.0 * std::sqrt(measured_shift / omega_second_derivative);
}

double PumpLineCalibration::lambda(double omega_p) const {
  if (table.empty()) throw ValidationError("empty pump-line calibration");
  if (table.size() == 1) {
    if (omega_p != table.front().first)
      throw DomainError("frequency outside the calibrated range");
    return table.front().second;
  }
  if (omega_p < table.front().first || omega_p > table.back().first)
    throw DomainError("frequency outside the calibrated range");
  auto it = std::upper_bound(
      table.begin(), table.end(), omega_p,
      [](double w, const std::pair<double, double>& e) { return w < e.first; });
  if (it == table.end()) return table.back().second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double u = (omega_p - lo.first) / (hi.first - lo.first);
  return lo.second + u * (hi.second - lo.second);
}

double PumpLineCalibration::compensated_amplitude(double target_amplitude,
                                                  double omega_p) const {
  return target_amplitude * lambda(omega_p);
}

void PumpLineCalibration::validate() const {
  if (table.empty()) throw ValidationError("empty pump-line calibration");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].second > 0.0))
      throw ValidationError("lambda samples must be positive");
    if (i > 0 && !(table[i].first > table[i - 1].first))
      throw ValidationError("calibration table must be strictly sorted by frequency");
  }
  if (std::abs(lambda(reference_frequency) - 1.0) > 1e-9)
    throw ValidationError("lambda at the reference frequency must be 1");
}

void PumpLineCalibration::write_csv(std::ostream& out) const {
  out << "omega_hz,lambda\n";
  out << std::setprecision(17);
  for (const auto& [w, l] : table) out << hertz(w) << ',' << l << '\n';
}

PumpLineCalibration PumpLineCalibration::read_csv(std::istream& in,
                                                  double reference_frequency) {
  PumpLineCalibration cal;
  cal.reference_frequency = reference_frequency;
  std::string line;
  if (!std::getline(in, line) || line.rfind("omega_hz", 0) != 0)
    throw ValidationError("calibration CSV must start with an omega_hz,lambda header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double f = 0.0, l = 0.0;
    char comma = 0;
    if (!(row >> f >> comma >> l) || comma != ',')
      throw ValidationError("malformed calibration row: " + line);
    cal.table.emplace_back(angular(f), l);
  }
  cal.validate();
  return cal;
}

PumpLineCalibration build_compensation(
    std::vector<std::pair<double, double>> rectification_samples,
    double reference_frequency) {
  if (rectification_samples.empty())
    throw ValidationError("no rectification samples");
  std::sort(rectification_samples.begin(), rectification_samples.end());
  PumpLineCalibration cal;
  cal.reference_frequency = reference_frequency;
  for (const auto& [w, shift] : rectification_samples) {
    if (shift == 0.0 || !std::isfinite(shift))
      throw ZeroShiftError("rectification sample with zero shift");
    cal.table.emplace_back(w, 1.0 / std::sqrt(std::abs(shift)));
  }
  const double norm = cal.lambda(reference_frequency);
  for (auto& entry : cal.table) entry.second /= norm;
  cal.validate();
  return cal;
}

}  // namespace paracz
