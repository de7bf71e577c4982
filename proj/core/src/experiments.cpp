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
#include "paracz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <ostream>

#include <boost/math/tools/minima.hpp>

#include "paracz/error.hpp"

namespace paracz {
namespace {

const std::complex<double> kI(0.0, 1.0);

ControlledSystem system_for(const Device& device, const PulseSchedule& schedule) {
  return device.hilbert.frame == Frame::kLab
             ? lab_frame_system(device.circuit, schedule, device.hilbert, device.sim)
             : rwa_frame_system(device.circuit, schedule);
}

Matrix lab_unitary(const Device& device, const std::vector<PumpTone>& tones, double t0,
                   double t1) {
  if (tones.empty())
    return hermitian_exponential(
        build_hamiltonian(device.circuit, device.bias, device.hilbert, device.sim),
        t1 - t0);
  const PulseSchedule schedule = device.schedule(tones);
  schedule.validate();
  check_step(schedule, device.sim);
  Propagator prop(system_for(device, schedule), device.sim.step);
  return prop.unitary(t0, t1);
}

PumpTone constant_tone(double omega_p, double amplitude, double duration) {
  PumpTone t;
  t.omega_p = omega_p;
  t.amplitude = amplitude;
  t.envelope = Envelope::rectangular(duration);
  return t;
}

BasisLabel excited(Qubit k) { return k == Qubit::L ? BasisLabel{1, 0} : BasisLabel{0, 1}; }

double dressed_frequency(const Device& device, Qubit k, double phi) {
  const DressedFrame f = dressed_frame(device.circuit, FluxBias{phi}, device.hilbert, device.sim);
  const BasisLabel e = excited(k);
  return f.energy_of(e.n_L, e.n_R) - f.energy_of(0, 0);
}

void require_lab(const Device& device, const char* what) {
  if (device.hilbert.frame != Frame::kLab)
    throw ValidationError(std::string(what) + " needs the lab frame");
}

// Rotating-frame evolution over the cross-Ramsey delay.
Matrix ramsey_delay_unitary(const Device& device, double delay,
                            const CrossRamseyOptions& options) {
  const DressedFrame frame =
      dressed_frame(device.circuit, device.bias, device.hilbert, device.sim);
  std::vector<PumpTone> tones;
  if (options.tone && options.tone->amplitude > 0.0) {
    if (delay < 2.0 * options.ramp)
      throw ValidationError("cross-Ramsey delay is shorter than the tone ramps");
    PumpTone t = *options.tone;
    t.start = options.start_time;
    t.envelope = Envelope::hann_edges(options.ramp, delay - 2.0 * options.ramp, options.ramp);
    tones.push_back(t);
  }
  const double t0 = options.start_time;
  const double t1 = t0 + delay;
  if (!options.interleaved)
    return frame.to_rotating(lab_unitary(device, tones, t0, t1), t0, t1);
  const double tm = 0.5 * (t0 + t1);
  const Matrix first = frame.to_rotating(lab_unitary(device, tones, t0, tm), t0, tm);
  const Matrix second = frame.to_rotating(lab_unitary(device, tones, tm, t1), tm, t1);
  if (options.interleaved->rows() != first.rows())
    throw ValidationError("interleaved operation does not match the Hilbert space");
  return second * *options.interleaved * first;
}

CrossRamseyResult ramsey_fit(const Device& device, const Matrix& u_delay, Qubit target,
                             bool control_prepared, int phase_points) {
  const HilbertConfig& cfg = device.hilbert;
  const Qubit control = other(target);
  Vector psi = Vector::Unit(cfg.dim(), cfg.index(0, 0));
  if (control_prepared) {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    psi = embed_single_qubit(cfg, control, x) * psi;
  }
  Eigen::Matrix2cd y2;
  y2 << 1, -1, 1, 1;
  y2 /= std::sqrt(2.0);
  psi = u_delay * (embed_single_qubit(cfg, target, y2) * psi);

  const int n = phase_points;
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd p(n);
  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * j / n;
    Eigen::Matrix2cd r;
    const std::complex<double> c = std::cos(kPi / 4), s = -kI * std::sin(kPi / 4);
    r << c, s * std::exp(-kI * theta), s * std::exp(kI * theta), c;
    const Vector out = embed_single_qubit(cfg, target, r) * psi;
    double pe = 0.0;
    for (int i = 0; i < cfg.dim(); ++i) {
      const BasisLabel b = cfg.label(i);
      if ((target == Qubit::L ? b.n_L : b.n_R) == 1) pe += std::norm(out(i));
    }
    design(j, 0) = 1.0;
    design(j, 1) = std::cos(theta);
    design(j, 2) = std::sin(theta);
    p(j) = pe;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(p);
  CrossRamseyResult res;
  res.phase = std::atan2(c(1), c(2));
  res.contrast = 2.0 * std::hypot(c(1), c(2));
  res.residual = std::sqrt((design * c - p).squaredNorm() / n);
  if (res.contrast < 0.1)
    throw FitError("cross-Ramsey contrast " + std::to_string(res.contrast) + " below 0.1");
  return res;
}

double phase_sigma(const CrossRamseyResult& r, int points) {
  return r.residual / (0.5 * r.contrast) * std::sqrt(2.0 / points);
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  validate();
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = start + (stop - start) * i / (points - 1);
  return v;
}

void SweepAxis::validate() const {
  if (points < 2) throw ValidationError("sweep axis '" + name + "' needs at least two points");
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop))
    throw ValidationError("sweep axis '" + name + "' needs finite bounds with start < stop");
}

void SweepGrid::validate() const {
  axis1.validate();
  if (axis2) axis2->validate();
}

void ChevronMap::write_csv(std::ostream& out) const {
  out << "detuning_hz,time_s,population\n" << std::setprecision(12);
  for (std::size_t i = 0; i < detunings.size(); ++i)
    for (std::size_t j = 0; j < times.size(); ++j)
      out << hertz(detunings[i]) << ',' << times[j] << ',' << population(i, j) << '\n';
}

ChevronMap chevron_scan(const Device& device, double pump_center, const ChevronSpec& spec,
                        const SweepGrid& grid) {
  device.validate();
  grid.validate();
  if (!grid.axis2) throw ValidationError("chevron scan needs a time axis");
  if (!(spec.amplitude > 0.0)) throw ValidationError("chevron amplitude must be positive");
  ChevronMap map;
  map.detunings = grid.axis1.values();
  map.times = grid.axis2->values();
  std::vector<double> times = map.times;
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
    throw ValidationError("chevron times must be ascending and non-negative");
  const double t_max = times.back();
  const HilbertConfig& cfg = device.hilbert;
  const bool lab = cfg.frame == Frame::kLab;

  Vector from_state, to_state;
  if (lab) {
    const DressedFrame f = dressed_frame(device.circuit, device.bias, cfg, device.sim);
    from_state = f.basis.col(cfg.index(spec.from));
    to_state = f.basis.col(cfg.index(spec.to));
  } else {
    from_state = Vector::Unit(cfg.dim(), cfg.index(spec.from));
    to_state = Vector::Unit(cfg.dim(), cfg.index(spec.to));
  }

  map.population.resize(map.detunings.size(), times.size());
  for (std::size_t i = 0; i < map.detunings.size(); ++i) {
    PumpTone tone = constant_tone(pump_center + map.detunings[i], spec.amplitude,
                                  std::max(t_max, 1e-15));
    const PulseSchedule schedule = device.schedule({tone});
    schedule.validate();
    if (lab) check_step(schedule, device.sim);
    Propagator prop(system_for(device, schedule), device.sim.step);
    Vector psi = from_state;
    double t = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      if (times[j] > t) psi = prop.unitary(t, times[j]) * psi;
      t = times[j];
      map.population(i, j) = std::norm(to_state.dot(psi));
    }
  }
  return map;
}

double zeta_parametric(double g_p, double delta_p, double alpha_L, double alpha_R,
                       double tolerance) {
  return zz_static(g_p, delta_p, alpha_L, alpha_R, tolerance);
}

double dressed_frequency_curvature(const Device& device, Qubit k) {
  constexpr double h = 1e-3;
  const double phi = device.bias.phi;
  return (dressed_frequency(device, k, phi + h) - 2.0 * dressed_frequency(device, k, phi) +
          dressed_frequency(device, k, phi - h)) /
         (h * h);
}

RectificationMeasurement measure_rectification(const Device& device, Qubit k,
                                               double omega_p, double amplitude) {
  require_lab(device, "rectification");
  const FloquetSpectrum fs = floquet_spectrum(device, omega_p, amplitude);
  RectificationMeasurement m;
  m.shift = (k == Qubit::L ? fs.omega_L() : fs.omega_R()) -
            dressed_frequency(device, k, device.bias.phi);
  m.curvature = dressed_frequency_curvature(device, k);
  m.predicted = rectified_shift(m.curvature, amplitude);
  return m;
}

std::vector<std::pair<double, double>> rectification_sweep(
    const Device& device, Qubit k, const std::vector<double>& omegas,
    const std::vector<double>& delivered_amplitudes) {
  if (omegas.size() != delivered_amplitudes.size())
    throw ValidationError("one delivered amplitude per pump frequency is required");
  require_lab(device, "rectification");
  const double base = dressed_frequency(device, k, device.bias.phi);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const FloquetSpectrum fs = floquet_spectrum(device, omegas[i], delivered_amplitudes[i]);
    out.emplace_back(omegas[i], (k == Qubit::L ? fs.omega_L() : fs.omega_R()) - base);
  }
  return out;
}

CrossRamseyResult cross_ramsey(const Device& device, Qubit target, bool control_prepared,
                               double delay, const CrossRamseyOptions& options) {
  device.validate();
  require_lab(device, "cross-Ramsey");
  if (!(delay >= 0.0)) throw ValidationError("delay must be non-negative");
  if (options.phase_points < 3) throw ValidationError("cross-Ramsey needs three phases");
  return ramsey_fit(device, ramsey_delay_unitary(device, delay, options), target,
                    control_prepared, options.phase_points);
}

double cross_ramsey_phase_difference(const Device& device, Qubit target, double delay,
                                     const CrossRamseyOptions& options) {
  device.validate();
  require_lab(device, "cross-Ramsey");
  if (options.phase_points < 3) throw ValidationError("cross-Ramsey needs three phases");
  const Matrix u = ramsey_delay_unitary(device, delay, options);
  const double d = ramsey_fit(device, u, target, true, options.phase_points).phase -
                   ramsey_fit(device, u, target, false, options.phase_points).phase;
  return std::remainder(d, kTwoPi);
}

CrossRamseyZeta cross_ramsey_zeta(const Device& device, Qubit target, double delay_short,
                                  double delay_long, const CrossRamseyOptions& options,
                                  double zeta_hint) {
  device.validate();
  require_lab(device, "cross-Ramsey");
  if (!(delay_long > delay_short)) throw ValidationError("delays must increase");
  const int n = options.phase_points;
  double diff[2];
  double var = 0.0;
  const double delays[2] = {delay_short, delay_long};
  for (int i = 0; i < 2; ++i) {
    const Matrix u = ramsey_delay_unitary(device, delays[i], options);
    const CrossRamseyResult e = ramsey_fit(device, u, target, true, n);
    const CrossRamseyResult g = ramsey_fit(device, u, target, false, n);
    diff[i] = e.phase - g.phase;
    var += std::pow(phase_sigma(e, n), 2) + std::pow(phase_sigma(g, n), 2);
  }
  const double span = delay_long - delay_short;
  const double raw = diff[1] - diff[0];
  const double turns = std::round((zeta_hint * span - raw) / kTwoPi);
  CrossRamseyZeta z;
  z.zeta = (raw + kTwoPi * turns) / span;
  z.uncertainty = std::sqrt(var) / span;
  return z;
}

double dispersive_pump_frequency(const Device& device) {
  const StaticSpectrum s =
      diagonalize_static(device.circuit, device.bias, device.hilbert, device.sim);
  const double swap = s.omega_R - s.omega_L;
  const double two_photon = s.frame.energy_of(1, 1) - s.frame.energy_of(2, 0);
  return 0.5 * (swap + two_photon);
}

FluxBias flux_for_static_zz(const Device& device, double target_zeta, double lo, double hi) {
  auto f = [&](double phi) {
    return diagonalize_static(device.circuit, FluxBias{phi}, device.hilbert, device.sim).zeta -
           target_zeta;
  };
  double f_lo = f(lo);
  if (f_lo * f(hi) > 0.0)
    throw NoSignChangeError("static ZZ does not cross the target on the interval");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm * f_lo > 0.0) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return FluxBias{0.5 * (lo + hi)};
}

ZZCancellationResult zz_cancellation_search(const Device& device, double omega_p,
                                            std::pair<double, double> amplitude_range,
                                            const ZZCancellationOptions& options) {
  device.validate();
  require_lab(device, "ZZ cancellation");
  const auto [a_lo, a_hi] = amplitude_range;
  if (!(a_lo >= 0.0 && a_hi > a_lo)) throw ValidationError("bad amplitude range");
  if (options.coarse_points < 4) throw ValidationError("need at least four coarse points");

  const StaticSpectrum s =
      diagonalize_static(device.circuit, device.bias, device.hilbert, device.sim);
  const double swap = s.omega_R - s.omega_L;
  for (double r : {swap, swap - s.alpha_L, swap + s.alpha_R})
    if (std::abs(omega_p - r) < options.min_detuning)
      throw ValidationError("pump frequency sits within " +
                            std::to_string(hertz(options.min_detuning) / 1e6) +
                            " MHz of a parametric resonance");

  ZZCancellationResult res;
  const int n = options.coarse_points;
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd zeta(n);
  for (int i = 0; i < n; ++i) {
    const double a = a_lo + (a_hi - a_lo) * i / (n - 1);
    const double z = a > 0.0 ? floquet_spectrum(device, omega_p, a).zeta() : s.zeta;
    res.zeta_total_curve.emplace_back(a, z);
    design.row(i) << 1.0, a, a * a;
    zeta(i) = z;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(zeta);
  res.quadratic_fit = {c(0), c(1), c(2)};
  const double rms = std::sqrt((design * c - zeta).squaredNorm() / n);
  res.fit_relative_rms = rms / std::max(zeta.cwiseAbs().maxCoeff(), 1e-300);
  auto poly = [&](double a) { return c(0) + c(1) * a + c(2) * a * a; };

  double root = std::nan("");
  if (std::abs(zeta(0)) <= options.target || std::abs(poly(a_lo)) <= rms) {
    root = a_lo;
  } else {
    constexpr int fine = 2000;
    for (int i = 0; i < fine && std::isnan(root); ++i) {
      double lo = a_lo + (a_hi - a_lo) * i / fine;
      double hi = a_lo + (a_hi - a_lo) * (i + 1) / fine;
      if (poly(lo) * poly(hi) > 0.0) continue;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (poly(mid) * poly(lo) > 0.0) lo = mid;
        else hi = mid;
      }
      root = 0.5 * (lo + hi);
    }
  }
  if (std::isnan(root)) throw NoRootError("ZZ does not cross zero on the amplitude range");
  const double slope = c(1) + 2.0 * c(2) * root;
  res.coarse_amplitude = root;
  res.coarse_amplitude_uncertainty = slope != 0.0 ? rms / std::abs(slope) : 0.0;
  res.pump_amplitude_star = root;
  res.uncertainty = rms;
  res.refined_zeta = poly(root);
  if (!options.refine) return res;

  const double period = kTwoPi / omega_p;
  const double plateau_short = options.short_periods * period;
  const double plateau_long = plateau_short + std::round(options.long_extra / period) * period;
  CrossRamseyOptions ro;
  ro.ramp = options.ramp;
  CrossRamseyZeta last;
  auto measure = [&](double a) {
    if (a > 0.0) {
      PumpTone t;
      t.omega_p = omega_p;
      t.amplitude = a;
      ro.tone = t;
    } else {
      ro.tone.reset();
    }
    last = cross_ramsey_zeta(device, Qubit::R, plateau_short + 2.0 * ro.ramp,
                             plateau_long + 2.0 * ro.ramp, ro, poly(a));
    res.refinement.emplace_back(a, last.zeta);
    return last.zeta;
  };

  double x0 = root;
  double f0 = measure(x0);
  double best = x0;
  CrossRamseyZeta best_z = last;
  if (std::abs(f0) >= options.target) {
    double x1 = root > 0.0 ? 1.01 * root : a_lo + 1e-3 * (a_hi - a_lo);
    double f1 = measure(x1);
    best = std::abs(f1) < std::abs(f0) ? x1 : x0;
    best_z = std::abs(f1) < std::abs(f0) ? last : best_z;
    for (int i = 0; i < options.max_refinements && std::abs(best_z.zeta) >= options.target;
         ++i) {
      if (f1 == f0) break;
      const double x2 = std::clamp(x1 - f1 * (x1 - x0) / (f1 - f0), a_lo, a_hi);
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = measure(x1);
      if (std::abs(f1) < std::abs(best_z.zeta)) {
        best = x1;
        best_z = last;
      }
    }
  }
  res.pump_amplitude_star = best;
  res.refined_zeta = best_z.zeta;
  res.uncertainty = best_z.uncertainty;
  if (std::abs(best_z.zeta) >= options.target)
    throw NoRootError("cross-Ramsey refinement left |zeta| at " +
                      std::to_string(hertz(std::abs(best_z.zeta))) + " Hz");
  return res;
}

double floquet_transfer(const Device& device, double omega_p, double amplitude, Qubit k) {
  require_lab(device, "Floquet transfer");
  const HilbertConfig& cfg = device.hilbert;
  const DressedFrame frame = dressed_frame(device.circuit, device.bias, cfg, device.sim);
  const double period = kTwoPi / omega_p;
  const Matrix u = frame.basis.adjoint() *
                   lab_unitary(device, {constant_tone(omega_p, amplitude, period)}, 0.0, period) *
                   frame.basis;
  const Eigen::ComplexEigenSolver<Matrix> es(u);
  const int from = cfg.index(0, 0);
  const int to = cfg.index(excited(k));
  double bound = 0.0;
  for (int j = 0; j < cfg.dim(); ++j) {
    const Vector f = es.eigenvectors().col(j).normalized();
    bound += std::abs(std::conj(f(to)) * f(from));
  }
  return std::min(1.0, bound * bound);
}

double driven_transfer(const Device& device, double omega_p, double amplitude, Qubit k,
                       double duration, double sample_interval) {
  device.validate();
  require_lab(device, "driven transfer");
  if (!(duration > 0.0) || !(sample_interval > 0.0))
    throw ValidationError("duration and sample interval must be positive");
  const HilbertConfig& cfg = device.hilbert;
  const DressedFrame frame = dressed_frame(device.circuit, device.bias, cfg, device.sim);
  const PulseSchedule schedule = device.schedule({constant_tone(omega_p, amplitude, duration)});
  schedule.validate();
  check_step(schedule, device.sim);
  Propagator prop(system_for(device, schedule), device.sim.step);
  Vector psi = frame.basis.col(cfg.index(0, 0));
  const Vector target = frame.basis.col(cfg.index(excited(k)));
  double best = 0.0;
  for (double t = 0.0; t < duration;) {
    const double next = std::min(duration, t + sample_interval);
    psi = prop.unitary(t, next) * psi;
    t = next;
    best = std::max(best, std::norm(target.dot(psi)));
  }
  return best;
}

std::vector<SubharmonicPoint> subharmonic_scan(const Device& device,
                                               const std::vector<int>& n_range,
                                               double amplitude,
                                               const SubharmonicOptions& options) {
  device.validate();
  require_lab(device, "subharmonic scan");
  if (options.coarse_points < 3) throw ValidationError("need at least three scan points");
  const double omega_k = dressed_frequency(device, options.qubit, device.bias.phi);
  std::vector<SubharmonicPoint> out;
  for (int n : n_range) {
    if (n < 1) throw ValidationError("subharmonic order must be positive");
    const double center = omega_k / n;
    const double step = 2.0 * options.window / (options.coarse_points - 1);
    double best_w = center;
    double best_p = -1.0;
    for (int i = 0; i < options.coarse_points; ++i) {
      const double w = center - options.window + i * step;
      const double p = floquet_transfer(device, w, amplitude, options.qubit);
      if (p > best_p) {
        best_p = p;
        best_w = w;
      }
    }
    std::uintmax_t iters = 40;
    const auto peak = boost::math::tools::brent_find_minima(
        [&](double w) { return -floquet_transfer(device, w, amplitude, options.qubit); },
        best_w - step, best_w + step, 30, iters);
    SubharmonicPoint pt;
    pt.n = n;
    pt.omega_p = -peak.second > best_p ? peak.first : best_w;
    pt.max_transfer = std::max(-peak.second, best_p);
    out.push_back(pt);
  }
  return out;
}

DecoherenceLimit decoherence_limit(double t_g, double t1_eff, double t2_eff,
                                   std::optional<double> t2_star_eff) {
  if (!(t_g >= 0.0) || !(t1_eff > 0.0) || !(t2_eff > 0.0) ||
      (t2_star_eff && !(*t2_star_eff > 0.0)))
    throw ValidationError("coherence times must be positive and the gate time non-negative");
  const double g1 = 1.0 / t1_eff;
  const double g2 = 1.0 / t2_eff;
  const double g2s = 1.0 / t2_star_eff.value_or(t2_eff);
  DecoherenceLimit d;
  d.main = 0.4 * (g1 + 2.0 * g2) * t_g;
  d.t2_star = 0.4 * (g1 + 2.0 * g2s) * t_g;
  d.minimal = 0.8 * g1 * t_g;
  d.t2_equals_t1 = 1.2 * g1 * t_g;
  return d;
}

}  // namespace paracz
