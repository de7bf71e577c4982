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
#include "paracz/gates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>

#include <boost/math/tools/minima.hpp>

#include "paracz/error.hpp"
#include "paracz/experiments.hpp"

namespace paracz {
namespace {

const std::complex<double> kI(0.0, 1.0);

void require_lab(const Device& device) {
  if (device.hilbert.frame != Frame::kLab)
    throw ValidationError("gates are simulated in the lab frame");
}

Matrix lab_unitary(const Device& device, const std::vector<PumpTone>& tones,
                   double duration) {
  if (tones.empty())
    return hermitian_exponential(
        build_hamiltonian(device.circuit, device.bias, device.hilbert, device.sim),
        duration);
  const PulseSchedule schedule = device.schedule(tones);
  schedule.validate();
  check_step(schedule, device.sim);
  Propagator prop(lab_frame_system(device.circuit, schedule, device.hilbert, device.sim),
                  device.sim.step);
  return prop.unitary(0.0, duration);
}

// Population of dressed |to> after a tone starting in dressed |from>.
double transfer(const Device& device, const DressedFrame& frame, BasisLabel from,
                BasisLabel to, const std::vector<PumpTone>& tones, double duration) {
  const Matrix u = lab_unitary(device, tones, duration);
  const auto& cfg = device.hilbert;
  const std::complex<double> amp =
      frame.basis.col(cfg.index(to)).dot(u * frame.basis.col(cfg.index(from)));
  return std::norm(amp);
}

double secant(const std::function<double(double)>& f, double x0, double x1,
              double tol, int max_iter) {
  double f0 = f(x0);
  double f1 = f(x1);
  for (int i = 0; i < max_iter; ++i) {
    if (std::abs(f1) < tol) return x1;
    if (f1 == f0) throw SingularSystemError("secant: flat residual");
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
  }
  if (std::abs(f1) < tol) return x1;
  throw NoRootError("secant did not converge");
}

double minimize(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 40;
  return boost::math::tools::brent_find_minima(f, lo, hi, 30, iters).first;
}

void check_duration(const Envelope& env, double t_g) {
  env.validate();
  if (!(t_g > 0.0) || std::abs(env.duration() - t_g) > 1e-12 * t_g)
    throw ValidationError("envelope duration does not match the gate duration");
}

void check_amplitude(double a, const CompileOptions& options) {
  if (!(a > 0.0) || a > options.max_amplitude)
    throw AmplitudeRangeError("required pump amplitude " + std::to_string(a) +
                              " exceeds " + std::to_string(options.max_amplitude));
}

GateSpec make_gate(GateKind kind, const PumpTone& tone, const CompileOptions& options,
                   double duration) {
  GateSpec g;
  g.kind = kind;
  g.gate_tone = tone;
  g.cancellation_tone = options.cancellation_tone;
  g.duration = duration;
  return g;
}

}  // namespace

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::kIswap: return "iswap";
    case GateKind::kPswapCz: return "pswap_cz";
    case GateKind::kSwapfreeCz: return "swapfree_cz";
    case GateKind::kIdle: return "idle";
  }
  return "?";
}

GateKind gate_kind_from_string(const std::string& s) {
  for (GateKind k : {GateKind::kIswap, GateKind::kPswapCz, GateKind::kSwapfreeCz,
                     GateKind::kIdle})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown gate kind '" + s + "'");
}

std::vector<PumpTone> GateSpec::tones() const {
  std::vector<PumpTone> out;
  if (gate_tone) out.push_back(*gate_tone);
  if (cancellation_tone) {
    PumpTone c = *cancellation_tone;
    c.start = 0.0;
    c.envelope = Envelope::rectangular(duration);
    out.push_back(c);
  }
  return out;
}

void GateSpec::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw ValidationError("gate duration must be positive");
  if (kind != GateKind::kIdle && !gate_tone)
    throw ValidationError(std::string(to_string(kind)) + " needs a gate tone");
  if (gate_tone) {
    gate_tone->validate();
    if (gate_tone->start < 0.0 || gate_tone->end() > duration * (1.0 + 1e-12))
      throw ValidationError("gate tone extends outside the gate");
  }
  if (cancellation_tone) cancellation_tone->validate();
  for (double z : virtual_z)
    if (!std::isfinite(z)) throw ValidationError("virtual-Z phase must be finite");
}

GateSpec idle_gate(double duration) {
  GateSpec g;
  g.kind = GateKind::kIdle;
  g.duration = duration;
  return g;
}

Matrix4 ideal_cz() {
  Matrix4 u = Matrix4::Identity();
  u(3, 3) = -1.0;
  return u;
}

Matrix4 ideal_iswap() {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 2) = kI;
  u(2, 1) = kI;
  u(3, 3) = 1.0;
  return u;
}

Matrix4 target_unitary(GateKind kind) {
  switch (kind) {
    case GateKind::kIswap: return ideal_iswap();
    case GateKind::kPswapCz:
    case GateKind::kSwapfreeCz: return ideal_cz();
    case GateKind::kIdle: return Matrix4::Identity();
  }
  return Matrix4::Identity();
}

Matrix virtual_z(const HilbertConfig& cfg, double theta_L, double theta_R) {
  const int d = cfg.dim();
  Matrix v = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const BasisLabel b = cfg.label(i);
    v(i, i) = std::exp(-kI * (theta_L * b.n_L + theta_R * b.n_R));
  }
  return v;
}

std::array<int, 4> computational_indices(const HilbertConfig& cfg) {
  return {cfg.index(0, 0), cfg.index(0, 1), cfg.index(1, 0), cfg.index(1, 1)};
}

Matrix4 computational_block(const Matrix& u, const HilbertConfig& cfg) {
  const auto idx = computational_indices(cfg);
  Matrix4 out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out(a, b) = u(idx[a], idx[b]);
  return out;
}

double wrap_phase(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  return y;
}

double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

double conditional_phase(const Matrix4& u) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(u(i, i)) <= 0.9)
      throw NonDiagonalError("conditional phase needs a diagonal gate");
  return wrap_phase(std::arg(u(3, 3)) - std::arg(u(2, 2)) - std::arg(u(1, 1)) +
                    std::arg(u(0, 0)));
}

std::array<double, 2> single_qubit_phases(const Matrix4& u) {
  return {std::arg(u(2, 2) / u(0, 0)), std::arg(u(1, 1) / u(0, 0))};
}

Matrix simulate_gate(const Device& device, const GateSpec& gate) {
  device.validate();
  require_lab(device);
  gate.validate();
  const DressedFrame frame =
      dressed_frame(device.circuit, device.bias, device.hilbert, device.sim);
  const Matrix u = lab_unitary(device, gate.tones(), gate.duration);
  return virtual_z(device.hilbert, gate.virtual_z[0], gate.virtual_z[1]) *
         frame.to_rotating(u, 0.0, gate.duration);
}

std::array<double, 2> calibrate_virtual_z(const Device& device, const GateSpec& gate) {
  GateSpec bare = gate;
  bare.virtual_z = {0.0, 0.0};
  const Matrix4 u = computational_block(simulate_gate(device, bare), device.hilbert);
  if (gate.kind == GateKind::kIswap) {
    return {wrap_phase(std::arg(u(2, 1) / u(0, 0)) - kPi / 2),
            wrap_phase(std::arg(u(1, 2) / u(0, 0)) - kPi / 2)};
  }
  return single_qubit_phases(u);
}

GateReport gate_report(const Device& device, const GateSpec& gate,
                       const std::optional<DecoherenceParams>& dec) {
  device.validate();
  require_lab(device);
  gate.validate();
  const HilbertConfig& cfg = device.hilbert;
  const int d = cfg.dim();
  const auto idx = computational_indices(cfg);

  // lambda[i][j] = image of |i><j| in the rotating dressed frame.
  std::array<std::array<Matrix, 4>, 4> lambda;
  if (!dec) {
    const Matrix u = simulate_gate(device, gate);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        lambda[i][j] = u.col(idx[i]) * u.col(idx[j]).adjoint();
  } else {
    dec->validate();
    const DressedFrame frame = dressed_frame(device.circuit, device.bias, cfg, device.sim);
    std::vector<Matrix> inputs;
    auto ket = [&](int i) { return Vector(Vector::Unit(d, idx[i])); };
    for (int i = 0; i < 4; ++i) inputs.push_back(ket(i) * ket(i).adjoint());
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const Vector p = (ket(i) + ket(j)) / std::sqrt(2.0);
        const Vector q = (ket(i) + kI * ket(j)) / std::sqrt(2.0);
        inputs.push_back(p * p.adjoint());
        inputs.push_back(q * q.adjoint());
      }
    std::vector<Matrix> rhos;
    for (const Matrix& r : inputs) rhos.push_back(frame.density_to_lab(r, 0.0));
    const Dissipator dissipator(cfg, *dec);
    const std::vector<PumpTone> tones = gate.tones();
    const PulseSchedule schedule = device.schedule(tones);
    schedule.validate();
    check_step(schedule, device.sim);
    Propagator prop(lab_frame_system(device.circuit, schedule, cfg, device.sim),
                    device.sim.step);
    prop.evolve(rhos, 0.0, gate.duration, &dissipator);
    const Matrix vz = virtual_z(cfg, gate.virtual_z[0], gate.virtual_z[1]);
    for (Matrix& r : rhos) r = vz * frame.density_from_lab(r, gate.duration) * vz.adjoint();
    int n = 0;
    for (int i = 0; i < 4; ++i) lambda[i][i] = rhos[n++];
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const Matrix& p = rhos[n++];
        const Matrix& q = rhos[n++];
        lambda[i][j] = p + kI * q - 0.5 * (1.0 + kI) * (lambda[i][i] + lambda[j][j]);
        lambda[j][i] = lambda[i][j].adjoint();
      }
  }

  Eigen::Matrix<std::complex<double>, 16, 16> choi;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int b = 0; b < 4; ++b)
        for (int j = 0; j < 4; ++j) choi(a * 4 + i, b * 4 + j) = lambda[i][j](idx[a], idx[b]);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<double>, 16, 16>> es(
      choi);
  const double top = std::max(es.eigenvalues()(15), 0.0);
  const auto w = (std::sqrt(top) * es.eigenvectors().col(15)).eval();
  Matrix4 u;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) u(a, i) = w(a * 4 + i);
  if (std::abs(u(0, 0)) > 0.0) u *= std::conj(u(0, 0)) / std::abs(u(0, 0));

  GateReport report;
  report.computational_unitary = u;
  for (int i = 0; i < 4; ++i) {
    double kept = 0.0;
    for (int a = 0; a < 4; ++a) kept += lambda[i][i](idx[a], idx[a]).real();
    report.leakage = std::max(report.leakage, 1.0 - kept);
  }
  try {
    report.conditional_phase = conditional_phase(u);
    report.single_qubit_phases = single_qubit_phases(u);
  } catch (const NonDiagonalError&) {
    report.conditional_phase = std::nan("");
    report.single_qubit_phases = {std::nan(""), std::nan("")};
  }
  return report;
}

double pump_coupling_per_amplitude(const Device& device) {
  return 0.5 * std::abs(coupling_slope(device.circuit, device.bias));
}

double rectified_transition(const Device& device, BasisLabel from, BasisLabel to,
                            double amplitude) {
  constexpr double h = 1e-3;
  auto gap = [&](double phi) {
    const DressedFrame f =
        dressed_frame(device.circuit, FluxBias{phi}, device.hilbert, device.sim);
    return std::abs(f.energy_of(from.n_L, from.n_R) - f.energy_of(to.n_L, to.n_R));
  };
  const double phi = device.bias.phi;
  const double g0 = gap(phi);
  const double curvature = (gap(phi + h) - 2.0 * g0 + gap(phi - h)) / (h * h);
  return g0 + curvature * amplitude * amplitude / 4.0;
}

double chevron_center(const Device& device, BasisLabel from, BasisLabel to,
                      double amplitude, double coupling, double guess) {
  device.validate();
  require_lab(device);
  const double g_eff = coupling * amplitude;
  if (!(g_eff > 0.0)) throw ValidationError("chevron center needs a positive coupling");
  const double tau = kPi / (2.0 * g_eff);
  const double delta = 0.5 * g_eff;
  const DressedFrame frame =
      dressed_frame(device.circuit, device.bias, device.hilbert, device.sim);
  auto population = [&](double omega) {
    PumpTone tone;
    tone.omega_p = omega;
    tone.amplitude = amplitude;
    tone.envelope = Envelope::rectangular(tau);
    return transfer(device, frame, from, to, {tone}, tau);
  };
  auto asym = [&](double omega) { return population(omega + delta) - population(omega - delta); };

  double half = g_eff;
  double lo = guess - half;
  double hi = guess + half;
  double a_lo = asym(lo);
  double a_hi = asym(hi);
  for (int i = 0; i < 4 && !(a_lo > 0.0 && a_hi < 0.0); ++i) {
    half *= 2.0;
    lo = guess - half;
    hi = guess + half;
    a_lo = asym(lo);
    a_hi = asym(hi);
  }
  if (!(a_lo > 0.0 && a_hi < 0.0))
    throw NoSignChangeError("chevron response does not bracket a resonance");
  const double tol = kHz(1.0);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (asym(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

GateSpec compile_pswap_cz(const Device& device, double t_g, const Envelope& env,
                          const CompileOptions& options) {
  device.validate();
  require_lab(device);
  if (device.hilbert.levels < 3) throw ValidationError("p-SWAP cZ needs three levels");
  check_duration(env, t_g);
  const BasisLabel ee{1, 1};
  const BasisLabel to = options.path == TwoPhotonPath::kFg ? BasisLabel{2, 0}
                                                           : BasisLabel{0, 2};
  const double coupling = std::sqrt(2.0) * pump_coupling_per_amplitude(device);
  const double a0 = kPi / (coupling * env.area());
  check_amplitude(a0, options);

  double omega = options.pump_frequency;
  if (!(omega > 0.0))
    omega = chevron_center(device, ee, to, a0, coupling,
                           rectified_transition(device, ee, to, a0));

  PumpTone tone;
  tone.omega_p = omega;
  tone.amplitude = a0;
  tone.envelope = env;
  GateSpec gate = make_gate(GateKind::kPswapCz, tone, options, t_g);

  if (options.refine) {
    const int i_ee = device.hilbert.index(ee);
    const int i_to = device.hilbert.index(to);
    auto simulate = [&](double w, double a) {
      GateSpec g = gate;
      g.gate_tone->omega_p = w;
      g.gate_tone->amplitude = a;
      return simulate_gate(device, g);
    };
    double best_a = a0;
    auto residual = [&](double w) {
      best_a = minimize(
          [&](double a) { return std::norm(simulate(w, a)(i_to, i_ee)); },
          0.9 * a0, std::min(1.1 * a0, options.max_amplitude));
      const Matrix4 u = computational_block(simulate(w, best_a), device.hilbert);
      return wrap_phase(conditional_phase(u) - kPi);
    };
    const double w = secant(residual, omega, omega + kHz(50.0), 1e-4, 10);
    residual(w);
    gate.gate_tone->omega_p = w;
    gate.gate_tone->amplitude = best_a;
  }
  gate.virtual_z = calibrate_virtual_z(device, gate);
  return gate;
}

double swapfree_phase_integral(const Device& device, double omega_p, double amplitude,
                               double t_g, double static_zeta) {
  const StaticSpectrum s =
      diagonalize_static(device.circuit, device.bias, device.hilbert, device.sim);
  const double k = pump_coupling_per_amplitude(device);
  const double delta_p = s.omega_R - s.omega_L - omega_p;
  const Envelope env = Envelope::pure_hann(t_g);
  constexpr int n = 2000;
  const double h = t_g / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double g = k * amplitude * envelope_value(env, i * h);
    sum += w * zeta_parametric(g, delta_p, s.alpha_L, s.alpha_R);
  }
  return sum * h / 3.0 + static_zeta * t_g;
}

GateSpec compile_swapfree_cz(const Device& device, double t_g,
                             const CompileOptions& options) {
  device.validate();
  require_lab(device);
  if (device.hilbert.levels < 3) throw ValidationError("SWAP-free cZ needs three levels");
  if (!(t_g > 0.0)) throw ValidationError("gate duration must be positive");
  const StaticSpectrum s =
      diagonalize_static(device.circuit, device.bias, device.hilbert, device.sim);
  double static_zeta = s.zeta;
  if (options.cancellation_tone) {
    const double k = pump_coupling_per_amplitude(device);
    static_zeta += zeta_parametric(k * options.cancellation_tone->amplitude,
                                   s.omega_R - s.omega_L - options.cancellation_tone->omega_p,
                                   s.alpha_L, s.alpha_R);
  }
  const double omega = options.pump_frequency > 0.0 ? options.pump_frequency
                                                    : dispersive_pump_frequency(device);

  auto integral = [&](double a) {
    return swapfree_phase_integral(device, omega, a, t_g, static_zeta);
  };
  const double a_max = options.max_amplitude;
  const double sign = integral(a_max) - static_zeta * t_g > 0.0 ? 1.0 : -1.0;
  auto f = [&](double a) { return integral(a) - sign * kPi; };
  double lo = 0.0;
  double hi = a_max;
  if (f(lo) * f(hi) > 0.0)
    throw AmplitudeRangeError("no pump amplitude up to " + std::to_string(a_max) +
                              " accumulates a pi conditional phase");
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) * f(lo) > 0.0) lo = mid;
    else hi = mid;
  }
  double a = 0.5 * (lo + hi);

  PumpTone tone;
  tone.omega_p = omega;
  tone.amplitude = a;
  tone.envelope = Envelope::pure_hann(t_g);
  GateSpec gate = make_gate(GateKind::kSwapfreeCz, tone, options, t_g);
  if (options.refine) {
    auto residual = [&](double amp) {
      GateSpec g = gate;
      g.gate_tone->amplitude = amp;
      const Matrix4 u = computational_block(simulate_gate(device, g), device.hilbert);
      return wrap_phase(conditional_phase(u) - kPi);
    };
    a = secant(residual, a, 1.01 * a, 1e-5, 12);
    check_amplitude(a, options);
    gate.gate_tone->amplitude = a;
  }
  gate.virtual_z = calibrate_virtual_z(device, gate);
  return gate;
}

GateSpec compile_iswap(const Device& device, const Envelope& env,
                       const CompileOptions& options) {
  device.validate();
  require_lab(device);
  env.validate();
  const BasisLabel eg{1, 0};
  const BasisLabel ge{0, 1};
  const double coupling = pump_coupling_per_amplitude(device);
  const double a0 = kPi / (2.0 * coupling * env.area());
  check_amplitude(a0, options);
  double omega = options.pump_frequency;
  if (!(omega > 0.0))
    omega = chevron_center(device, eg, ge, a0, coupling,
                           rectified_transition(device, eg, ge, a0));
  PumpTone tone;
  tone.omega_p = omega;
  tone.amplitude = a0;
  tone.envelope = env;
  GateSpec gate = make_gate(GateKind::kIswap, tone, options, env.duration());
  if (options.refine) {
    const DressedFrame frame =
        dressed_frame(device.circuit, device.bias, device.hilbert, device.sim);
    const double a = minimize(
        [&](double amp) {
          PumpTone t = tone;
          t.amplitude = amp;
          return 1.0 - transfer(device, frame, eg, ge, {t}, env.duration());
        },
        0.9 * a0, std::min(1.1 * a0, options.max_amplitude));
    gate.gate_tone->amplitude = a;
  }
  gate.virtual_z = calibrate_virtual_z(device, gate);
  return gate;
}

}  // namespace paracz
