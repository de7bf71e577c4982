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

#include "paracz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "paracz/error.hpp"

namespace paracz {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

char level_char(int n) {
  static const char kNames[] = "gefh";
  return n < 4 ? kNames[n] : static_cast<char>('0' + n);
}

// Greedy maximum-overlap assignment: result[j] = label index of column j.
// overlap(b, j) is the weight of candidate j on label b.
std::vector<int> assign_by_overlap(const Eigen::MatrixXd& overlap) {
  const int n = static_cast<int>(overlap.rows());
  struct Entry {
    double w;
    int b, j;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < n; ++b) entries.push_back({overlap(b, j), b, j});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& x, const Entry& y) { return x.w > y.w; });
  std::vector<int> label_of(n, -1);
  std::vector<bool> used(n, false);
  int assigned = 0;
  for (const Entry& e : entries) {
    if (label_of[e.j] >= 0 || used[e.b]) continue;
    for (int j2 = 0; j2 < n; ++j2) {
      if (j2 == e.j || label_of[j2] >= 0) continue;
      if (std::abs(overlap(e.b, j2) - e.w) < 1e-9 && e.w > 1e-9)
        throw AssignmentAmbiguityError(
            "two eigenvectors overlap equally with the same bare state");
    }
    label_of[e.j] = e.b;
    used[e.b] = true;
    if (++assigned == n) break;
  }
  return label_of;
}

}  // namespace

const char* to_string(Frame frame) {
  return frame == Frame::kLab ? "lab" : "rwa_two_level";
}

Frame frame_from_string(const std::string& s) {
  if (s == "lab") return Frame::kLab;
  if (s == "rwa_two_level") return Frame::kRwaTwoLevel;
  throw ValidationError("unknown frame '" + s + "'");
}

std::string to_string(BasisLabel label) {
  return std::string{level_char(label.n_L), level_char(label.n_R)};
}

BasisLabel basis_label_from_string(const std::string& s) {
  auto level = [&](char c) {
    static const std::string kNames = "gefh";
    const auto pos = kNames.find(c);
    if (pos != std::string::npos) return static_cast<int>(pos);
    if (c >= '0' && c <= '9') return c - '0';
    throw ValidationError("bad basis label '" + s + "'");
  };
  if (s.size() != 2) throw ValidationError("bad basis label '" + s + "'");
  return {level(s[0]), level(s[1])};
}

int HilbertConfig::dim() const {
  return frame == Frame::kLab ? levels * levels : 2;
}

int HilbertConfig::index(int n_L, int n_R) const {
  if (frame == Frame::kRwaTwoLevel) {
    if (n_L == 1 && n_R == 0) return 0;
    if (n_L == 0 && n_R == 1) return 1;
    throw ValidationError("the two-level frame keeps only eg and ge");
  }
  if (n_L < 0 || n_R < 0 || n_L >= levels || n_R >= levels)
    throw ValidationError("basis state outside the truncated space");
  return n_L * levels + n_R;
}

BasisLabel HilbertConfig::label(int i) const {
  if (frame == Frame::kRwaTwoLevel) return i == 0 ? BasisLabel{1, 0} : BasisLabel{0, 1};
  return BasisLabel{i / levels, i % levels};
}

void HilbertConfig::validate() const {
  if (levels < 2) throw ValidationError("levels_per_transmon must be at least 2");
  if (levels > 8) throw ValidationError("levels_per_transmon above 8 is not supported");
}

void SimOptions::validate() const {
  if (!(step > 0.0) || !std::isfinite(step))
    throw ValidationError("simulation step must be positive");
  for (double c : direct_drive_coupling)
    if (!std::isfinite(c)) throw ValidationError("direct drive coupling must be finite");
  if (!std::isfinite(residual_nonlinear_zz))
    throw ValidationError("residual_nonlinear_zz must be finite");
}

DecoherenceParams DecoherenceParams::uniform(double t1, double t2) {
  return DecoherenceParams{{t1, t1}, {t2, t2}};
}

double DecoherenceParams::pure_dephasing_rate(Qubit k) const {
  const int i = index(k);
  return std::max(0.0, 1.0 / t2[i] - 0.5 / t1[i]);
}

void DecoherenceParams::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (!(t1[i] > 0.0) || !(t2[i] > 0.0))
      throw ValidationError("T1 and T2 must be positive");
    if (t2[i] > 2.0 * t1[i] * (1.0 + 1e-12))
      throw ValidationError("T2 must not exceed 2 T1");
  }
}

void Device::validate() const {
  circuit.validate();
  hilbert.validate();
  sim.validate();
  if (!std::isfinite(bias.phi)) throw ValidationError("flux bias must be finite");
}

DensityState::DensityState(HilbertConfig cfg, Matrix rho)
    : cfg_(cfg), rho_(std::move(rho)) {
  if (rho_.rows() != cfg_.dim() || rho_.cols() != cfg_.dim())
    throw ValidationError("density matrix dimension does not match the Hilbert space");
}

DensityState DensityState::basis(const HilbertConfig& cfg, int n_L, int n_R) {
  Matrix rho = Matrix::Zero(cfg.dim(), cfg.dim());
  const int i = cfg.index(n_L, n_R);
  rho(i, i) = 1.0;
  return DensityState(cfg, std::move(rho));
}

DensityState DensityState::pure(const HilbertConfig& cfg, const Vector& ket) {
  if (ket.size() != cfg.dim()) throw ValidationError("ket dimension mismatch");
  const double norm = ket.norm();
  if (!(norm > 0.0)) throw ValidationError("zero ket");
  const Vector k = ket / norm;
  return DensityState(cfg, k * k.adjoint());
}

double DensityState::population(int n_L, int n_R) const {
  const int i = cfg_.index(n_L, n_R);
  return rho_(i, i).real();
}

double DensityState::trace() const { return rho_.trace().real(); }

double DensityState::purity() const {
  return (rho_ * rho_).trace().real();
}

void DensityState::validate() const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-9)
    throw ValidationError("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw ValidationError("density matrix is not positive semidefinite");
}

Matrix lowering_operator(int levels, Qubit k) {
  const int d = levels * levels;
  Matrix a = Matrix::Zero(d, d);
  for (int nl = 0; nl < levels; ++nl) {
    for (int nr = 0; nr < levels; ++nr) {
      const int n = k == Qubit::L ? nl : nr;
      if (n == 0) continue;
      const int from = nl * levels + nr;
      const int to = k == Qubit::L ? (nl - 1) * levels + nr : nl * levels + nr - 1;
      a(to, from) = std::sqrt(static_cast<double>(n));
    }
  }
  return a;
}

Matrix number_operator(int levels, Qubit k) {
  const int d = levels * levels;
  Matrix n = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) n(i, i) = k == Qubit::L ? i / levels : i % levels;
  return n;
}

Matrix build_hamiltonian(const CircuitParams& params, FluxBias phi,
                         const HilbertConfig& cfg, const SimOptions& opts,
                         double drive_flux) {
  if (cfg.frame != Frame::kLab)
    throw ValidationError("build_hamiltonian works in the lab frame");
  const int L = cfg.levels;
  const int d = cfg.dim();
  const double wl = transmon_frequency(params, Qubit::L, phi);
  const double wr = transmon_frequency(params, Qubit::R, phi);
  const double al = anharmonicity(params, Qubit::L, phi);
  const double ar = anharmonicity(params, Qubit::R, phi);
  const double g = static_couplings(params, phi).total;
  const double el = opts.direct_drive_coupling[0] * drive_flux;
  const double er = opts.direct_drive_coupling[1] * drive_flux;

  Matrix h = Matrix::Zero(d, d);
  for (int nl = 0; nl < L; ++nl) {
    for (int nr = 0; nr < L; ++nr) {
      const int i = nl * L + nr;
      h(i, i) = wl * nl + 0.5 * al * nl * (nl - 1) + wr * nr +
                0.5 * ar * nr * (nr - 1);
      const double sl = std::sqrt(static_cast<double>(nl + 1));
      if (nl + 1 < L && nr > 0) {
        const int j = (nl + 1) * L + nr - 1;
        const double v = g * sl * std::sqrt(static_cast<double>(nr));
        h(j, i) += v;
        h(i, j) += v;
      }
      if (opts.counter_rotating && nl + 1 < L && nr + 1 < L) {
        const int j = (nl + 1) * L + nr + 1;
        const double v = g * sl * std::sqrt(static_cast<double>(nr + 1));
        h(j, i) += v;
        h(i, j) += v;
      }
      if (el != 0.0 && nl + 1 < L) {
        const int j = (nl + 1) * L + nr;
        h(j, i) += el * sl;
        h(i, j) += el * sl;
      }
      if (er != 0.0 && nr + 1 < L) {
        const int j = nl * L + nr + 1;
        const double v = er * std::sqrt(static_cast<double>(nr + 1));
        h(j, i) += v;
        h(i, j) += v;
      }
    }
  }
  h(L + 1, L + 1) += opts.residual_nonlinear_zz;
  return h;
}

Matrix hermitian_exponential(const Matrix& h_matrix, double h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_matrix);
  const Matrix& v = es.eigenvectors();
  Vector phases(v.cols());
  for (int i = 0; i < v.cols(); ++i)
    phases(i) = std::exp(-kI * (h * es.eigenvalues()(i)));
  return v * phases.asDiagonal() * v.adjoint();
}

DensityState apply_unitary(const DensityState& state, const Matrix& u) {
  if (u.rows() != state.dim() || u.cols() != state.dim())
    throw ValidationError("unitary dimension mismatch");
  const Matrix check = u * u.adjoint() - Matrix::Identity(u.rows(), u.cols());
  if (check.cwiseAbs().maxCoeff() > 1e-10)
    throw NonUnitaryError("operator is not unitary within 1e-10");
  return DensityState(state.config(), u * state.matrix() * u.adjoint());
}

double rwa_rabi(double g_p, double detuning, double t) {
  const double omega2 = 4.0 * g_p * g_p + detuning * detuning;
  if (omega2 == 0.0) return 0.0;
  const double s = std::sin(0.5 * std::sqrt(omega2) * t);
  return 4.0 * g_p * g_p / omega2 * s * s;
}

Dissipator::Dissipator(const HilbertConfig& cfg, const DecoherenceParams& dec)
    : dim_(cfg.dim()) {
  if (cfg.frame != Frame::kLab)
    throw ValidationError("decoherence needs the lab-frame Hilbert space");
  dec.validate();
  const int L = cfg.levels;
  decay_diag_ = RealVector::Zero(dim_);
  for (Qubit k : {Qubit::L, Qubit::R}) {
    const double g1 = dec.relaxation_rate(k);
    const double gphi = 2.0 * dec.pure_dephasing_rate(k);
    Jump relax{std::vector<int>(dim_, -1), std::vector<double>(dim_, 0.0)};
    Jump dephase{std::vector<int>(dim_, -1), std::vector<double>(dim_, 0.0)};
    for (int c = 0; c < dim_; ++c) {
      const int nl = c / L, nr = c % L;
      const int n = k == Qubit::L ? nl : nr;
      if (n > 0) {
        relax.row[c] = k == Qubit::L ? c - L : c - 1;
        relax.value[c] = std::sqrt(g1 * n);
      }
      dephase.row[c] = c;
      dephase.value[c] = std::sqrt(gphi) * n;
    }
    for (const Jump* j : {&relax, &dephase})
      for (int c = 0; c < dim_; ++c) decay_diag_(c) += 0.5 * j->value[c] * j->value[c];
    if (g1 > 0.0) jumps_.push_back(std::move(relax));
    if (gphi > 0.0) jumps_.push_back(std::move(dephase));
  }
}

Matrix Dissipator::apply(const Matrix& rho) const {
  Matrix out(dim_, dim_);
  for (int b = 0; b < dim_; ++b)
    for (int a = 0; a < dim_; ++a)
      out(a, b) = -(decay_diag_(a) + decay_diag_(b)) * rho(a, b);
  for (const Jump& j : jumps_) {
    for (int b = 0; b < dim_; ++b) {
      const int rb = j.row[b];
      if (rb < 0) continue;
      for (int a = 0; a < dim_; ++a) {
        const int ra = j.row[a];
        if (ra < 0) continue;
        out(ra, rb) += j.value[a] * j.value[b] * rho(a, b);
      }
    }
  }
  return out;
}

void Dissipator::advance(Matrix& rho, double h) const {
  const Matrix k1 = apply(rho);
  const Matrix k2 = apply(k1);
  const Matrix k3 = apply(k2);
  rho += h * k1 + (0.5 * h * h) * k2 + (h * h * h / 6.0) * k3;
}

std::vector<Matrix> Dissipator::jump_operators() const {
  std::vector<Matrix> ops;
  for (const Jump& j : jumps_) {
    Matrix m = Matrix::Zero(dim_, dim_);
    for (int c = 0; c < dim_; ++c)
      if (j.row[c] >= 0) m(j.row[c], c) = j.value[c];
    ops.push_back(std::move(m));
  }
  return ops;
}

double Dissipator::max_rate() const {
  return decay_diag_.size() ? 2.0 * decay_diag_.maxCoeff() : 0.0;
}

ControlledSystem lab_frame_system(const CircuitParams& params,
                                  const PulseSchedule& schedule,
                                  const HilbertConfig& cfg,
                                  const SimOptions& opts) {
  const double phi_s = schedule.bias.phi;
  const double excursion = schedule.max_excursion();
  ControlledSystem sys;
  sys.dim = cfg.dim();
  sys.u_min = phi_s - excursion;
  sys.u_max = phi_s + excursion;
  sys.control = [schedule](double t) { return schedule.flux(t); };
  sys.hamiltonian = [params, cfg, opts, phi_s](double u) {
    return build_hamiltonian(params, FluxBias{u}, cfg, opts, u - phi_s);
  };
  return sys;
}

ControlledSystem rwa_frame_system(const CircuitParams& params,
                                  const PulseSchedule& schedule) {
  if (schedule.tones.size() != 1)
    throw ValidationError("the two-level frame needs exactly one pump tone");
  const PumpTone tone = schedule.tones.front();
  const double k = 0.5 * std::abs(coupling_slope(params, schedule.bias));
  const double splitting = transmon_frequency(params, Qubit::R, schedule.bias) -
                           transmon_frequency(params, Qubit::L, schedule.bias);
  const double detuning = tone.omega_p - splitting;
  const cd phase = std::exp(kI * tone.phase);
  ControlledSystem sys;
  sys.dim = 2;
  sys.u_min = 0.0;
  sys.u_max = tone.amplitude;
  sys.control = [tone](double t) {
    return tone.amplitude * envelope_value(tone.envelope, t - tone.start);
  };
  sys.hamiltonian = [k, detuning, phase](double u) {
    Matrix h(2, 2);
    h(0, 0) = 0.0;
    h(1, 1) = -detuning;
    h(1, 0) = k * u * phase;
    h(0, 1) = std::conj(h(1, 0));
    return h;
  };
  return sys;
}

// Piecewise Chebyshev series of u -> exp(-i h H(u)).
class Propagator::Table {
 public:
  Table(const ControlledSystem& sys, double h) {
    lo_ = sys.u_min;
    const double span = sys.u_max - sys.u_min;
    if (!(span > 0.0)) {
      pieces_.push_back({hermitian_exponential(sys.hamiltonian(lo_), h)});
      return;
    }
    for (int k = 1; k <= 1024; k *= 2) {
      width_ = span / k;
      pieces_.clear();
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        pieces_.push_back(fit(sys, h, lo_ + i * width_, lo_ + (i + 1) * width_));
        const auto& c = pieces_.back();
        ok = std::max(c[kNodes - 1].cwiseAbs().maxCoeff(),
                      c[kNodes - 2].cwiseAbs().maxCoeff()) < 1e-14;
      }
      if (ok) return;
    }
    throw NumericalError("propagator table did not converge over the flux range");
  }

  int size() const { return static_cast<int>(pieces_.size()) * kNodes; }

  void eval(double u, Matrix& out, Matrix& b1, Matrix& b2) const {
    if (pieces_.size() == 1 && pieces_[0].size() == 1) {
      out = pieces_[0][0];
      return;
    }
    const int n = static_cast<int>(pieces_.size());
    const int i = std::clamp(static_cast<int>((u - lo_) / width_), 0, n - 1);
    const auto& coef = pieces_[i];
    const double x = 2.0 * (u - lo_ - i * width_) / width_ - 1.0;
    b1.setZero(coef[0].rows(), coef[0].cols());
    b2.setZero(coef[0].rows(), coef[0].cols());
    for (int k = kNodes - 1; k >= 1; --k) {
      b2 = coef[k] + (2.0 * x) * b1 - b2;
      b1.swap(b2);
    }
    out = coef[0] + x * b1 - b2;
  }

 private:
  static constexpr int kNodes = 8;

  static std::vector<Matrix> fit(const ControlledSystem& sys, double h, double a,
                                 double b) {
    const int n = kNodes;
    std::vector<Matrix> f(n);
    for (int j = 0; j < n; ++j) {
      const double x = std::cos(kPi * (j + 0.5) / n);
      f[j] = hermitian_exponential(sys.hamiltonian(0.5 * (a + b) + 0.5 * (b - a) * x), h);
    }
    std::vector<Matrix> coef(n, Matrix::Zero(sys.dim, sys.dim));
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) coef[k] += std::cos(kPi * k * (j + 0.5) / n) * f[j];
      coef[k] *= (k == 0 ? 1.0 : 2.0) / n;
    }
    return coef;
  }

  std::vector<std::vector<Matrix>> pieces_;
  double lo_ = 0.0;
  double width_ = 1.0;
};

namespace {
// Triple-jump weights for a symmetric fourth-order composition.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = 1.0 - 2.0 * kW1;
}  // namespace

struct Propagator::StepTables {
  std::unique_ptr<Table> outer;
  std::unique_ptr<Table> inner;
};

Propagator::Propagator(ControlledSystem system, double max_step)
    : sys_(std::move(system)), max_step_(max_step) {
  if (!(max_step_ > 0.0)) throw ValidationError("propagator step must be positive");
}

const Propagator::StepTables& Propagator::tables(double h) {
  auto it = cache_.find(h);
  if (it != cache_.end()) return *it->second;
  auto tab = std::make_shared<StepTables>();
  tab->outer = std::make_unique<Table>(sys_, kW1 * h);
  tab->inner = std::make_unique<Table>(sys_, kW0 * h);
  last_nodes_ = std::max(tab->outer->size(), tab->inner->size());
  return *cache_.emplace(h, tab).first->second;
}

int Propagator::steps_for(double span) const {
  return std::max(1, static_cast<int>(std::ceil(span / max_step_ - 1e-9)));
}

void Propagator::step_unitary(const StepTables& tab, double t, double h,
                              Matrix& out) {
  const double t1 = t + 0.5 * kW1 * h;
  const double t2 = t + (kW1 + 0.5 * kW0) * h;
  const double t3 = t + h - 0.5 * kW1 * h;
  Matrix& e = work_a_;
  tab.outer->eval(sys_.control(t1), out, work_b_, work_c_);
  tab.inner->eval(sys_.control(t2), e, work_b_, work_c_);
  work_b_.noalias() = e * out;
  tab.outer->eval(sys_.control(t3), e, out, work_c_);
  out.noalias() = e * work_b_;
}

Matrix Propagator::unitary(double t0, double t1) {
  Matrix u = Matrix::Identity(sys_.dim, sys_.dim);
  if (t1 <= t0) return u;
  const int n = steps_for(t1 - t0);
  const double h = (t1 - t0) / n;
  const StepTables& tab = tables(h);
  Matrix s, tmp;
  for (int i = 0; i < n; ++i) {
    step_unitary(tab, t0 + i * h, h, s);
    tmp.noalias() = s * u;
    u.swap(tmp);
  }
  return u;
}

void Propagator::evolve(std::vector<Matrix>& rhos, double t0, double t1,
                        const Dissipator* dissipator) {
  if (t1 <= t0) return;
  const int n = steps_for(t1 - t0);
  const double h = (t1 - t0) / n;
  const StepTables& tab = tables(h);
  Matrix s, tmp;
  for (int i = 0; i < n; ++i) {
    step_unitary(tab, t0 + i * h, h, s);
    for (Matrix& rho : rhos) {
      if (dissipator) dissipator->advance(rho, 0.5 * h);
      tmp.noalias() = s * rho;
      rho.noalias() = tmp * s.adjoint();
      if (dissipator) dissipator->advance(rho, 0.5 * h);
    }
  }
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t";
  for (int i = 0; i < config.dim(); ++i) out << ",P_" << to_string(config.label(i));
  out << '\n' << std::setprecision(12);
  for (std::size_t s = 0; s < states.size(); ++s) {
    out << times[s];
    for (int i = 0; i < config.dim(); ++i) out << ',' << states[s].matrix()(i, i).real();
    out << '\n';
  }
}

void check_step(const PulseSchedule& schedule, const SimOptions& opts) {
  const double wmax = schedule.max_pump_frequency();
  if (wmax > 0.0 && opts.step > 1.0 / (20.0 * hertz(wmax)))
    throw StepTooLargeError("step does not resolve the fastest pump tone (need 20 points per period)");
}

Trajectory evolve(const DensityState& initial, const CircuitParams& params,
                  const PulseSchedule& schedule,
                  const std::optional<DecoherenceParams>& dec,
                  const HilbertConfig& cfg, const SimOptions& opts,
                  double duration, std::vector<double> sample_times) {
  params.validate();
  cfg.validate();
  opts.validate();
  schedule.validate();
  if (!(duration >= 0.0)) throw ValidationError("duration must be non-negative");
  if (initial.dim() != cfg.dim())
    throw ValidationError("initial state does not match the Hilbert space");
  initial.validate();

  const bool rwa = cfg.frame == Frame::kRwaTwoLevel;
  if (rwa && dec) throw ValidationError("decoherence is not modelled in the two-level frame");
  if (!rwa) check_step(schedule, opts);

  std::optional<Dissipator> dissipator;
  if (dec) dissipator.emplace(cfg, *dec);
  Propagator prop(rwa ? rwa_frame_system(params, schedule)
                      : lab_frame_system(params, schedule, cfg, opts),
                  opts.step);

  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()),
                     sample_times.end());
  for (double t : sample_times)
    if (t < 0.0 || t > duration) throw ValidationError("sample time outside [0, duration]");
  if (sample_times.empty() || sample_times.back() != duration)
    sample_times.push_back(duration);

  Trajectory traj;
  traj.config = cfg;
  std::vector<Matrix> rho{initial.matrix()};
  double t = 0.0;
  for (double target : sample_times) {
    prop.evolve(rho, t, target, dissipator ? &*dissipator : nullptr);
    t = target;
    traj.times.push_back(t);
    traj.states.emplace_back(cfg, rho.front());
  }
  return traj;
}

Eigen::VectorXcd DressedFrame::frame_phases(double t) const {
  Eigen::VectorXcd p(frame_energy.size());
  for (int i = 0; i < p.size(); ++i) p(i) = std::exp(kI * (frame_energy(i) * t));
  return p;
}

Matrix DressedFrame::to_rotating(const Matrix& u_lab, double t0, double t1) const {
  const Matrix core = basis.adjoint() * u_lab * basis;
  return frame_phases(t1).asDiagonal() * core * frame_phases(t0).conjugate().asDiagonal();
}

Matrix DressedFrame::density_to_lab(const Matrix& rho_rot, double t) const {
  const Eigen::VectorXcd p = frame_phases(t);
  const Matrix r = p.conjugate().asDiagonal() * rho_rot * p.asDiagonal();
  return basis * r * basis.adjoint();
}

Matrix DressedFrame::density_from_lab(const Matrix& rho_lab, double t) const {
  const Eigen::VectorXcd p = frame_phases(t);
  const Matrix r = basis.adjoint() * rho_lab * basis;
  return p.asDiagonal() * r * p.conjugate().asDiagonal();
}

DressedFrame dressed_frame(const CircuitParams& params, FluxBias phi,
                           const HilbertConfig& cfg, const SimOptions& opts) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(build_hamiltonian(params, phi, cfg, opts));
  const Matrix& v = es.eigenvectors();
  const int d = cfg.dim();
  const std::vector<int> label_of = assign_by_overlap(v.cwiseAbs2());
  DressedFrame f;
  f.config = cfg;
  f.basis.resize(d, d);
  f.energy.resize(d);
  for (int j = 0; j < d; ++j) {
    const int b = label_of[j];
    const cd c = v(b, j);
    f.basis.col(b) = v.col(j) * (std::abs(c) > 0.0 ? std::conj(c) / std::abs(c) : cd(1.0));
    f.energy(b) = es.eigenvalues()(j);
  }
  const double e0 = f.energy(cfg.index(0, 0));
  f.omega_L = f.energy(cfg.index(1, 0)) - e0;
  f.omega_R = f.energy(cfg.index(0, 1)) - e0;
  f.frame_energy.resize(d);
  for (int i = 0; i < d; ++i) {
    const BasisLabel b = cfg.label(i);
    f.frame_energy(i) = e0 + b.n_L * f.omega_L + b.n_R * f.omega_R;
  }
  return f;
}

StaticSpectrum diagonalize_static(const CircuitParams& params, FluxBias phi,
                                  const HilbertConfig& cfg, const SimOptions& opts) {
  if (cfg.levels < 3) throw ValidationError("diagonalize_static needs at least 3 levels");
  StaticSpectrum s;
  s.frame = dressed_frame(params, phi, cfg, opts);
  const int d = cfg.dim();
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s.frame.energy(a) < s.frame.energy(b); });
  s.energies.resize(d);
  for (int i = 0; i < d; ++i) {
    s.energies(i) = s.frame.energy(order[i]);
    s.assignment.push_back(cfg.label(order[i]));
  }
  auto e = [&](int nl, int nr) { return s.frame.energy_of(nl, nr); };
  s.omega_L = e(1, 0) - e(0, 0);
  s.omega_R = e(0, 1) - e(0, 0);
  s.alpha_L = (e(2, 0) - e(1, 0)) - s.omega_L;
  s.alpha_R = (e(0, 2) - e(0, 1)) - s.omega_R;
  s.zeta = (e(1, 1) - e(0, 1)) - (e(1, 0) - e(0, 0));
  return s;
}

Matrix embed_single_qubit(const HilbertConfig& cfg, Qubit k,
                          const Eigen::Matrix2cd& u) {
  const int d = cfg.dim();
  Matrix m = Matrix::Identity(d, d);
  const int L = cfg.levels;
  for (int other = 0; other < L; ++other) {
    int idx[2];
    for (int n = 0; n < 2; ++n)
      idx[n] = k == Qubit::L ? cfg.index(n, other) : cfg.index(other, n);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m(idx[a], idx[b]) = u(a, b);
  }
  return m;
}

Matrix embed_computational(const HilbertConfig& cfg, const Eigen::Matrix4cd& u) {
  const int d = cfg.dim();
  Matrix m = Matrix::Identity(d, d);
  const int idx[4] = {cfg.index(0, 0), cfg.index(0, 1), cfg.index(1, 0), cfg.index(1, 1)};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(idx[a], idx[b]) = u(a, b);
  return m;
}

FloquetSpectrum floquet_spectrum(const Device& device, double omega_p,
                                 double amplitude, double phase) {
  device.validate();
  const double period = kTwoPi / omega_p;
  PumpTone tone{omega_p, amplitude, phase, Envelope::rectangular(period), 0.0};
  const PulseSchedule schedule = device.schedule({tone});
  check_step(schedule, device.sim);
  Propagator prop(lab_frame_system(device.circuit, schedule, device.hilbert, device.sim),
                  device.sim.step);
  const Matrix u = prop.unitary(0.0, period);
  const DressedFrame frame =
      dressed_frame(device.circuit, device.bias, device.hilbert, device.sim);

  Eigen::ComplexEigenSolver<Matrix> es(u);
  const int d = device.hilbert.dim();
  Matrix modes = es.eigenvectors();
  for (int j = 0; j < d; ++j) modes.col(j).normalize();
  const Eigen::MatrixXd overlap = (frame.basis.adjoint() * modes).cwiseAbs2();
  const std::vector<int> label_of = assign_by_overlap(overlap);

  FloquetSpectrum fs;
  fs.config = device.hilbert;
  fs.period = period;
  fs.quasienergy.resize(d);
  for (int j = 0; j < d; ++j) {
    const int b = label_of[j];
    const double raw = -std::arg(es.eigenvalues()(j)) / period;
    const double m = std::round((frame.energy(b) - raw) / omega_p);
    fs.quasienergy(b) = raw + m * omega_p;
  }
  return fs;
}

}  // namespace paracz
