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
#include "paracz/benchmarking.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <iomanip>
#include <ostream>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "paracz/error.hpp"

namespace paracz {
namespace {

const std::complex<double> kI(0.0, 1.0);

template <typename M>
M canonical_phase(const M& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      if (std::abs(u(i, j)) > 1e-6) return u * (std::conj(u(i, j)) / std::abs(u(i, j)));
  return u;
}

template <typename M>
std::uint64_t phase_free_key(const M& u) {
  const M c = canonical_phase(u);
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double x) {
    const auto v = static_cast<std::int64_t>(std::llround(x * 1e6));
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  };
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      mix(c(i, j).real());
      mix(c(i, j).imag());
    }
  return h;
}

Matrix4 kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Rotating-frame generator of the dressed free evolution plus dissipation.
Matrix liouvillian(const Device& device, const std::optional<DecoherenceParams>& dec,
                   bool with_hamiltonian) {
  const HilbertConfig& cfg = device.hilbert;
  const int d = cfg.dim();
  const Matrix id = Matrix::Identity(d, d);
  Matrix gen = Matrix::Zero(d * d, d * d);
  const DressedFrame frame = dressed_frame(device.circuit, device.bias, cfg, device.sim);
  if (with_hamiltonian) {
    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) h(i, i) = frame.energy(i) - frame.frame_energy(i);
    gen += -kI * (kron(id, h) - kron(h.transpose(), id));
  }
  if (dec) {
    dec->validate();
    const Dissipator dis(cfg, *dec);
    for (const Matrix& l_bare : dis.jump_operators()) {
      const Matrix l = frame.basis.adjoint() * l_bare * frame.basis;
      const Matrix ll = l.adjoint() * l;
      gen += kron(l.conjugate(), l) - 0.5 * kron(id, ll) - 0.5 * kron(ll.transpose(), id);
    }
  }
  return gen;
}

Channel exp_channel(const Matrix& gen, double t) {
  Channel c;
  c.superop = (gen * t).exp();
  return c;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double sem(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1) / v.size());
}

struct LinearSolve {
  double A, C, rss;
};

LinearSolve solve_linear(const std::vector<DecayPoint>& data, double p) {
  Eigen::MatrixXd m(data.size(), 2);
  Eigen::VectorXd y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    m(i, 0) = std::pow(p, data[i].length);
    m(i, 1) = 1.0;
    y(i) = data[i].mean;
  }
  const Eigen::Vector2d x = m.colPivHouseholderQr().solve(y);
  return {x(0), x(1), (m * x - y).squaredNorm()};
}

// Single-qubit Clifford group tables.
struct SingleQubitTables {
  std::vector<std::uint64_t> keys;
  std::vector<std::vector<int>> compose;  // compose[a][b] = b after a
  std::vector<int> inverse;

  int find(const Eigen::Matrix2cd& u) const {
    const auto k = phase_free_key(u);
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == k) return static_cast<int>(i);
    throw ValidationError("not a single-qubit Clifford");
  }
};

const SingleQubitTables& single_tables() {
  static const SingleQubitTables tables = [] {
    SingleQubitTables t;
    const auto& c = single_qubit_cliffords();
    for (const auto& u : c) t.keys.push_back(phase_free_key(u));
    const int n = static_cast<int>(c.size());
    t.compose.assign(n, std::vector<int>(n));
    t.inverse.resize(n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) t.compose[a][b] = t.find(c[b] * c[a]);
      t.inverse[a] = t.find(c[a].adjoint());
    }
    return t;
  }();
  return tables;
}

}  // namespace

const std::vector<Eigen::Matrix2cd>& single_qubit_cliffords() {
  static const std::vector<Eigen::Matrix2cd> group = [] {
    Eigen::Matrix2cd h, s;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    s << 1, 0, 0, kI;
    std::vector<Eigen::Matrix2cd> out{Eigen::Matrix2cd::Identity()};
    std::vector<std::uint64_t> keys{phase_free_key(out[0])};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : {h, s}) {
        const Eigen::Matrix2cd u = canonical_phase(Eigen::Matrix2cd(g * out[i]));
        const auto k = phase_free_key(u);
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
          keys.push_back(k);
          out.push_back(u);
        }
      }
    if (out.size() != 24) throw NumericalError("single-qubit Clifford group is not of order 24");
    return out;
  }();
  return group;
}

Matrix4 native_unitary(const NativeStep& step) {
  if (step.cz) return ideal_cz();
  const auto& c = single_qubit_cliffords();
  return kron(c.at(step.left), c.at(step.right));
}

const CliffordGroup& CliffordGroup::instance() {
  static const CliffordGroup group;
  return group;
}

CliffordGroup::CliffordGroup() {
  const int n1 = static_cast<int>(single_qubit_cliffords().size());
  auto insert = [&](const Matrix4& u, std::vector<NativeStep> steps, int cz) {
    const Matrix4 c = canonical_phase(u);
    const auto key = phase_free_key(c);
    if (lookup_.count(key)) return false;
    CliffordElement e;
    e.index = static_cast<int>(elements_.size());
    e.cz_count = cz;
    e.decomposition = std::move(steps);
    lookup_.emplace(key, e.index);
    elements_.push_back(std::move(e));
    unitaries_.push_back(c);
    return true;
  };
  std::vector<Matrix4> pairs;
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      const NativeStep step{false, a, b};
      pairs.push_back(native_unitary(step));
      insert(pairs.back(), {step}, 0);
    }
  int layer_begin = 0;
  for (int cz = 1; cz <= 3 && size() < kOrder; ++cz) {
    const int layer_end = size();
    for (int x = layer_begin; x < layer_end && size() < kOrder; ++x) {
      const Matrix4 base = ideal_cz() * unitaries_[x];
      for (int p = 0; p < n1 * n1; ++p) {
        std::vector<NativeStep> steps = elements_[x].decomposition;
        steps.push_back(NativeStep{true, 0, 0});
        steps.push_back(NativeStep{false, p / n1, p % n1});
        insert(pairs[p] * base, std::move(steps), cz);
      }
    }
    layer_begin = layer_end;
  }
  if (size() != kOrder)
    throw NumericalError("two-qubit Clifford enumeration found " + std::to_string(size()) +
                         " elements");
}

int CliffordGroup::find(const Matrix4& u) const {
  const auto it = lookup_.find(phase_free_key(u));
  if (it == lookup_.end()) throw ValidationError("unitary is not a two-qubit Clifford");
  return it->second;
}

int CliffordGroup::compose(int first, int second) const {
  return find(unitaries_.at(second) * unitaries_.at(first));
}

int CliffordGroup::inverse(int i) const { return find(unitaries_.at(i).adjoint()); }

std::array<int, 4> CliffordGroup::class_sizes() const {
  std::array<int, 4> out{0, 0, 0, 0};
  for (const auto& e : elements_) ++out.at(e.cz_count);
  return out;
}

CliffordElement sample_clifford(std::mt19937_64& rng) {
  const CliffordGroup& g = CliffordGroup::instance();
  std::uniform_int_distribution<int> dist(0, g.size() - 1);
  return g.element(dist(rng));
}

std::mt19937_64 split_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Channel Channel::unitary(const Matrix& u) {
  Channel c;
  c.superop = kron(Matrix(u.conjugate()), u);
  return c;
}

Matrix Channel::apply(const Matrix& rho) const {
  const Eigen::Index d = rho.rows();
  const Vector v = superop * Eigen::Map<const Vector>(rho.data(), d * d);
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Channel Channel::then(const Channel& next) const {
  Channel c;
  c.superop = next.superop * superop;
  return c;
}

Channel idle_channel(const Device& device, const std::optional<DecoherenceParams>& dec,
                     double t) {
  if (!(t >= 0.0)) throw ValidationError("idle time must be non-negative");
  return exp_channel(liouvillian(device, dec, true), t);
}

Channel gate_channel(const Device& device, const GateSpec& gate,
                     const std::optional<DecoherenceParams>& dec) {
  const Channel u = Channel::unitary(simulate_gate(device, gate));
  if (!dec) return u;
  const Channel half = exp_channel(liouvillian(device, dec, false), 0.5 * gate.duration);
  return half.then(u).then(half);
}

Channel ideal_gate_channel(const Device& device, GateKind kind, double duration,
                           const std::optional<DecoherenceParams>& dec) {
  const Channel u = Channel::unitary(embed_computational(device.hilbert, target_unitary(kind)));
  if (!dec) return u;
  const Channel half = exp_channel(liouvillian(device, dec, false), 0.5 * duration);
  return half.then(u).then(half);
}

void RBConfig::validate() const {
  if (lengths.empty()) throw ValidationError("RB needs at least one length");
  for (std::size_t i = 0; i < lengths.size(); ++i)
    if (lengths[i] < 1 || (i > 0 && lengths[i] <= lengths[i - 1]))
      throw ValidationError("RB lengths must be ascending and >= 1");
  if (sequences_per_length < 1) throw ValidationError("sequences_per_length must be >= 1");
  if (!(single_qubit_duration >= 0.0) || !(cz_duration > 0.0))
    throw ValidationError("gate durations must be positive");
  if (!(depolarizing_per_clifford >= 0.0 && depolarizing_per_clifford <= 1.0))
    throw ValidationError("depolarizing probability must lie in [0, 1]");
  if (decoherence) decoherence->validate();
  if (interleaved_gate && !ideal_interleaved) interleaved_gate->validate();
  if (interleaved_gate && ideal_interleaved && !(interleaved_gate->duration > 0.0))
    throw ValidationError("gate duration must be positive");
  if (ideal_interleaved && !interleaved_gate)
    throw ValidationError("ideal interleaving needs a gate kind and duration");
  if (native_cz) {
    native_cz->validate();
    if (native_cz->kind != GateKind::kPswapCz && native_cz->kind != GateKind::kSwapfreeCz)
      throw ValidationError("native entangler must be a cZ");
  }
}

void RBResult::write_csv(std::ostream& out) const {
  out << "length,mean,sem\n" << std::setprecision(12);
  for (const auto& p : data) out << p.length << ',' << p.mean << ',' << p.sem << '\n';
}

RBChannels build_rb_channels(const Device& device, const RBConfig& config) {
  device.validate();
  config.validate();
  RBChannels ch;
  ch.config = device.hilbert;
  const auto& c1 = single_qubit_cliffords();
  for (std::size_t a = 0; a < c1.size(); ++a)
    for (std::size_t b = 0; b < c1.size(); ++b)
      ch.single.push_back(embed_computational(device.hilbert, kron(c1[a], c1[b])));
  ch.idle = idle_channel(device, config.decoherence, config.single_qubit_duration);
  ch.cz = config.native_cz
              ? gate_channel(device, *config.native_cz, config.decoherence)
              : ideal_gate_channel(device, GateKind::kPswapCz, config.cz_duration,
                                   config.decoherence);
  if (config.interleaved_gate) {
    const GateSpec& g = *config.interleaved_gate;
    ch.interleaved = config.ideal_interleaved
                         ? ideal_gate_channel(device, g.kind, g.duration, config.decoherence)
                         : gate_channel(device, g, config.decoherence);
    ch.interleaved_clifford =
        CliffordGroup::instance().find(target_unitary(config.interleaved_gate->kind));
  }
  ch.depolarizing = config.depolarizing_per_clifford;
  return ch;
}

namespace {

void apply_element(const RBChannels& ch, const CliffordElement& e, Matrix& rho) {
  const int n1 = static_cast<int>(single_qubit_cliffords().size());
  for (const NativeStep& s : e.decomposition) {
    if (s.cz) {
      rho = ch.cz.apply(rho);
    } else {
      const Matrix& v = ch.single[s.left * n1 + s.right];
      rho = ch.idle.apply(v * rho * v.adjoint());
    }
  }
  if (ch.depolarizing > 0.0) {
    const auto idx = computational_indices(ch.config);
    double pop = 0.0;
    for (int i : idx) pop += rho(i, i).real();
    rho *= 1.0 - ch.depolarizing;
    for (int i : idx) rho(i, i) += ch.depolarizing * pop / 4.0;
  }
}

}  // namespace

double run_sequence(const RBChannels& ch, const std::vector<int>& cliffords) {
  const CliffordGroup& group = CliffordGroup::instance();
  const int gg = ch.config.index(0, 0);
  const int d = ch.config.dim();
  Matrix rho = Matrix::Zero(d, d);
  rho(gg, gg) = 1.0;
  int total = 0;
  for (int c : cliffords) {
    apply_element(ch, group.element(c), rho);
    total = group.compose(total, c);
    if (ch.interleaved) {
      rho = ch.interleaved->apply(rho);
      total = group.compose(total, *ch.interleaved_clifford);
    }
  }
  apply_element(ch, group.element(group.inverse(total)), rho);
  return rho(gg, gg).real();
}

namespace {

std::vector<int> sample_sequence(std::mt19937_64& rng, int length) {
  std::vector<int> seq(length);
  for (int& c : seq) c = sample_clifford(rng).index;
  return seq;
}

std::vector<DecayPoint> run_with(const RBChannels& ch, const RBConfig& config) {
  std::vector<DecayPoint> out;
  for (std::size_t li = 0; li < config.lengths.size(); ++li) {
    std::vector<double> survival;
    for (int s = 0; s < config.sequences_per_length; ++s) {
      auto rng = split_rng(config.seed, li, s);
      survival.push_back(run_sequence(ch, sample_sequence(rng, config.lengths[li])));
    }
    out.push_back({config.lengths[li], mean(survival), sem(survival)});
  }
  return out;
}

}  // namespace

std::vector<DecayPoint> run_rb(const Device& device, const RBConfig& config) {
  return run_with(build_rb_channels(device, config), config);
}

DecayFit fit_decay(const std::vector<DecayPoint>& data) {
  std::vector<int> lengths;
  for (const auto& p : data) {
    if (p.length < 0 || !std::isfinite(p.mean)) throw ValidationError("bad decay data point");
    lengths.push_back(p.length);
  }
  std::sort(lengths.begin(), lengths.end());
  if (std::unique(lengths.begin(), lengths.end()) - lengths.begin() < 4)
    throw FitError("decay fit needs at least four distinct lengths");
  double lo = data[0].mean, hi = data[0].mean;
  for (const auto& p : data) {
    lo = std::min(lo, p.mean);
    hi = std::max(hi, p.mean);
  }
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)))
    throw FitError("decay data are flat; P is undetermined");

  // P = 1 - 10^-x keeps resolution near P = 1.
  auto p_of = [](double x) { return 1.0 - std::pow(10.0, -x); };
  auto rss = [&](double x) { return solve_linear(data, p_of(x)).rss; };
  double best_x = 0.01;
  double best = rss(best_x);
  constexpr int grid = 400;
  const double x_lo = 0.01, x_hi = 9.0;
  const double dx = (x_hi - x_lo) / grid;
  for (int i = 1; i <= grid; ++i) {
    const double x = x_lo + i * dx;
    const double r = rss(x);
    if (r < best) {
      best = r;
      best_x = x;
    }
  }
  std::uintmax_t iters = 100;
  best_x = boost::math::tools::brent_find_minima(rss, std::max(x_lo, best_x - dx),
                                                 std::min(x_hi, best_x + dx), 52, iters)
               .first;
  double p = p_of(best_x);
  LinearSolve lin = solve_linear(data, p);
  Eigen::Vector3d theta(lin.A, p, lin.C);

  const int n = static_cast<int>(data.size());
  auto jacobian = [&](const Eigen::Vector3d& t, Eigen::MatrixXd& j, Eigen::VectorXd& r) {
    j.resize(n, 3);
    r.resize(n);
    for (int i = 0; i < n; ++i) {
      const double N = data[i].length;
      const double pn = std::pow(t(1), N);
      j(i, 0) = pn;
      j(i, 1) = N > 0 ? t(0) * N * std::pow(t(1), N - 1) : 0.0;
      j(i, 2) = 1.0;
      r(i) = t(0) * pn + t(2) - data[i].mean;
    }
  };
  Eigen::MatrixXd j;
  Eigen::VectorXd r;
  double lambda = 1e-3;
  jacobian(theta, j, r);
  for (int it = 0; it < 100; ++it) {
    const Eigen::Matrix3d jtj = j.transpose() * j;
    Eigen::Matrix3d damped = jtj;
    damped.diagonal() *= 1.0 + lambda;
    const Eigen::Vector3d step = damped.ldlt().solve(-j.transpose() * r);
    Eigen::Vector3d trial = theta + step;
    if (!(trial(1) > 0.0 && trial(1) < 1.0)) {
      lambda *= 10.0;
      continue;
    }
    Eigen::MatrixXd j2;
    Eigen::VectorXd r2;
    jacobian(trial, j2, r2);
    if (r2.squaredNorm() <= r.squaredNorm()) {
      const bool done = step.norm() <= 1e-15 * (1.0 + theta.norm());
      theta = trial;
      j = j2;
      r = r2;
      lambda = std::max(lambda / 10.0, 1e-12);
      if (done) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }

  DecayFit fit;
  fit.A = theta(0);
  fit.P = theta(1);
  fit.C = theta(2);
  if (!(fit.P > 1e-3 && fit.P < 1.0 - 1e-9))
    throw FitError("fitted decay P = " + std::to_string(fit.P) + " is at a bound");
  fit.residual_rms = std::sqrt(r.squaredNorm() / n);
  const double sigma2 = n > 3 ? r.squaredNorm() / (n - 3) : 0.0;
  const Eigen::Matrix3d jtj = j.transpose() * j;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (!lu.isInvertible()) throw FitError("decay fit Jacobian is singular");
  fit.covariance = sigma2 * lu.inverse();
  return fit;
}

double interleaved_fidelity(double p_ref, double p_int, int n_qubits) {
  if (n_qubits < 1) throw ValidationError("n_qubits must be >= 1");
  if (!(p_ref > 0.0 && p_ref <= 1.0) || !(p_int >= 0.0 && p_int <= 1.0))
    throw ValidationError("decay parameters must lie in (0, 1]");
  const double dim = std::pow(2.0, n_qubits);
  return 1.0 - (1.0 - p_int / p_ref) * (dim - 1.0) / dim;
}

double signal_to_p(double s, const DecayFit& fit, int n_gates) {
  if (n_gates < 1) throw ValidationError("n_gates must be >= 1");
  const double ratio = (s - fit.C) / fit.A;
  if (!(ratio > 0.0)) throw DomainError("(S - C)/A must be positive");
  return std::pow(ratio, 1.0 / n_gates);
}

double rb_error(double p, int n_qubits) {
  const double dim = std::pow(2.0, n_qubits);
  return (1.0 - p) * (dim - 1.0) / dim;
}

InterleavedResult run_interleaved_rb(const Device& device, const RBConfig& config) {
  if (!config.interleaved_gate) throw ValidationError("interleaved RB needs a gate");
  RBChannels ch = build_rb_channels(device, config);
  InterleavedResult res;
  res.interleaved.data = run_with(ch, config);
  ch.interleaved.reset();
  ch.interleaved_clifford.reset();
  res.reference.data = run_with(ch, config);
  res.reference.fit = fit_decay(res.reference.data);
  res.interleaved.fit = fit_decay(res.interleaved.data);
  const double pr = res.reference.fit.P, pi = res.interleaved.fit.P;
  res.fidelity = interleaved_fidelity(pr, pi, 2);
  res.error = 1.0 - res.fidelity;
  const double dfi = 0.75 / pr;
  const double dfr = -0.75 * pi / (pr * pr);
  res.error_sigma = std::hypot(dfi * res.interleaved.fit.sigma_P(),
                               dfr * res.reference.fit.sigma_P());
  return res;
}

SimultaneousRBResult run_simultaneous_rb(const Device& device, const RBConfig& config) {
  RBChannels ch = build_rb_channels(device, config);
  const auto& tables = single_tables();
  const HilbertConfig& cfg = device.hilbert;
  const int n1 = static_cast<int>(single_qubit_cliffords().size());
  const int d = cfg.dim();

  // mode 0: L alone, 1: R alone, 2: both. Returns marginal survival per qubit.
  auto survive = [&](int mode, std::mt19937_64& rng, int length) {
    std::uniform_int_distribution<int> dist(0, n1 - 1);
    Matrix rho = Matrix::Zero(d, d);
    rho(cfg.index(0, 0), cfg.index(0, 0)) = 1.0;
    int total[2] = {0, 0};
    auto apply = [&](int a, int b) {
      const Matrix& v = ch.single[a * n1 + b];
      rho = ch.idle.apply(v * rho * v.adjoint());
    };
    for (int i = 0; i < length; ++i) {
      const int a = mode != 1 ? dist(rng) : 0;
      const int b = mode != 0 ? dist(rng) : 0;
      apply(a, b);
      total[0] = tables.compose[total[0]][a];
      total[1] = tables.compose[total[1]][b];
    }
    apply(tables.inverse[total[0]], tables.inverse[total[1]]);
    std::array<double, 2> marg{0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      const BasisLabel b = cfg.label(i);
      if (b.n_L == 0) marg[0] += rho(i, i).real();
      if (b.n_R == 0) marg[1] += rho(i, i).real();
    }
    return marg;
  };

  SimultaneousRBResult res;
  for (int mode = 0; mode < 3; ++mode) {
    std::vector<DecayPoint> pts[2];
    for (std::size_t li = 0; li < config.lengths.size(); ++li) {
      std::vector<double> s[2];
      for (int q = 0; q < config.sequences_per_length; ++q) {
        auto rng = split_rng(config.seed, 100 * (mode + 1) + li, q);
        const auto m = survive(mode, rng, config.lengths[li]);
        s[0].push_back(m[0]);
        s[1].push_back(m[1]);
      }
      for (int k = 0; k < 2; ++k) pts[k].push_back({config.lengths[li], mean(s[k]), sem(s[k])});
    }
    for (int k = 0; k < 2; ++k) {
      if (mode == 2) {
        res.simultaneous[k] = fit_decay(pts[k]);
        res.error_simultaneous[k] = rb_error(res.simultaneous[k].P, 1);
      } else if (mode == k) {
        res.alone[k] = fit_decay(pts[k]);
        res.error_alone[k] = rb_error(res.alone[k].P, 1);
      }
    }
  }
  return res;
}

}  // namespace paracz
