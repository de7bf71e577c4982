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
#ifndef PARACZ_BENCHMARKING_HPP_
#define PARACZ_BENCHMARKING_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "paracz/gates.hpp"

namespace paracz {

// One native step of a Clifford decomposition: a pair of single-qubit
// Cliffords (indices into single_qubit_cliffords()) or a cZ.
struct NativeStep {
  bool cz = false;
  int left = 0;
  int right = 0;
};

struct CliffordElement {
  int index = 0;
  int cz_count = 0;
  std::vector<NativeStep> decomposition;  // applied first to last
};

// The 24 single-qubit Cliffords, identity first.
const std::vector<Eigen::Matrix2cd>& single_qubit_cliffords();

class CliffordGroup {
 public:
  static constexpr int kOrder = 11520;

  // Built once by breadth-first search over cZ count.
  static const CliffordGroup& instance();

  int size() const { return static_cast<int>(elements_.size()); }
  const CliffordElement& element(int i) const { return elements_.at(i); }
  const Matrix4& unitary(int i) const { return unitaries_.at(i); }
  // Index of u up to global phase; throws ValidationError when u is not in the group.
  int find(const Matrix4& u) const;
  int compose(int first, int second) const;  // second after first
  int inverse(int i) const;
  std::array<int, 4> class_sizes() const;

 private:
  CliffordGroup();
  std::vector<CliffordElement> elements_;
  std::vector<Matrix4> unitaries_;
  std::unordered_map<std::uint64_t, int> lookup_;
};

Matrix4 native_unitary(const NativeStep& step);

CliffordElement sample_clifford(std::mt19937_64& rng);

// Deterministic rng for one sequence of one stream.
std::mt19937_64 split_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Quantum channel on the truncated space as a column-stacking superoperator.
struct Channel {
  Matrix superop;

  static Channel unitary(const Matrix& u);
  Matrix apply(const Matrix& rho) const;
  Channel then(const Channel& next) const;  // next after this
};

// Free evolution plus decoherence for time t in the rotating dressed frame.
Channel idle_channel(const Device& device, const std::optional<DecoherenceParams>& dec,
                     double t);
// D(t_g/2) U D(t_g/2) with U the simulated rotating-frame gate.
Channel gate_channel(const Device& device, const GateSpec& gate,
                     const std::optional<DecoherenceParams>& dec);
// Same with an ideal computational target in place of the simulated unitary.
Channel ideal_gate_channel(const Device& device, GateKind kind, double duration,
                           const std::optional<DecoherenceParams>& dec);

struct RBConfig {
  std::vector<int> lengths{1, 5, 10, 20, 40, 70, 100};
  int sequences_per_length = 30;
  std::optional<GateSpec> interleaved_gate;
  // Interleave the ideal target of interleaved_gate's kind and duration.
  bool ideal_interleaved = false;
  std::optional<GateSpec> native_cz;  // ideal cZ of cz_duration when absent
  double cz_duration = 50e-9;
  std::optional<DecoherenceParams> decoherence;
  double single_qubit_duration = 25e-9;
  // Test stub: depolarize the computational block with this probability
  // after every Clifford.
  double depolarizing_per_clifford = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DecayFit {
  double A = 0.0;
  double P = 0.0;
  double C = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double residual_rms = 0.0;

  double sigma_P() const { return std::sqrt(std::max(covariance(1, 1), 0.0)); }
  double evaluate(double n) const { return A * std::pow(P, n) + C; }
};

struct DecayPoint {
  int length = 0;
  double mean = 0.0;
  double sem = 0.0;
};

struct RBResult {
  std::vector<DecayPoint> data;
  DecayFit fit;

  void write_csv(std::ostream& out) const;
};

// Precomputed channels for one device and config.
struct RBChannels {
  std::vector<Matrix> single;  // 576 pair unitaries, index left * 24 + right
  Channel idle;
  Channel cz;
  std::optional<Channel> interleaved;
  std::optional<int> interleaved_clifford;  // group index of the ideal target
  double depolarizing = 0.0;
  HilbertConfig config;
};

RBChannels build_rb_channels(const Device& device, const RBConfig& config);

// Survival of |gg> after the sequence followed by its recovery Clifford.
double run_sequence(const RBChannels& channels, const std::vector<int>& cliffords);

std::vector<DecayPoint> run_rb(const Device& device, const RBConfig& config);

// S = A P^N + C by variable projection on P, polished with Gauss-Newton.
// Throws FitError on fewer than four lengths, flat data, or P at a bound.
DecayFit fit_decay(const std::vector<DecayPoint>& data);

// F = 1 - (1 - p_int/p_ref)(2^n - 1)/2^n.
double interleaved_fidelity(double p_ref, double p_int, int n_qubits);
// P = ((S - C)/A)^(1/N); throws DomainError when (S - C)/A <= 0.
double signal_to_p(double s, const DecayFit& fit, int n_gates);
// Error per Clifford r = (1 - P)(2^n - 1)/2^n.
double rb_error(double p, int n_qubits);

struct InterleavedResult {
  RBResult reference;
  RBResult interleaved;
  double fidelity = 0.0;
  double error = 0.0;
  double error_sigma = 0.0;
};

// Reference and interleaved runs share random sequences.
InterleavedResult run_interleaved_rb(const Device& device, const RBConfig& config);

struct SimultaneousRBResult {
  DecayFit alone[2];         // qubit k randomized, the other idle
  DecayFit simultaneous[2];  // marginal survival of qubit k, both randomized
  double error_alone[2] = {0.0, 0.0};
  double error_simultaneous[2] = {0.0, 0.0};
};

// Single-qubit Clifford RB on each transmon alone and on both at once.
SimultaneousRBResult run_simultaneous_rb(const Device& device, const RBConfig& config);

}  // namespace paracz

#endif  // PARACZ_BENCHMARKING_HPP_
