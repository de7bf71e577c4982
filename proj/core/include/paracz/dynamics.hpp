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
#ifndef PARACZ_DYNAMICS_HPP_
#define PARACZ_DYNAMICS_HPP_

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "paracz/circuit.hpp"
#include "paracz/pulses.hpp"

namespace paracz {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Frame { kLab, kRwaTwoLevel };

const char* to_string(Frame frame);
Frame frame_from_string(const std::string& s);

struct BasisLabel {
  int n_L = 0;
  int n_R = 0;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

std::string to_string(BasisLabel label);  // "gg", "eg", "fg", "32", ...
BasisLabel basis_label_from_string(const std::string& s);

struct HilbertConfig {
  int levels = 4;
  Frame frame = Frame::kLab;

  int dim() const;
  // Basis position of |n_L, n_R>; lexicographic in the lab frame, {eg, ge}
  // in the two-level frame. Throws ValidationError for states not kept.
  int index(int n_L, int n_R) const;
  int index(BasisLabel b) const { return index(b.n_L, b.n_R); }
  BasisLabel label(int i) const;
  void validate() const;
};

struct SimOptions {
  double step = 2e-12;
  std::array<double, 2> direct_drive_coupling{0.0, 0.0};  // rad/s per flux quantum
  double residual_nonlinear_zz = 0.0;                      // rad/s on |ee>
  bool counter_rotating = true;

  void validate() const;
};

struct DecoherenceParams {
  std::array<double, 2> t1{};
  std::array<double, 2> t2{};

  static DecoherenceParams uniform(double t1, double t2);
  double relaxation_rate(Qubit k) const { return 1.0 / t1[index(k)]; }
  // 1/T_phi = 1/T2 - 1/(2 T1).
  double pure_dephasing_rate(Qubit k) const;
  void validate() const;
};

struct Device {
  CircuitParams circuit;
  FluxBias bias;
  HilbertConfig hilbert;
  SimOptions sim;

  PulseSchedule schedule(std::vector<PumpTone> tones = {}) const {
    return PulseSchedule{bias, std::move(tones)};
  }
  void validate() const;
};

class DensityState {
 public:
  DensityState() = default;
  DensityState(HilbertConfig cfg, Matrix rho);

  static DensityState basis(const HilbertConfig& cfg, int n_L, int n_R);
  static DensityState pure(const HilbertConfig& cfg, const Vector& ket);

  const Matrix& matrix() const { return rho_; }
  Matrix& matrix() { return rho_; }
  const HilbertConfig& config() const { return cfg_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  double population(int n_L, int n_R) const;
  double trace() const;
  double purity() const;
  // Hermitian within 1e-10, unit trace within 1e-9, eigenvalues >= -1e-9.
  void validate() const;

 private:
  HilbertConfig cfg_;
  Matrix rho_;
};

// Single-transmon ladder operators embedded in the two-transmon space.
Matrix lowering_operator(int levels, Qubit k);
Matrix number_operator(int levels, Qubit k);

// Lab-frame Hamiltonian in rad/s. drive_flux is the pump waveform
// phi(t) - phi_s that multiplies the direct charge-drive couplings.
Matrix build_hamiltonian(const CircuitParams& params, FluxBias phi,
                         const HilbertConfig& cfg, const SimOptions& opts,
                         double drive_flux = 0.0);

// Exact exp(-i h H) for Hermitian H.
Matrix hermitian_exponential(const Matrix& h_matrix, double h);

// Throws NonUnitaryError unless ||U U^dag - 1|| < 1e-10.
DensityState apply_unitary(const DensityState& state, const Matrix& u);

double rwa_rabi(double g_p, double detuning, double t);

// Lindblad dissipator of per-transmon T1 decay and pure dephasing, acting
// in the bare basis of cfg.
class Dissipator {
 public:
  Dissipator(const HilbertConfig& cfg, const DecoherenceParams& dec);

  // D(rho).
  Matrix apply(const Matrix& rho) const;
  // exp(h D) rho, third-order Taylor.
  void advance(Matrix& rho, double h) const;
  // All jump operators, for building superoperators in other bases.
  std::vector<Matrix> jump_operators() const;
  double max_rate() const;

 private:
  struct Jump {
    std::vector<int> row;  // row[col] or -1
    std::vector<double> value;
  };
  std::vector<Jump> jumps_;
  RealVector decay_diag_;  // 1/2 sum_k L_k^dag L_k, diagonal
  int dim_ = 0;
};

// A Hamiltonian that depends on time only through one scalar control u(t).
struct ControlledSystem {
  std::function<Matrix(double)> hamiltonian;
  std::function<double(double)> control;
  double u_min = 0.0;
  double u_max = 0.0;
  int dim = 0;
};

ControlledSystem lab_frame_system(const CircuitParams& params,
                                  const PulseSchedule& schedule,
                                  const HilbertConfig& cfg,
                                  const SimOptions& opts);

// Two-level {eg, ge} system in the frame of a single pump tone.
ControlledSystem rwa_frame_system(const CircuitParams& params,
                                  const PulseSchedule& schedule);

// Fourth-order composition of exponential-midpoint steps. Step exponentials
// are tabulated in the control variable with Chebyshev interpolation.
class Propagator {
 public:
  Propagator(ControlledSystem system, double max_step);

  Matrix unitary(double t0, double t1);
  // Strang splitting between unitary steps and the dissipator.
  void evolve(std::vector<Matrix>& rhos, double t0, double t1,
              const Dissipator* dissipator);

  int table_nodes() const { return last_nodes_; }

 private:
  class Table;
  struct StepTables;
  const StepTables& tables(double h);
  int steps_for(double span) const;
  void step_unitary(const StepTables& tab, double t, double h, Matrix& out);

  ControlledSystem sys_;
  double max_step_;
  std::map<double, std::shared_ptr<StepTables>> cache_;
  Matrix work_a_, work_b_, work_c_;
  int last_nodes_ = 0;
};

struct Trajectory {
  HilbertConfig config;
  std::vector<double> times;
  std::vector<DensityState> states;

  // t followed by populations of every basis state.
  void write_csv(std::ostream& out) const;
};

// Evolves from t = 0 to duration, recording the given sample times (which
// must lie in [0, duration]) and always the final state. Throws
// StepTooLargeError when opts.step does not resolve the fastest pump.
Trajectory evolve(const DensityState& initial, const CircuitParams& params,
                  const PulseSchedule& schedule,
                  const std::optional<DecoherenceParams>& dec,
                  const HilbertConfig& cfg, const SimOptions& opts,
                  double duration, std::vector<double> sample_times = {});

void check_step(const PulseSchedule& schedule, const SimOptions& opts);

// Eigenbasis of the static Hamiltonian, each eigenvector labelled by the bare
// state it overlaps most.
struct DressedFrame {
  HilbertConfig config;
  Matrix basis;        // column i is the dressed state labelled by bare index i
  RealVector energy;   // dressed energy, indexed by bare label
  RealVector frame_energy;  // E_gg + n_L w_L + n_R w_R
  double omega_L = 0.0;
  double omega_R = 0.0;

  double energy_of(int n_L, int n_R) const { return energy(config.index(n_L, n_R)); }
  // Lab-frame bare-basis propagator over [t0, t1] -> rotating dressed frame.
  Matrix to_rotating(const Matrix& u_lab, double t0, double t1) const;
  // Rotating-frame dressed density matrix at time t <-> lab bare basis.
  Matrix density_to_lab(const Matrix& rho_rot, double t) const;
  Matrix density_from_lab(const Matrix& rho_lab, double t) const;
  // diag(exp(i frame_energy t))
  Eigen::VectorXcd frame_phases(double t) const;
};

DressedFrame dressed_frame(const CircuitParams& params, FluxBias phi,
                           const HilbertConfig& cfg, const SimOptions& opts = {});

struct StaticSpectrum {
  RealVector energies;                 // ascending
  std::vector<BasisLabel> assignment;  // bare label of each ascending level
  double omega_L = 0.0;
  double omega_R = 0.0;
  double alpha_L = 0.0;
  double alpha_R = 0.0;
  double zeta = 0.0;
  DressedFrame frame;
};

// Requires cfg.levels >= 3. Throws AssignmentAmbiguityError.
StaticSpectrum diagonalize_static(const CircuitParams& params, FluxBias phi,
                                  const HilbertConfig& cfg,
                                  const SimOptions& opts = {});

// Quasienergies of a constant-envelope tone over one pump period, each
// unwrapped onto the branch closest to the static dressed energy of its label.
struct FloquetSpectrum {
  HilbertConfig config;
  RealVector quasienergy;  // indexed by bare label
  double period = 0.0;

  double energy_of(int n_L, int n_R) const {
    return quasienergy(config.index(n_L, n_R));
  }
  double omega_L() const { return energy_of(1, 0) - energy_of(0, 0); }
  double omega_R() const { return energy_of(0, 1) - energy_of(0, 0); }
  double zeta() const {
    return energy_of(1, 1) - energy_of(1, 0) - energy_of(0, 1) + energy_of(0, 0);
  }
};

// Ideal operations in the dressed computational frame. A single-qubit
// unitary acts on {g, e} of transmon k and leaves higher levels alone; a
// two-qubit unitary acts on the computational block (gg, ge, eg, ee).
Matrix embed_single_qubit(const HilbertConfig& cfg, Qubit k,
                          const Eigen::Matrix2cd& u);
Matrix embed_computational(const HilbertConfig& cfg, const Eigen::Matrix4cd& u);

FloquetSpectrum floquet_spectrum(const Device& device, double omega_p,
                                 double amplitude, double phase = 0.0);

}  // namespace paracz

#endif  // PARACZ_DYNAMICS_HPP_
