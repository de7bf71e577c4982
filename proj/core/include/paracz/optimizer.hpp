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
#ifndef PARACZ_OPTIMIZER_HPP_
#define PARACZ_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paracz/benchmarking.hpp"

namespace paracz {

struct EsConfig {
  int population_m = 50;
  double survival_rate_s = 0.2;
  double scattering_p = 1.0;
  std::vector<double> initial_steps;
  int max_iterations = 30;
  std::uint64_t seed = 0;

  int survivors() const;
  void validate(std::size_t dim) const;
};

enum class Direction { kMinimize, kMaximize };

const char* to_string(Direction d);
Direction direction_from_string(const std::string& s);

struct ObjectiveSpec {
  int interleaved_count_M = 10;
  int repeats = 10;
  Direction direction = Direction::kMaximize;
  std::vector<std::string> parameter_names{"pump_frequency", "amplitude", "theta_L",
                                           "theta_R"};

  void validate() const;
};

// Objective value at x; eval_seed seeds any randomness inside the evaluation.
using Objective = std::function<double(const Eigen::VectorXd& x, std::uint64_t eval_seed)>;

struct EsStep {
  Eigen::VectorXd center;
  Eigen::VectorXd steps;
  std::vector<Eigen::VectorXd> population;
  std::vector<double> values;
  std::vector<int> survivors;  // indices into population, best first
};

// Throws ObjectiveError when the objective throws or returns a non-finite value.
EsStep es_step(const Eigen::VectorXd& center, const Eigen::VectorXd& steps,
               const Objective& objective, const EsConfig& config, std::mt19937_64& rng,
               Direction direction = Direction::kMinimize);

struct EsRun {
  Eigen::VectorXd best;
  double best_value = 0.0;
  std::vector<double> history;  // best-so-far value after each iteration
  std::vector<Eigen::VectorXd> centers;
};

EsRun run_es(const Eigen::VectorXd& start, const Objective& objective, const EsConfig& config,
             Direction direction);

// Gate parameters by name: pump_frequency (rad/s), amplitude, width (plateau,
// s), theta_L, theta_R, drag_1, drag_2.
Eigen::VectorXd gate_parameters(const GateSpec& gate, const std::vector<std::string>& names);
GateSpec with_parameters(const GateSpec& gate, const std::vector<std::string>& names,
                         const Eigen::VectorXd& x);

// Mean survival of |gg> after M (Clifford, gate) pairs plus recovery, over
// repeats random scaffolds drawn from eval_seed.
double interleaved_signal(const Device& device, const GateSpec& gate, const RBConfig& rb,
                          const ObjectiveSpec& obj, std::uint64_t eval_seed);

struct GateOptimization {
  GateSpec gate;
  EsRun run;

  void write_history_csv(std::ostream& out, const std::vector<std::string>& names) const;
};

GateOptimization optimize_gate(const Device& device, const GateSpec& gate,
                               const EsConfig& es, const ObjectiveSpec& obj,
                               const RBConfig& rb);

std::vector<double> history_to_fidelity(const std::vector<double>& history,
                                        const DecayFit& reference_fit, int n_gates);

}  // namespace paracz

#endif  // PARACZ_OPTIMIZER_HPP_
