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
#include "paracz/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include "paracz/error.hpp"

namespace paracz {

int EsConfig::survivors() const {
  return static_cast<int>(std::ceil(population_m * survival_rate_s - 1e-12));
}

void EsConfig::validate(std::size_t dim) const {
  if (population_m < 2) throw ValidationError("population must be >= 2");
  if (!(survival_rate_s > 0.0 && survival_rate_s < 1.0))
    throw ValidationError("survival rate must lie in (0, 1)");
  if (std::floor(population_m * survival_rate_s) < 2)
    throw ValidationError("floor(m s) must be >= 2");
  if (!(scattering_p > 0.0)) throw ValidationError("scattering factor must be positive");
  if (initial_steps.size() != dim)
    throw ValidationError("one initial step per parameter is required");
  for (double s : initial_steps)
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("steps must be positive");
  if (max_iterations < 0) throw ValidationError("max_iterations must be >= 0");
}

const char* to_string(Direction d) { return d == Direction::kMinimize ? "minimize" : "maximize"; }

Direction direction_from_string(const std::string& s) {
  if (s == "minimize") return Direction::kMinimize;
  if (s == "maximize") return Direction::kMaximize;
  throw ValidationError("direction must be minimize or maximize");
}

void ObjectiveSpec::validate() const {
  if (interleaved_count_M < 1) throw ValidationError("M must be >= 1");
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  if (parameter_names.empty()) throw ValidationError("no parameters to optimize");
}

EsStep es_step(const Eigen::VectorXd& center, const Eigen::VectorXd& steps,
               const Objective& objective, const EsConfig& config, std::mt19937_64& rng,
               Direction direction) {
  const Eigen::Index dim = center.size();
  config.validate(dim);
  if (steps.size() != dim) throw ValidationError("step vector does not match the center");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  EsStep out;
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < config.population_m; ++i) {
    Eigen::VectorXd x(dim);
    for (Eigen::Index k = 0; k < dim; ++k) x(k) = center(k) + steps(k) * unit(rng);
    out.population.push_back(x);
    seeds.push_back(rng());
  }
  for (int i = 0; i < config.population_m; ++i) {
    double v;
    try {
      v = objective(out.population[i], seeds[i]);
    } catch (const std::exception& e) {
      throw ObjectiveError(std::string("objective failed: ") + e.what());
    }
    if (!std::isfinite(v)) throw ObjectiveError("objective returned a non-finite value");
    out.values.push_back(v);
  }
  std::vector<int> order(config.population_m);
  std::iota(order.begin(), order.end(), 0);
  const double sign = direction == Direction::kMinimize ? 1.0 : -1.0;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sign * out.values[a] < sign * out.values[b];
  });
  order.resize(config.survivors());
  out.survivors = order;

  const double n = static_cast<double>(order.size());
  out.center = Eigen::VectorXd::Zero(dim);
  for (int i : order) out.center += out.population[i] / n;
  out.steps.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    double var = 0.0;
    // Spread about the sampling center, not the survivor mean.
    for (int i : order) var += std::pow(out.population[i](k) - center(k), 2);
    const double sd = std::sqrt(var / (n - 1.0));
    out.steps(k) = std::max(config.scattering_p * sd, 1e-6 * config.initial_steps[k]);
  }
  return out;
}

EsRun run_es(const Eigen::VectorXd& start, const Objective& objective, const EsConfig& config,
             Direction direction) {
  config.validate(start.size());
  std::mt19937_64 rng(config.seed);
  EsRun run;
  run.best = start;
  run.best_value = direction == Direction::kMinimize ? std::numeric_limits<double>::infinity()
                                                     : -std::numeric_limits<double>::infinity();
  Eigen::VectorXd center = start;
  Eigen::VectorXd steps = Eigen::Map<const Eigen::VectorXd>(config.initial_steps.data(),
                                                            start.size());
  for (int it = 0; it < config.max_iterations; ++it) {
    const EsStep s = es_step(center, steps, objective, config, rng, direction);
    const int top = s.survivors.front();
    const bool better = direction == Direction::kMinimize ? s.values[top] < run.best_value
                                                          : s.values[top] > run.best_value;
    if (better) {
      run.best_value = s.values[top];
      run.best = s.population[top];
    }
    run.history.push_back(run.best_value);
    center = s.center;
    steps = s.steps;
    run.centers.push_back(center);
  }
  return run;
}

Eigen::VectorXd gate_parameters(const GateSpec& gate, const std::vector<std::string>& names) {
  Eigen::VectorXd x(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& n = names[i];
    if (n == "theta_L") x(i) = gate.virtual_z[0];
    else if (n == "theta_R") x(i) = gate.virtual_z[1];
    else if (!gate.gate_tone) throw ValidationError("gate has no tone to parametrize");
    else if (n == "pump_frequency") x(i) = gate.gate_tone->omega_p;
    else if (n == "amplitude") x(i) = gate.gate_tone->amplitude;
    else if (n == "width") x(i) = gate.gate_tone->envelope.plateau;
    else if (n == "drag_1") x(i) = gate.gate_tone->drag[0];
    else if (n == "drag_2") x(i) = gate.gate_tone->drag[1];
    else throw ValidationError("unknown gate parameter '" + n + "'");
  }
  return x;
}

GateSpec with_parameters(const GateSpec& gate, const std::vector<std::string>& names,
                         const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != names.size())
    throw ValidationError("parameter vector does not match the names");
  GateSpec g = gate;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& n = names[i];
    if (n == "theta_L") g.virtual_z[0] = x(i);
    else if (n == "theta_R") g.virtual_z[1] = x(i);
    else if (!g.gate_tone) throw ValidationError("gate has no tone to parametrize");
    else if (n == "pump_frequency") g.gate_tone->omega_p = x(i);
    else if (n == "amplitude") g.gate_tone->amplitude = x(i);
    else if (n == "drag_1") g.gate_tone->drag[0] = x(i);
    else if (n == "drag_2") g.gate_tone->drag[1] = x(i);
    else if (n == "width") {
      g.gate_tone->envelope.plateau = std::max(0.0, x(i));
      g.duration = g.gate_tone->end();
    } else {
      throw ValidationError("unknown gate parameter '" + n + "'");
    }
  }
  return g;
}

namespace {

double scaffold_signal(const RBChannels& channels, const ObjectiveSpec& obj,
                       std::uint64_t eval_seed) {
  double sum = 0.0;
  for (int r = 0; r < obj.repeats; ++r) {
    auto rng = split_rng(eval_seed, 0, r);
    std::vector<int> seq(obj.interleaved_count_M);
    for (int& c : seq) c = sample_clifford(rng).index;
    sum += run_sequence(channels, seq);
  }
  return sum / obj.repeats;
}

}  // namespace

double interleaved_signal(const Device& device, const GateSpec& gate, const RBConfig& rb,
                          const ObjectiveSpec& obj, std::uint64_t eval_seed) {
  obj.validate();
  RBConfig cfg = rb;
  cfg.interleaved_gate = gate;
  return scaffold_signal(build_rb_channels(device, cfg), obj, eval_seed);
}

void GateOptimization::write_history_csv(std::ostream& out,
                                         const std::vector<std::string>& names) const {
  out << "iteration,best_signal";
  for (const auto& n : names) out << ",center_" << n;
  out << '\n' << std::setprecision(15);
  for (std::size_t i = 0; i < run.history.size(); ++i) {
    out << i + 1 << ',' << run.history[i];
    for (Eigen::Index k = 0; k < run.centers[i].size(); ++k) out << ',' << run.centers[i](k);
    out << '\n';
  }
}

GateOptimization optimize_gate(const Device& device, const GateSpec& gate, const EsConfig& es,
                               const ObjectiveSpec& obj, const RBConfig& rb) {
  device.validate();
  gate.validate();
  obj.validate();
  const Eigen::VectorXd start = gate_parameters(gate, obj.parameter_names);
  es.validate(start.size());
  // Clifford channels do not depend on the tuned gate.
  RBConfig base = rb;
  base.interleaved_gate.reset();
  const RBChannels scaffold = build_rb_channels(device, base);
  const int target = CliffordGroup::instance().find(target_unitary(gate.kind));
  Objective f = [&](const Eigen::VectorXd& x, std::uint64_t seed) {
    RBChannels ch = scaffold;
    ch.interleaved = gate_channel(device, with_parameters(gate, obj.parameter_names, x),
                                  rb.decoherence);
    ch.interleaved_clifford = target;
    return scaffold_signal(ch, obj, seed);
  };
  GateOptimization out;
  out.run = run_es(start, f, es, obj.direction);
  out.gate = out.run.history.empty() ? gate
                                     : with_parameters(gate, obj.parameter_names, out.run.best);
  if (out.run.history.empty()) out.run.best = start;
  return out;
}

std::vector<double> history_to_fidelity(const std::vector<double>& history,
                                        const DecayFit& reference_fit, int n_gates) {
  if (!(reference_fit.P > 0.0 && reference_fit.P < 1.0))
    throw ValidationError("reference fit must have P in (0, 1)");
  std::vector<double> out;
  for (double s : history)
    out.push_back(interleaved_fidelity(reference_fit.P, signal_to_p(s, reference_fit, n_gates),
                                       2));
  return out;
}

}  // namespace paracz
