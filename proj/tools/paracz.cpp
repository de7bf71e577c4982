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
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paracz/config.hpp"
#include "paracz/error.hpp"

namespace fs = std::filesystem;
using namespace paracz;

namespace {

constexpr const char* kVersion = "0.3.0";
constexpr const char* kOutputEnv = "PARACZ_OUTPUT_DIR";

struct Flags {
  std::string config;
  std::string device;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> set;
};

// Files written by the current command; removed again if it fails.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    fs::create_directories(dir_);
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + p.string() + "'");
    out << std::setprecision(15);
    return out;
  }
  void write_json(const std::string& name, const Json& j) { open(name) << j.dump(2) << '\n'; }
  void discard() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }
  Json names() const {
    Json out = Json::array();
    for (const auto& p : written_) out.push_back(p.filename().string());
    return out;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

// Dotted path assignment; the value is parsed as JSON, falling back to a string.
void apply_override(Json& block, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &block;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || (*node)[parts[i]].is_null()) (*node)[parts[i]] = Json::object();
    node = &(*node)[parts[i]];
    if (!node->is_object()) throw ValidationError("'" + key + "' does not name an object field");
  }
  (*node)[parts.back()] = value;
}

struct Run {
  std::string command;
  DeviceConfig device;
  std::string device_file;
  std::optional<std::uint64_t> seed;
  Json block = Json::object();
  fs::path output_dir;

  std::uint64_t require_seed() const {
    if (!seed) throw ValidationError(command + " is stochastic and needs a seed");
    return *seed;
  }
  Json manifest() const {
    Json j{{"command", command},
           {"version", kVersion},
           {"device", to_json(device)},
           {"device_file", device_file},
           {"parameters", block}};
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    return j;
  }
};

Run resolve(const std::string& command, const Flags& flags) {
  Run run;
  run.command = command;
  Json file = Json::object();
  fs::path base = fs::current_path();
  if (!flags.config.empty()) {
    file = read_json_file(flags.config);
    check_keys(file, {"device_file", "seed", "output_dir", command.c_str()}, "run config");
    base = fs::absolute(flags.config).parent_path();
  }
  std::string device_file;
  if (file.contains("device_file")) device_file = (base / file["device_file"].get<std::string>()).string();
  if (!flags.device.empty()) device_file = flags.device;
  if (!device_file.empty()) {
    if (!fs::exists(device_file)) throw ValidationError("device file '" + device_file + "' not found");
    run.device = load_device_config(device_file);
    run.device_file = device_file;
  } else {
    run.device = default_device_config();
  }
  if (file.contains("seed")) run.seed = file["seed"].get<std::uint64_t>();
  if (flags.seed) run.seed = flags.seed;
  if (file.contains(command)) run.block = file[command];
  if (!run.block.is_object()) throw ValidationError("'" + command + "' block must be an object");
  for (const auto& s : flags.set) apply_override(run.block, s);

  if (!flags.output_dir.empty()) {
    run.output_dir = flags.output_dir;
  } else if (file.contains("output_dir")) {
    run.output_dir = base / file["output_dir"].get<std::string>();
  } else if (const char* env = std::getenv(kOutputEnv); env && *env) {
    run.output_dir = env;
  } else {
    run.output_dir = ".";
  }
  return run;
}

template <typename T>
T value_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string(key) + ": " + e.what());
  }
}

Qubit qubit_from(const Json& j, const char* key, Qubit fallback) {
  const std::string s = value_or<std::string>(j, key, name(fallback));
  if (s == "L") return Qubit::L;
  if (s == "R") return Qubit::R;
  throw ValidationError(std::string(key) + " must be \"L\" or \"R\"");
}

std::string num(double x) {
  if (!std::isfinite(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

// --- gate blocks, shared by gate, rb and optimize ---------------------------

struct GatePlan {
  GateSpec spec;
  bool compile = false;
  bool ideal = false;
  double t_g = 0.0;
  Envelope envelope;
  CompileOptions options;
};

GatePlan plan_gate(const Json& j) {
  check_keys(j, {"spec", "kind", "duration_s", "envelope", "path", "pump_frequency_hz", "refine",
                 "max_amplitude", "cancellation_tone", "ideal"},
             "gate");
  GatePlan plan;
  plan.ideal = value_or<bool>(j, "ideal", false);
  if (j.contains("spec")) {
    plan.spec = gate_spec_from_json(j["spec"]);
    return plan;
  }
  plan.spec.kind = gate_kind_from_string(value_or<std::string>(j, "kind", "pswap_cz"));
  plan.t_g = value_or<double>(j, "duration_s", 50e-9);
  plan.spec.duration = plan.t_g;
  if (!(plan.t_g > 0.0)) throw ValidationError("gate.duration_s must be positive");
  if (plan.ideal || plan.spec.kind == GateKind::kIdle) return plan;
  plan.compile = true;
  plan.envelope = j.contains("envelope")
                      ? envelope_from_json(j["envelope"])
                      : Envelope::hann_edges(0.2 * plan.t_g, 0.6 * plan.t_g, 0.2 * plan.t_g);
  if (std::abs(plan.envelope.duration() - plan.t_g) > 1e-15 &&
      plan.spec.kind != GateKind::kSwapfreeCz)
    throw ValidationError("gate envelope duration differs from duration_s");
  const std::string path = value_or<std::string>(j, "path", "fg");
  if (path != "fg" && path != "gf") throw ValidationError("gate.path must be \"fg\" or \"gf\"");
  plan.options.path = path == "fg" ? TwoPhotonPath::kFg : TwoPhotonPath::kGf;
  plan.options.pump_frequency = angular(value_or<double>(j, "pump_frequency_hz", 0.0));
  plan.options.refine = value_or<bool>(j, "refine", true);
  plan.options.max_amplitude = value_or<double>(j, "max_amplitude", 0.1);
  if (j.contains("cancellation_tone") && !j["cancellation_tone"].is_null())
    plan.options.cancellation_tone = pump_tone_from_json(j["cancellation_tone"]);
  return plan;
}

GateSpec build_gate(const Device& device, const GatePlan& plan) {
  if (!plan.compile) return plan.spec;
  switch (plan.spec.kind) {
    case GateKind::kPswapCz:
      return compile_pswap_cz(device, plan.t_g, plan.envelope, plan.options);
    case GateKind::kSwapfreeCz:
      return compile_swapfree_cz(device, plan.t_g, plan.options);
    case GateKind::kIswap:
      return compile_iswap(device, plan.envelope, plan.options);
    case GateKind::kIdle:
      break;
  }
  return idle_gate(plan.t_g);
}

RBConfig plan_rb(const Json& j, const Run& run) {
  RBConfig rb = rb_config_from_json(j.is_null() ? Json::object() : j);
  if (!j.contains("seed")) rb.seed = run.require_seed();
  rb.decoherence = run.device.decoherence;
  return rb;
}

// --- commands ---------------------------------------------------------------

void cmd_spectrum(Run& run, Outputs& out) {
  check_keys(run.block, {"phi_min", "phi_max", "points"}, "spectrum");
  SweepAxis axis{"phi", value_or<double>(run.block, "phi_min", 0.0),
                 value_or<double>(run.block, "phi_max", 0.5),
                 value_or<int>(run.block, "points", 101)};
  axis.validate();
  run.block = {{"phi_min", axis.start}, {"phi_max", axis.stop}, {"points", axis.points}};
  const CircuitParams& p = run.device.device.circuit;

  auto csv = out.open("spectrum.csv");
  csv << "phi,omega_L_hz,omega_R_hz,alpha_L_hz,alpha_R_hz,g_s_hz,zeta_s_hz\n";
  for (double phi : axis.values()) {
    const FluxBias b{phi};
    const double wl = transmon_frequency(p, Qubit::L, b), wr = transmon_frequency(p, Qubit::R, b);
    const double al = anharmonicity(p, Qubit::L, b), ar = anharmonicity(p, Qubit::R, b);
    const double g = static_couplings(p, b).total;
    double zeta = std::nan("");
    try {
      zeta = zz_static(g, wr - wl, al, ar);
    } catch (const DivergenceError&) {
    }
    csv << num(phi) << ',' << num(hertz(wl)) << ',' << num(hertz(wr)) << ',' << num(hertz(al))
        << ',' << num(hertz(ar)) << ',' << num(hertz(g)) << ',' << num(hertz(zeta)) << '\n';
  }
  Json results;
  try {
    results["phi_c"] = cancellation_flux(p).phi;
  } catch (const NoSignChangeError&) {
    results["phi_c"] = nullptr;
  }
  Json summary = run.manifest();
  summary["results"] = results;
  summary["outputs"] = out.names();
  out.write_json("spectrum_summary.json", summary);
}

void cmd_chevron(Run& run, Outputs& out) {
  const Json& j = run.block;
  check_keys(j, {"from", "to", "amplitude", "pump_center_hz", "detuning_hz", "time_s", "frame"},
             "chevron");
  Device device = run.device.device;
  if (j.contains("frame")) device.hilbert.frame = frame_from_string(j["frame"].get<std::string>());
  ChevronSpec spec;
  spec.from = basis_label_from_string(value_or<std::string>(j, "from", "eg"));
  spec.to = basis_label_from_string(value_or<std::string>(j, "to", "ge"));
  spec.amplitude = value_or<double>(j, "amplitude", 0.01);
  auto axis = [&](const char* key, const char* axis_name, double lo, double hi, int n) {
    const Json a = j.contains(key) ? j[key] : Json::object();
    check_keys(a, {"start", "stop", "points"}, std::string("chevron.") + key);
    SweepAxis ax{axis_name, value_or<double>(a, "start", lo), value_or<double>(a, "stop", hi),
                 value_or<int>(a, "points", n)};
    ax.validate();
    return ax;
  };
  SweepGrid grid;
  grid.axis1 = axis("detuning_hz", "detuning", -20e6, 20e6, 41);
  grid.axis2 = axis("time_s", "time", 0.0, 400e-9, 41);
  device.validate();
  const double center = j.contains("pump_center_hz")
                            ? angular(j["pump_center_hz"].get<double>())
                            : rectified_transition(run.device.device, spec.from, spec.to,
                                                   spec.amplitude);
  run.block = {{"from", to_string(spec.from)},
               {"to", to_string(spec.to)},
               {"amplitude", spec.amplitude},
               {"pump_center_hz", hertz(center)},
               {"frame", to_string(device.hilbert.frame)},
               {"detuning_hz",
                {{"start", grid.axis1.start}, {"stop", grid.axis1.stop}, {"points", grid.axis1.points}}},
               {"time_s",
                {{"start", grid.axis2->start}, {"stop", grid.axis2->stop}, {"points", grid.axis2->points}}}};
  grid.axis1.start = angular(grid.axis1.start);
  grid.axis1.stop = angular(grid.axis1.stop);

  const ChevronMap map = chevron_scan(device, center, spec, grid);
  auto csv = out.open("chevron.csv");
  map.write_csv(csv);
  csv.close();
  Json summary = run.manifest();
  summary["results"] = {{"max_population", map.population.maxCoeff()}};
  summary["outputs"] = out.names();
  out.write_json("chevron_summary.json", summary);
}

void cmd_cancelzz(Run& run, Outputs& out) {
  const Json& j = run.block;
  check_keys(j, {"static_zz_hz", "flux_search", "pump_frequency_hz", "amplitude_range",
                 "coarse_points", "ramp_s", "short_periods", "long_extra_s", "target_hz",
                 "max_refinements", "refine"},
             "cancelzz");
  Device device = run.device.device;
  ZZCancellationOptions o;
  o.coarse_points = value_or<int>(j, "coarse_points", o.coarse_points);
  o.ramp = value_or<double>(j, "ramp_s", o.ramp);
  o.short_periods = value_or<int>(j, "short_periods", o.short_periods);
  o.long_extra = value_or<double>(j, "long_extra_s", o.long_extra);
  const double target_hz = value_or<double>(j, "target_hz", 1e3);
  o.target = angular(target_hz);
  o.max_refinements = value_or<int>(j, "max_refinements", o.max_refinements);
  o.refine = value_or<bool>(j, "refine", o.refine);
  const auto range = value_or<std::array<double, 2>>(j, "amplitude_range", {0.0, 0.05});
  const auto search = value_or<std::array<double, 2>>(j, "flux_search", {0.3, 0.41});
  if (!(range[1] > range[0] && range[0] >= 0.0))
    throw ValidationError("amplitude_range must be increasing and non-negative");
  if (j.contains("static_zz_hz"))
    device.bias = flux_for_static_zz(device, angular(j["static_zz_hz"].get<double>()), search[0],
                                     search[1]);
  const double wp = j.contains("pump_frequency_hz") ? angular(j["pump_frequency_hz"].get<double>())
                                                    : dispersive_pump_frequency(device);
  run.device.device = device;
  run.block["amplitude_range"] = range;
  run.block["pump_frequency_hz"] = hertz(wp);
  run.block["coarse_points"] = o.coarse_points;
  run.block["ramp_s"] = o.ramp;
  run.block["short_periods"] = o.short_periods;
  run.block["long_extra_s"] = o.long_extra;
  run.block["target_hz"] = target_hz;
  run.block["max_refinements"] = o.max_refinements;
  run.block["refine"] = o.refine;

  const ZZCancellationResult r = zz_cancellation_search(device, wp, {range[0], range[1]}, o);
  {
    auto csv = out.open("zeta_curve.csv");
    csv << "amplitude,zeta_total_hz\n";
    for (const auto& [a, z] : r.zeta_total_curve) csv << num(a) << ',' << num(hertz(z)) << '\n';
  }
  {
    auto csv = out.open("refinement.csv");
    csv << "amplitude,zeta_cross_ramsey_hz\n";
    for (const auto& [a, z] : r.refinement) csv << num(a) << ',' << num(hertz(z)) << '\n';
  }
  Json summary = run.manifest();
  summary["results"] = {{"pump_amplitude_star", r.pump_amplitude_star},
                        {"refined_zeta_hz", hertz(r.refined_zeta)},
                        {"uncertainty_hz", hertz(r.uncertainty)},
                        {"coarse_amplitude", r.coarse_amplitude},
                        {"coarse_amplitude_uncertainty", r.coarse_amplitude_uncertainty},
                        {"quadratic_fit_hz", {hertz(r.quadratic_fit[0]), hertz(r.quadratic_fit[1]),
                                              hertz(r.quadratic_fit[2])}},
                        {"fit_relative_rms", r.fit_relative_rms}};
  summary["outputs"] = out.names();
  out.write_json("cancelzz_summary.json", summary);
}

void cmd_crossramsey(Run& run, Outputs& out) {
  const Json& j = run.block;
  check_keys(j, {"target", "delays_s", "tone", "ramp_s", "phase_points", "zeta_hint_hz"},
             "crossramsey");
  const Device& device = run.device.device;
  const Qubit target = qubit_from(j, "target", Qubit::L);
  CrossRamseyOptions o;
  if (j.contains("tone") && !j["tone"].is_null()) o.tone = pump_tone_from_json(j["tone"]);
  o.ramp = value_or<double>(j, "ramp_s", o.ramp);
  o.phase_points = value_or<int>(j, "phase_points", o.phase_points);
  const auto delays = value_or<std::vector<double>>(j, "delays_s", {100e-9, 400e-9});
  const double hint = angular(value_or<double>(j, "zeta_hint_hz", 0.0));
  if (delays.size() < 2) throw ValidationError("crossramsey needs at least two delays");
  for (std::size_t i = 0; i < delays.size(); ++i)
    if (!(delays[i] > 0.0) || (i > 0 && delays[i] <= delays[i - 1]))
      throw ValidationError("delays_s must be positive and ascending");
  run.block["target"] = name(target);
  run.block["ramp_s"] = o.ramp;
  run.block["phase_points"] = o.phase_points;
  run.block["delays_s"] = delays;
  run.block["zeta_hint_hz"] = hertz(hint);

  std::ostringstream rows;
  rows << std::setprecision(15);
  for (double d : delays) {
    const CrossRamseyResult g = cross_ramsey(device, target, false, d, o);
    const CrossRamseyResult e = cross_ramsey(device, target, true, d, o);
    rows << num(d) << ',' << num(g.phase) << ',' << num(e.phase) << ',' << num(g.contrast) << ','
         << num(e.contrast) << '\n';
  }
  const CrossRamseyZeta z =
      cross_ramsey_zeta(device, target, delays.front(), delays.back(), o, hint);
  auto csv = out.open("crossramsey.csv");
  csv << "delay_s,phase_control_g,phase_control_e,contrast_control_g,contrast_control_e\n"
      << rows.str();
  csv.close();
  Json summary = run.manifest();
  summary["results"] = {{"zeta_hz", hertz(z.zeta)}, {"uncertainty_hz", hertz(z.uncertainty)}};
  summary["outputs"] = out.names();
  out.write_json("crossramsey_summary.json", summary);
}

Json decoherence_summary(const Run& run, double t_g) {
  if (!run.device.decoherence) return nullptr;
  const auto& d = *run.device.decoherence;
  const double t1 = 0.5 * (d.t1[0] + d.t1[1]), t2 = 0.5 * (d.t2[0] + d.t2[1]);
  const DecoherenceLimit lim = decoherence_limit(t_g, t1, t2);
  return {{"main", lim.main}, {"minimal", lim.minimal}, {"t2_equals_t1", lim.t2_equals_t1}};
}

void cmd_gate(Run& run, Outputs& out) {
  const GatePlan plan = plan_gate(run.block);
  if (plan.ideal) throw ValidationError("the gate command simulates real pulses; drop \"ideal\"");
  const Device& device = run.device.device;
  const GateSpec gate = build_gate(device, plan);
  const GateReport report = gate_report(device, gate, std::nullopt);
  Json summary = run.manifest();
  summary["results"] = {{"gate", to_json(gate)},
                        {"report", to_json(report)},
                        {"decoherence_limit", decoherence_summary(run, gate.duration)}};
  summary["outputs"] = out.names();
  out.write_json("gate_summary.json", summary);
}

void write_rb(Outputs& out, const std::string& name, const RBResult& r) {
  auto csv = out.open(name);
  r.write_csv(csv);
}

void cmd_rb(Run& run, Outputs& out) {
  const Json& j = run.block;
  check_keys(j, {"gate", "rb", "idle_comparison"}, "rb");
  const bool idle_comparison = value_or<bool>(j, "idle_comparison", false);
  RBConfig rb = plan_rb(j.contains("rb") ? j["rb"] : Json::object(), run);
  const std::optional<GatePlan> plan =
      j.contains("gate") ? std::optional(plan_gate(j["gate"])) : std::nullopt;
  rb.validate();
  if (idle_comparison && !plan) throw ValidationError("idle_comparison needs a gate");
  const Device& device = run.device.device;
  run.block["rb"] = to_json(rb);
  run.block["idle_comparison"] = idle_comparison;

  Json results;
  if (!plan) {
    RBResult ref;
    ref.data = run_rb(device, rb);
    ref.fit = fit_decay(ref.data);
    write_rb(out, "rb_reference.csv", ref);
    results = {{"reference_fit", to_json(ref.fit)}, {"error_per_clifford", rb_error(ref.fit.P, 2)}};
  } else {
    rb.interleaved_gate = build_gate(device, *plan);
    rb.ideal_interleaved = plan->ideal;
    const InterleavedResult r = run_interleaved_rb(device, rb);
    if (r.interleaved.fit.P > r.reference.fit.P)
      std::cerr << "warning: interleaved decay is slower than the reference decay "
                   "(p_int > p_ref); the gate error estimate is not meaningful\n";
    write_rb(out, "rb_reference.csv", r.reference);
    write_rb(out, "rb_interleaved.csv", r.interleaved);
    results = {{"reference_fit", to_json(r.reference.fit)},
               {"interleaved_fit", to_json(r.interleaved.fit)},
               {"gate", to_json(*rb.interleaved_gate)},
               {"ideal_gate", plan->ideal},
               {"fidelity", r.fidelity},
               {"error", r.error},
               {"error_sigma", r.error_sigma},
               {"decoherence_limit", decoherence_summary(run, rb.interleaved_gate->duration)}};
    if (idle_comparison) {
      RBConfig idle = rb;
      idle.interleaved_gate = idle_gate(rb.interleaved_gate->duration);
      idle.ideal_interleaved = false;
      const InterleavedResult ri = run_interleaved_rb(device, idle);
      write_rb(out, "rb_idle.csv", ri.interleaved);
      results["idle_error"] = ri.error;
      results["idle_error_sigma"] = ri.error_sigma;
      results["epsilon_con"] = r.error - ri.error;
    }
  }
  Json summary = run.manifest();
  summary["results"] = results;
  summary["outputs"] = out.names();
  out.write_json("rb_summary.json", summary);
}

// Pump frequencies are given and reported in Hz; the optimizer works in rad/s.
double unit_scale(const std::string& parameter) {
  return parameter == "pump_frequency" ? kTwoPi : 1.0;
}

void cmd_optimize(Run& run, Outputs& out) {
  const Json& j = run.block;
  check_keys(j, {"gate", "perturbation", "es", "objective", "rb"}, "optimize");
  const ObjectiveSpec obj =
      objective_from_json(j.contains("objective") ? j["objective"] : Json::object());
  EsConfig es = es_config_from_json(j.contains("es") ? j["es"] : Json::object());
  if (!(j.contains("es") && j["es"].contains("seed"))) es.seed = run.require_seed();
  RBConfig rb = plan_rb(j.contains("rb") ? j["rb"] : Json::object(), run);
  if (!j.contains("gate")) throw ValidationError("optimize needs a gate block");
  const GatePlan plan = plan_gate(j["gate"]);
  if (plan.ideal) throw ValidationError("an ideal gate has nothing to optimize");
  const Json perturbation = j.contains("perturbation") ? j["perturbation"] : Json::object();
  if (!perturbation.is_object()) throw ValidationError("optimize.perturbation must be an object");
  check_keys(perturbation, {"pump_frequency", "amplitude", "width", "theta_L", "theta_R"},
             "optimize.perturbation");
  for (const auto& item : perturbation.items())
    if (!item.value().is_number()) throw ValidationError("perturbations must be numbers");
  const std::size_t dim = obj.parameter_names.size();
  if (es.initial_steps.size() != dim)
    throw ValidationError("es.initial_steps needs one entry per tuned parameter");
  const EsConfig es_input = es;
  for (std::size_t k = 0; k < dim; ++k) es.initial_steps[k] *= unit_scale(obj.parameter_names[k]);
  es.validate(dim);
  rb.validate();
  run.block["objective"] = to_json(obj);
  run.block["es"] = to_json(es_input);
  run.block["rb"] = to_json(rb);
  run.block["perturbation"] = perturbation;

  const Device& device = run.device.device;
  GateSpec gate = build_gate(device, plan);
  for (const auto& item : perturbation.items()) {
    const std::vector<std::string> one{item.key()};
    Eigen::VectorXd x = gate_parameters(gate, one);
    x(0) += item.value().get<double>() * unit_scale(item.key());
    gate = with_parameters(gate, one, x);
  }
  const GateOptimization r = optimize_gate(device, gate, es, obj, rb);
  {
    auto csv = out.open("optimize_history.csv");
    csv << "iteration,best_signal";
    for (const auto& n : obj.parameter_names)
      csv << ",center_" << n << (n == "pump_frequency" ? "_hz" : "");
    csv << '\n';
    for (std::size_t i = 0; i < r.run.history.size(); ++i) {
      csv << i + 1 << ',' << num(r.run.history[i]);
      for (std::size_t k = 0; k < dim; ++k)
        csv << ',' << num(r.run.centers[i](k) / unit_scale(obj.parameter_names[k]));
      csv << '\n';
    }
  }
  Json summary = run.manifest();
  summary["results"] = {{"initial_gate", to_json(gate)},
                        {"best_gate", to_json(r.gate)},
                        {"best_signal", r.run.history.empty() ? Json(nullptr) : Json(r.run.best_value)},
                        {"history", r.run.history}};
  summary["outputs"] = out.names();
  out.write_json("optimize_summary.json", summary);
}

void cmd_readout(Run& run, Outputs& out) {
  const Json& j = run.block;
  check_keys(j, {"model", "populations", "shots", "readout_time_s", "shuffle"}, "readout");
  const BallModel model = j.contains("model")
                              ? ball_model_from_json(j["model"])
                              : BallModel{{IQPoint{0.0, 0.0}, IQPoint{4.0, 0.0}, IQPoint{2.0, 3.4641016151377544}},
                                          {1.0, 1.0, 1.0}};
  const Populations pops = value_or<Populations>(j, "populations", {0.25, 0.25, 0.25, 0.25});
  const int shots = value_or<int>(j, "shots", 10000);
  const double t_ro = value_or<double>(j, "readout_time_s", 0.0);
  const bool do_shuffle = value_or<bool>(j, "shuffle", true);
  double total = 0.0;
  for (double p : pops) {
    if (!(p >= 0.0)) throw ValidationError("populations must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("populations must sum to 1");
  if (shots < 1) throw ValidationError("shots must be positive");
  if (t_ro < 0.0) throw ValidationError("readout_time_s must be non-negative");
  if (t_ro > 0.0 && !run.device.decoherence)
    throw ValidationError("readout_time_s needs device coherence times");
  std::mt19937_64 rng = split_rng(run.require_seed(), 0, 0);
  run.block = {{"model", to_json(model)},
               {"populations", pops},
               {"shots", shots},
               {"readout_time_s", t_ro},
               {"shuffle", do_shuffle}};

  const Populations actual =
      t_ro > 0.0 ? readout_decay(pops, t_ro, run.device.decoherence->t1[0], run.device.decoherence->t1[1])
                 : pops;
  const SeparationFidelity sep = separation_fidelity(model);
  const TriangleMetrics tri = triangle_metrics(model);
  const Eigen::Matrix3d conf = confusion_matrix(model);

  struct Setting {
    const char* name;
    bool pi_L, pi_R;
  };
  std::vector<Setting> settings{{"bare", false, false}};
  if (do_shuffle) {
    settings.push_back({"pi_L", true, false});
    settings.push_back({"pi_R", false, true});
  }
  ShuffleCounts counts;
  Json counts_json;
  auto csv = out.open("readout_shots.csv");
  csv << "I,Q,setting\n";
  for (const Setting& s : settings) {
    const auto shot = simulate_shots(shuffle(actual, s.pi_L, s.pi_R), model, shots, rng);
    for (const auto& p : shot) csv << num(p.i) << ',' << num(p.q) << ',' << s.name << '\n';
    const auto c = count_outcomes(shot, model);
    counts_json[s.name] = c;
    if (!s.pi_L && !s.pi_R) counts.bare = c;
    if (s.pi_L) counts.pi_L = c;
    if (s.pi_R) counts.pi_R = c;
  }
  csv.close();
  Json results = {{"separation_fidelity", sep.fidelity},
                  {"pair_errors", sep.pair_errors},
                  {"ball_fidelity", sep.ball_fidelity},
                  {"triangle_angles", tri.angles},
                  {"triangle_lengths", tri.lengths},
                  {"confusion_matrix",
                   {{conf(0, 0), conf(0, 1), conf(0, 2)},
                    {conf(1, 0), conf(1, 1), conf(1, 2)},
                    {conf(2, 0), conf(2, 1), conf(2, 2)}}},
                  {"counts", counts_json},
                  {"populations_after_readout_decay", actual}};
  if (do_shuffle) {
    const ShuffleRecovery rec = shuffle_recover(counts, model);
    results["recovered_populations"] = rec.populations;
    results["condition_number"] = rec.condition_number;
  }
  Json summary = run.manifest();
  summary["results"] = results;
  summary["outputs"] = out.names();
  out.write_json("readout_summary.json", summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level simulation and calibration of a flux-pumped two-transmon cZ"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  using Handler = void (*)(Run&, Outputs&);
  struct Command {
    const char* name;
    const char* help;
    Handler handler;
  };
  const std::vector<Command> commands{
      {"spectrum", "Qubit frequencies, anharmonicities, coupling and ZZ versus flux", cmd_spectrum},
      {"chevron", "Population transfer versus pump detuning and duration", cmd_chevron},
      {"cancelzz", "Search for the pump amplitude that cancels ZZ", cmd_cancelzz},
      {"crossramsey", "Cross-Ramsey measurement of ZZ", cmd_crossramsey},
      {"gate", "Compile and characterize a two-qubit gate", cmd_gate},
      {"rb", "Reference and interleaved randomized benchmarking", cmd_rb},
      {"optimize", "Closed-loop gate tuning with an evolution strategy", cmd_optimize},
      {"readout", "Simulated three-ball single-shot readout", cmd_readout},
  };
  Flags flags;
  std::uint64_t seed = 0;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("-c,--config", flags.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("-d,--device", flags.device, "Device file, overrides the run configuration");
    sub->add_option("-o,--output-dir", flags.output_dir,
                    std::string("Output directory (default: $") + kOutputEnv + " or .)");
    sub->add_option("-s,--seed", seed, "Seed for stochastic commands")
        ->each([&](const std::string&) { flags.seed = seed; });
    sub->add_option("--set", flags.set, "Override a parameter of the command block, key.sub=value");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    std::optional<Outputs> out;
    try {
      Run run = resolve(c.name, flags);
      out.emplace(run.output_dir);
      c.handler(run, *out);
      return 0;
    } catch (const ValidationError& e) {
      if (out) out->discard();
      std::cerr << "paracz " << c.name << ": invalid input: " << e.what() << '\n';
      return 2;
    } catch (const NumericalError& e) {
      if (out) out->discard();
      std::cerr << "paracz " << c.name << ": numerical failure: " << e.what() << '\n';
      return 3;
    } catch (const Json::exception& e) {
      if (out) out->discard();
      std::cerr << "paracz " << c.name << ": invalid input: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      if (out) out->discard();
      std::cerr << "paracz " << c.name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
