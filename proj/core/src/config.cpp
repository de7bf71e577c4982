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
#include "paracz/config.hpp"

#include <cmath>
#include <fstream>

#include "paracz/error.hpp"

namespace paracz {
namespace {

template <typename T>
T get(const Json& j, const char* key, const std::string& context) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(context + "." + key + ": " + e.what());
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out, const std::string& context) {
  if (j.contains(key)) out = get<T>(j, key, context);
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void require_object(const Json& j, const std::string& context) {
  if (!j.is_object()) throw ValidationError(context + " must be an object");
}

}  // namespace

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  require_object(j, context);
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ValidationError("unknown key '" + item.key() + "' in " + context);
  }
}

DeviceConfig default_device_config() {
  DeviceConfig c;
  c.device.circuit = CircuitParams::fitted_device();
  c.device.bias = cancellation_flux(c.device.circuit);
  return c;
}

Json to_json(const DecoherenceParams& dec) {
  return Json{{"t1_s", dec.t1}, {"t2_s", dec.t2}};
}

DecoherenceParams decoherence_from_json(const Json& j) {
  check_keys(j, {"t1_s", "t2_s"}, "decoherence");
  DecoherenceParams d;
  d.t1 = get<std::array<double, 2>>(j, "t1_s", "decoherence");
  d.t2 = get<std::array<double, 2>>(j, "t2_s", "decoherence");
  d.validate();
  return d;
}

DeviceConfig device_config_from_json(const Json& j) {
  check_keys(j, {"circuit", "bias", "hilbert", "simulation", "decoherence"}, "device");
  DeviceConfig c;
  CircuitParams& p = c.device.circuit;
  p = CircuitParams::fitted_device();
  if (j.contains("circuit")) {
    const Json& cj = j["circuit"];
    const std::string ctx = "circuit";
    check_keys(cj,
               {"junction_inductance_h", "geometric_inductance_h", "shunt_capacitance_f",
                "mutual_capacitance_f", "squid_inductance_zero_flux_h", "squid_junction_ratio",
                "anharmonicity_exponent"},
               ctx);
    read(cj, "junction_inductance_h", p.junction_inductance, ctx);
    read(cj, "geometric_inductance_h", p.geometric_inductance, ctx);
    read(cj, "shunt_capacitance_f", p.shunt_capacitance, ctx);
    read(cj, "mutual_capacitance_f", p.mutual_capacitance, ctx);
    read(cj, "squid_inductance_zero_flux_h", p.squid_inductance_zero_flux, ctx);
    read(cj, "squid_junction_ratio", p.squid_junction_ratio, ctx);
    read(cj, "anharmonicity_exponent", p.anharmonicity_exponent, ctx);
  }
  p.validate();

  c.device.bias = FluxBias{0.0};
  bool cancel = true;
  if (j.contains("bias")) {
    const Json& bj = j["bias"];
    check_keys(bj, {"phi"}, "bias");
    if (bj.contains("phi") && bj["phi"].is_string()) {
      if (bj["phi"] != "cancellation")
        throw ValidationError("bias.phi must be a number or \"cancellation\"");
    } else if (bj.contains("phi")) {
      c.device.bias.phi = get<double>(bj, "phi", "bias");
      cancel = false;
    }
  }
  if (cancel) c.device.bias = cancellation_flux(p);

  if (j.contains("hilbert")) {
    const Json& hj = j["hilbert"];
    check_keys(hj, {"levels", "frame"}, "hilbert");
    read(hj, "levels", c.device.hilbert.levels, "hilbert");
    if (hj.contains("frame")) c.device.hilbert.frame = frame_from_string(get<std::string>(hj, "frame", "hilbert"));
  }
  if (j.contains("simulation")) {
    const Json& sj = j["simulation"];
    const std::string ctx = "simulation";
    check_keys(sj, {"step_s", "direct_drive_coupling_hz", "residual_nonlinear_zz_hz", "counter_rotating"},
               ctx);
    SimOptions& o = c.device.sim;
    read(sj, "step_s", o.step, ctx);
    if (sj.contains("direct_drive_coupling_hz")) {
      const auto hz = get<std::array<double, 2>>(sj, "direct_drive_coupling_hz", ctx);
      o.direct_drive_coupling = {angular(hz[0]), angular(hz[1])};
    }
    if (sj.contains("residual_nonlinear_zz_hz"))
      o.residual_nonlinear_zz = angular(get<double>(sj, "residual_nonlinear_zz_hz", ctx));
    read(sj, "counter_rotating", o.counter_rotating, ctx);
  }
  if (j.contains("decoherence") && !j["decoherence"].is_null())
    c.decoherence = decoherence_from_json(j["decoherence"]);
  c.device.validate();
  return c;
}

Json to_json(const DeviceConfig& config) {
  const Device& d = config.device;
  const CircuitParams& p = d.circuit;
  Json j;
  j["circuit"] = {{"junction_inductance_h", p.junction_inductance},
                  {"geometric_inductance_h", p.geometric_inductance},
                  {"shunt_capacitance_f", p.shunt_capacitance},
                  {"mutual_capacitance_f", p.mutual_capacitance},
                  {"squid_inductance_zero_flux_h", p.squid_inductance_zero_flux},
                  {"squid_junction_ratio", p.squid_junction_ratio},
                  {"anharmonicity_exponent", p.anharmonicity_exponent}};
  j["bias"] = {{"phi", d.bias.phi}};
  j["hilbert"] = {{"levels", d.hilbert.levels}, {"frame", to_string(d.hilbert.frame)}};
  j["simulation"] = {
      {"step_s", d.sim.step},
      {"direct_drive_coupling_hz",
       {hertz(d.sim.direct_drive_coupling[0]), hertz(d.sim.direct_drive_coupling[1])}},
      {"residual_nonlinear_zz_hz", hertz(d.sim.residual_nonlinear_zz)},
      {"counter_rotating", d.sim.counter_rotating}};
  j["decoherence"] = config.decoherence ? to_json(*config.decoherence) : Json(nullptr);
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

DeviceConfig load_device_config(const std::filesystem::path& path) {
  return device_config_from_json(read_json_file(path));
}

Json to_json(const Envelope& env) {
  return Json{{"kind", to_string(env.kind)},
              {"rise_s", env.rise},
              {"plateau_s", env.plateau},
              {"fall_s", env.fall}};
}

Envelope envelope_from_json(const Json& j) {
  check_keys(j, {"kind", "rise_s", "plateau_s", "fall_s", "duration_s"}, "envelope");
  const EnvelopeKind kind = envelope_kind_from_string(get<std::string>(j, "kind", "envelope"));
  Envelope e;
  if (j.contains("duration_s")) {
    const double t = get<double>(j, "duration_s", "envelope");
    e = kind == EnvelopeKind::kPureHann ? Envelope::pure_hann(t) : Envelope::rectangular(t);
    if (kind == EnvelopeKind::kHannEdges)
      throw ValidationError("hann_edges envelopes take rise_s, plateau_s and fall_s");
  } else {
    e.kind = kind;
    read(j, "rise_s", e.rise, "envelope");
    read(j, "plateau_s", e.plateau, "envelope");
    read(j, "fall_s", e.fall, "envelope");
  }
  e.validate();
  return e;
}

Json to_json(const PumpTone& tone) {
  return Json{{"pump_frequency_hz", hertz(tone.omega_p)},
              {"amplitude", tone.amplitude},
              {"phase", tone.phase},
              {"start_s", tone.start},
              {"drag", tone.drag},
              {"envelope", to_json(tone.envelope)}};
}

PumpTone pump_tone_from_json(const Json& j) {
  check_keys(j, {"pump_frequency_hz", "amplitude", "phase", "start_s", "drag", "envelope"}, "tone");
  PumpTone t;
  t.omega_p = angular(get<double>(j, "pump_frequency_hz", "tone"));
  t.amplitude = get<double>(j, "amplitude", "tone");
  read(j, "phase", t.phase, "tone");
  read(j, "start_s", t.start, "tone");
  read(j, "drag", t.drag, "tone");
  t.envelope = envelope_from_json(get<Json>(j, "envelope", "tone"));
  t.validate();
  return t;
}

Json to_json(const GateSpec& gate) {
  Json j{{"kind", to_string(gate.kind)},
         {"duration_s", gate.duration},
         {"virtual_z", gate.virtual_z}};
  j["gate_tone"] = gate.gate_tone ? to_json(*gate.gate_tone) : Json(nullptr);
  j["cancellation_tone"] = gate.cancellation_tone ? to_json(*gate.cancellation_tone) : Json(nullptr);
  return j;
}

GateSpec gate_spec_from_json(const Json& j) {
  check_keys(j, {"kind", "duration_s", "virtual_z", "gate_tone", "cancellation_tone"}, "gate");
  GateSpec g;
  g.kind = gate_kind_from_string(get<std::string>(j, "kind", "gate"));
  g.duration = get<double>(j, "duration_s", "gate");
  read(j, "virtual_z", g.virtual_z, "gate");
  if (j.contains("gate_tone") && !j["gate_tone"].is_null())
    g.gate_tone = pump_tone_from_json(j["gate_tone"]);
  if (j.contains("cancellation_tone") && !j["cancellation_tone"].is_null())
    g.cancellation_tone = pump_tone_from_json(j["cancellation_tone"]);
  g.validate();
  return g;
}

Json to_json(const GateReport& report) {
  Json u = Json::array();
  for (int r = 0; r < 4; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 4; ++c)
      row.push_back({report.computational_unitary(r, c).real(),
                     report.computational_unitary(r, c).imag()});
    u.push_back(row);
  }
  return Json{{"computational_unitary", u},
              {"basis_order", {"gg", "ge", "eg", "ee"}},
              {"conditional_phase", number_or_null(report.conditional_phase)},
              {"leakage", report.leakage},
              {"single_qubit_phases",
               {number_or_null(report.single_qubit_phases[0]),
                number_or_null(report.single_qubit_phases[1])}}};
}

Json to_json(const DecayFit& fit) {
  Json cov = Json::array();
  for (int r = 0; r < 3; ++r) cov.push_back({fit.covariance(r, 0), fit.covariance(r, 1), fit.covariance(r, 2)});
  return Json{{"A", fit.A}, {"P", fit.P}, {"C", fit.C}, {"covariance", cov},
              {"residual_rms", fit.residual_rms}};
}

Json to_json(const RBConfig& c) {
  return Json{{"lengths", c.lengths},
              {"sequences_per_length", c.sequences_per_length},
              {"single_qubit_duration_s", c.single_qubit_duration},
              {"cz_duration_s", c.cz_duration},
              {"depolarizing_per_clifford", c.depolarizing_per_clifford},
              {"seed", c.seed}};
}

RBConfig rb_config_from_json(const Json& j, RBConfig c) {
  const std::string ctx = "rb";
  check_keys(j, {"lengths", "sequences_per_length", "single_qubit_duration_s", "cz_duration_s",
                 "depolarizing_per_clifford", "seed"},
             ctx);
  read(j, "lengths", c.lengths, ctx);
  read(j, "sequences_per_length", c.sequences_per_length, ctx);
  read(j, "single_qubit_duration_s", c.single_qubit_duration, ctx);
  read(j, "cz_duration_s", c.cz_duration, ctx);
  read(j, "depolarizing_per_clifford", c.depolarizing_per_clifford, ctx);
  read(j, "seed", c.seed, ctx);
  return c;
}

Json to_json(const EsConfig& c) {
  return Json{{"population_m", c.population_m},
              {"survival_rate_s", c.survival_rate_s},
              {"scattering_p", c.scattering_p},
              {"initial_steps", c.initial_steps},
              {"max_iterations", c.max_iterations},
              {"seed", c.seed}};
}

EsConfig es_config_from_json(const Json& j, EsConfig c) {
  const std::string ctx = "es";
  check_keys(j, {"population_m", "survival_rate_s", "scattering_p", "initial_steps",
                 "max_iterations", "seed"},
             ctx);
  read(j, "population_m", c.population_m, ctx);
  read(j, "survival_rate_s", c.survival_rate_s, ctx);
  read(j, "scattering_p", c.scattering_p, ctx);
  read(j, "initial_steps", c.initial_steps, ctx);
  read(j, "max_iterations", c.max_iterations, ctx);
  read(j, "seed", c.seed, ctx);
  return c;
}

Json to_json(const ObjectiveSpec& s) {
  return Json{{"interleaved_count_M", s.interleaved_count_M},
              {"repeats", s.repeats},
              {"direction", to_string(s.direction)},
              {"parameter_names", s.parameter_names}};
}

ObjectiveSpec objective_from_json(const Json& j, ObjectiveSpec s) {
  const std::string ctx = "objective";
  check_keys(j, {"interleaved_count_M", "repeats", "direction", "parameter_names"}, ctx);
  read(j, "interleaved_count_M", s.interleaved_count_M, ctx);
  read(j, "repeats", s.repeats, ctx);
  if (j.contains("direction")) s.direction = direction_from_string(get<std::string>(j, "direction", ctx));
  read(j, "parameter_names", s.parameter_names, ctx);
  s.validate();
  return s;
}

Json to_json(const BallModel& m) {
  Json c = Json::array();
  for (const auto& p : m.centroids) c.push_back({p.i, p.q});
  return Json{{"centroids_v", c}, {"sigma_v", m.sigma}};
}

BallModel ball_model_from_json(const Json& j) {
  check_keys(j, {"centroids_v", "sigma_v"}, "readout_model");
  BallModel m;
  const auto c = get<std::array<std::array<double, 2>, 3>>(j, "centroids_v", "readout_model");
  for (int b = 0; b < 3; ++b) m.centroids[b] = {c[b][0], c[b][1]};
  m.sigma = get<std::array<double, 3>>(j, "sigma_v", "readout_model");
  m.validate();
  return m;
}

}  // namespace paracz
