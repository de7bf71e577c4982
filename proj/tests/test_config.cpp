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
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "paracz/config.hpp"
#include "paracz/error.hpp"

using namespace paracz;
using doctest::Approx;

namespace {

const std::filesystem::path kConfigs = PARACZ_CONFIG_DIR;

}  // namespace

TEST_CASE("default device file") {
  const DeviceConfig c = load_device_config(kConfigs / "device_default.json");
  const CircuitParams fitted = CircuitParams::fitted_device();
  CHECK(c.device.circuit.junction_inductance == fitted.junction_inductance);
  CHECK(c.device.circuit.squid_junction_ratio == 0.75);
  CHECK(c.device.bias.phi == Approx(cancellation_flux(fitted).phi).epsilon(1e-12));
  CHECK(c.device.hilbert.levels == 3);
  CHECK(c.device.sim.step == 2e-12);
  REQUIRE(c.decoherence);
  CHECK(c.decoherence->t1[0] == 16.3e-6);
  CHECK(c.decoherence->t2[1] == 22.7e-6);
}

TEST_CASE("device round trip") {
  DeviceConfig c = default_device_config();
  c.device.bias = FluxBias{0.123};
  c.device.hilbert = HilbertConfig{4, Frame::kLab};
  c.device.sim.direct_drive_coupling = {GHz(10.0), 0.0};
  c.decoherence = DecoherenceParams::uniform(20e-6, 30e-6);
  const DeviceConfig back = device_config_from_json(to_json(c));
  CHECK(back.device.bias.phi == 0.123);
  CHECK(back.device.hilbert.levels == 4);
  CHECK(back.device.sim.direct_drive_coupling[0] == Approx(GHz(10.0)).epsilon(1e-15));
  CHECK(back.decoherence->t2[0] == 30e-6);
  CHECK(to_json(back) == to_json(c));

  const DeviceConfig empty = device_config_from_json(Json::object());
  CHECK(empty.device.circuit.shunt_capacitance == CircuitParams::fitted_device().shunt_capacitance);
  CHECK_FALSE(empty.decoherence);
}

TEST_CASE("unknown or malformed entries are rejected") {
  CHECK_THROWS_AS(device_config_from_json(Json::parse(R"({"circuit": {"shunt_cap": 1}})")),
                  ValidationError);
  CHECK_THROWS_AS(device_config_from_json(Json::parse(R"({"extra": 1})")), ValidationError);
  CHECK_THROWS_AS(device_config_from_json(Json::parse(R"({"bias": {"phi": "half"}})")),
                  ValidationError);
  CHECK_THROWS_AS(device_config_from_json(Json::parse(R"({"hilbert": {"levels": 1}})")),
                  ValidationError);
  CHECK_THROWS_AS(load_device_config(kConfigs / "missing.json"), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "paracz_bad.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(read_json_file(path), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("gate and tone round trips") {
  GateSpec g;
  g.kind = GateKind::kPswapCz;
  g.duration = 50e-9;
  g.gate_tone = PumpTone{GHz(0.78), 0.012, 0.3, Envelope::hann_edges(10e-9, 30e-9, 10e-9), 0.0};
  g.cancellation_tone = PumpTone{MHz(702.1), 0.0188, 0.0, Envelope::rectangular(50e-9), 0.0};
  g.virtual_z = {0.25, -1.5};
  g.gate_tone->drag = {0.2, -0.05};
  const GateSpec back = gate_spec_from_json(to_json(g));
  CHECK(back.kind == g.kind);
  CHECK(back.gate_tone->omega_p == Approx(g.gate_tone->omega_p).epsilon(1e-15));
  CHECK(back.gate_tone->envelope.plateau == 30e-9);
  CHECK(back.cancellation_tone->amplitude == 0.0188);
  CHECK(back.virtual_z == g.virtual_z);
  CHECK(back.gate_tone->drag == g.gate_tone->drag);
  CHECK(to_json(back) == to_json(g));

  const Envelope h = envelope_from_json(Json::parse(R"({"kind": "pure_hann", "duration_s": 3e-8})"));
  CHECK(h.kind == EnvelopeKind::kPureHann);
  CHECK(h.duration() == Approx(30e-9));
  CHECK_THROWS_AS(envelope_from_json(Json::parse(R"({"kind": "gauss"})")), ValidationError);
  CHECK_THROWS_AS(pump_tone_from_json(Json::parse(R"({"frequency": 1})")), ValidationError);

  GateReport r;
  r.conditional_phase = std::nan("");
  const Json jr = to_json(r);
  CHECK(jr.at("conditional_phase").is_null());
  CHECK(jr.at("computational_unitary").size() == 4);
}

TEST_CASE("run blocks") {
  const Json rb = read_json_file(kConfigs / "run_rb.json");
  const RBConfig c = rb_config_from_json(Json::object({{"lengths", {1, 2, 4, 8}}, {"seed", 5}}));
  CHECK(c.lengths == std::vector<int>{1, 2, 4, 8});
  CHECK(c.seed == 5);
  CHECK(rb.contains("rb"));
  CHECK_THROWS_AS(rb_config_from_json(Json::object({{"length", {1}}})), ValidationError);

  const EsConfig e = es_config_from_json(Json::object({{"population_m", 20}, {"initial_steps", {1.0, 2.0}}}));
  CHECK(e.population_m == 20);
  CHECK(to_json(es_config_from_json(to_json(e))) == to_json(e));

  const ObjectiveSpec o = objective_from_json(Json::object({{"direction", "minimize"}}));
  CHECK(o.direction == Direction::kMinimize);

  BallModel m;
  m.centroids = {IQPoint{0.0, 0.0}, IQPoint{1.0, 0.0}, IQPoint{0.0, 1.0}};
  m.sigma = {0.1, 0.2, 0.3};
  const BallModel mb = ball_model_from_json(to_json(m));
  CHECK(mb.centroids[2].q == 1.0);
  CHECK(mb.sigma[1] == 0.2);

  CHECK_THROWS_AS(decoherence_from_json(Json::parse(R"({"t1_s": [1e-5, 1e-5], "t2_s": [3e-5, 1e-5]})")),
                  ValidationError);
}
