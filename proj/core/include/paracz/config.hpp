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
#ifndef PARACZ_CONFIG_HPP_
#define PARACZ_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "paracz/benchmarking.hpp"
#include "paracz/experiments.hpp"
#include "paracz/optimizer.hpp"
#include "paracz/readout.hpp"

namespace paracz {

using Json = nlohmann::json;

// A device file: circuit, bias, truncation, simulation options and optional
// coherence times. Frequencies are stored in Hz, times in seconds. Missing
// sections fall back to the fitted device; unknown keys are rejected.
struct DeviceConfig {
  Device device;
  std::optional<DecoherenceParams> decoherence;
};

DeviceConfig default_device_config();
DeviceConfig device_config_from_json(const Json& j);
Json to_json(const DeviceConfig& config);
// Throws ValidationError for unreadable or malformed files.
Json read_json_file(const std::filesystem::path& path);
DeviceConfig load_device_config(const std::filesystem::path& path);

Json to_json(const Envelope& env);
Envelope envelope_from_json(const Json& j);
Json to_json(const PumpTone& tone);
PumpTone pump_tone_from_json(const Json& j);
Json to_json(const GateSpec& gate);
GateSpec gate_spec_from_json(const Json& j);
Json to_json(const GateReport& report);
Json to_json(const DecayFit& fit);
Json to_json(const RBConfig& config);
// Gate and decoherence entries are not part of the RB block.
RBConfig rb_config_from_json(const Json& j, RBConfig base = {});
Json to_json(const EsConfig& config);
EsConfig es_config_from_json(const Json& j, EsConfig base = {});
Json to_json(const ObjectiveSpec& spec);
ObjectiveSpec objective_from_json(const Json& j, ObjectiveSpec base = {});
Json to_json(const BallModel& model);
BallModel ball_model_from_json(const Json& j);
Json to_json(const DecoherenceParams& dec);
DecoherenceParams decoherence_from_json(const Json& j);

// Rejects keys outside allowed; context names the section in the message.
void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& context);

}  // namespace paracz

#endif  // PARACZ_CONFIG_HPP_
