/*
   Copyright 2026 The FabRec Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <fabrec/oracle/actuator.hpp>

#include <fabrec/common/error.hpp>

namespace fabrec::oracle {

std::string_view to_string(Command c) noexcept { return c == Command::ON ? "ON" : "OFF"; }

Command command_from_string(std::string_view s) {
    if (s == "ON") return Command::ON;
    if (s == "OFF") return Command::OFF;
    throw ConfigError("unknown actuator command: " + std::string(s));
}

chain::Value DeviceCommand::to_value() const {
    return {{"device", device},
            {"command", to_string(command)},
            {"at", at},
            {"rule_id", rule_id},
            {"evidence_hash", evidence_hash.hex()}};
}

DeviceCommand DeviceCommand::from_value(const chain::Value& v) {
    DeviceCommand c;
    c.device = v.at("device").get<std::string>();
    c.command = command_from_string(v.at("command").get<std::string>());
    c.at = v.at("at").get<std::int64_t>();
    c.rule_id = v.at("rule_id").get<std::string>();
    c.evidence_hash = chain::Hash256::from_hex(v.at("evidence_hash").get<std::string>());
    return c;
}

ActuatorState actuator_apply(ActuatorState state, DeviceCommand command) {
    if (state.last_command_at && command.at <= *state.last_command_at) {
        command.at = *state.last_command_at + 1;
    }
    state.powered = command.command == Command::ON;
    state.last_command_at = command.at;
    state.command_log.push_back(std::move(command));
    return state;
}

void DeviceBank::add_device(std::string device, Sink sink) {
    ActuatorState s;
    s.device = device;
    if (sink) sinks_[device] = std::move(sink);
    devices_.insert_or_assign(std::move(device), std::move(s));
}

bool DeviceBank::dispatch(const DeviceCommand& command) {
    auto it = devices_.find(command.device);
    if (it == devices_.end()) {
        if (warn_) warn_("unknown device " + command.device + ", command dropped");
        return false;
    }
    it->second = actuator_apply(std::move(it->second), command);
    if (auto sink = sinks_.find(command.device); sink != sinks_.end()) {
        sink->second(chain::canonical_serialize(it->second.command_log.back().to_value()));
    }
    return true;
}

const ActuatorState* DeviceBank::find(std::string_view device) const {
    auto it = devices_.find(device);
    return it == devices_.end() ? nullptr : &it->second;
}

}  // namespace fabrec::oracle
