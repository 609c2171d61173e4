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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fabrec/chain/canonical.hpp>
#include <fabrec/chain/hash.hpp>

namespace fabrec::oracle {

enum class Command { ON, OFF };

std::string_view to_string(Command c) noexcept;
Command command_from_string(std::string_view s);

struct DeviceCommand {
    std::string device;
    Command command{Command::ON};
    std::int64_t at{0};
    std::string rule_id;
    chain::Hash256 evidence_hash;

    // Sink record {device, command, at, rule_id, evidence_hash}.
    chain::Value to_value() const;
    static DeviceCommand from_value(const chain::Value& v);
    bool operator==(const DeviceCommand&) const = default;
};

// Simulated actuator (the LED of the original testbed).
struct ActuatorState {
    std::string device;
    bool powered{false};
    std::optional<std::int64_t> last_command_at;
    std::vector<DeviceCommand> command_log;

    bool operator==(const ActuatorState&) const = default;
};

// Applies `command` to `state`. A command stamped at or before the previous
// one is logged one millisecond after it so the log stays strictly ordered.
ActuatorState actuator_apply(ActuatorState state, DeviceCommand command);

// Named actuators plus their external sinks. Each applied command is written
// to the device sink as one canonical JSON line.
class DeviceBank {
  public:
    using Sink = std::function<void(const std::string& line)>;
    using Warn = std::function<void(const std::string& message)>;

    void add_device(std::string device, Sink sink = {});
    void on_warning(Warn warn) { warn_ = std::move(warn); }

    // False, with a warning, when the device is unknown.
    bool dispatch(const DeviceCommand& command);

    const ActuatorState* find(std::string_view device) const;
    const std::map<std::string, ActuatorState, std::less<>>& devices() const noexcept { return devices_; }

  private:
    std::map<std::string, ActuatorState, std::less<>> devices_;
    std::map<std::string, Sink, std::less<>> sinks_;
    Warn warn_;
};

}  // namespace fabrec::oracle
