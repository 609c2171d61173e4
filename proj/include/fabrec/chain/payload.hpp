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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fabrec/chain/canonical.hpp>

namespace fabrec::chain {

enum class Operation { Create, Utilization, Capability, ContractCall };

enum class AssetAction { create, upgrade, service, discontinue };

enum class MachineState { ON, OFF, WORKING };

std::string_view to_string(Operation op) noexcept;
std::string_view to_string(AssetAction a) noexcept;
std::string_view to_string(MachineState s) noexcept;
Operation operation_from_string(std::string_view s);
AssetAction asset_action_from_string(std::string_view s);
MachineState machine_state_from_string(std::string_view s);

struct MachineAsset {
    AssetAction action{AssetAction::create};
    std::string machine_name;
    std::string description;

    bool operator==(const MachineAsset&) const = default;
};

// One machine status sample carried inside a utilization batch.
struct UtilizationSample {
    std::int64_t at{0};
    MachineState state{MachineState::OFF};
    std::uint64_t duration_minutes{0};

    bool operator==(const UtilizationSample&) const = default;
};

struct MachineUtilization {
    double oee{0.0};
    std::uint64_t uptime_minutes{0};
    double power_kwh{0.0};
    MachineState state{MachineState::OFF};
    std::uint64_t duration_minutes{0};
    std::vector<UtilizationSample> events;

    bool operator==(const MachineUtilization&) const = default;
};

struct MachineCapability {
    std::vector<std::string> materials;
    std::vector<std::string> feature_classes;
    double tolerance_um{1.0};

    bool operator==(const MachineCapability&) const = default;
};

// Invocation of one of the native contracts ("grc.add_machine", "prc.open", ...).
struct ContractCall {
    std::string method;
    Value args = Value::object();

    bool operator==(const ContractCall&) const = default;
};

using Payload = std::variant<MachineAsset, MachineUtilization, MachineCapability, ContractCall>;

Operation operation_of(const Payload& payload) noexcept;

// Throws PayloadError when a field is out of range.
void validate_payload(const Payload& payload);

Value payload_to_value(const Payload& payload);

// Strict decoding: the field set must match the operation exactly.
// Throws PayloadError.
Payload payload_from_value(Operation op, const Value& value);

}  // namespace fabrec::chain
