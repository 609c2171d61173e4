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

#include <fabrec/chain/payload.hpp>

#include <cmath>
#include <initializer_list>
#include <set>

#include <fabrec/common/error.hpp>

namespace fabrec::chain {

namespace {

    constexpr std::string_view kOperations[] = {"Create", "Utilization", "Capability", "ContractCall"};
    constexpr std::string_view kActions[] = {"create", "upgrade", "service", "discontinue"};
    constexpr std::string_view kStates[] = {"ON", "OFF", "WORKING"};

    template <typename E, std::size_t N>
    E enum_from(std::string_view s, const std::string_view (&names)[N], const char* what) {
        for (std::size_t i = 0; i < N; ++i) {
            if (names[i] == s) return static_cast<E>(i);
        }
        throw PayloadError(std::string("unknown ") + what + " '" + std::string(s) + "'");
    }

    // Requires `v` to be an object whose keys are exactly `fields`.
    void expect_fields(const Value& v, std::initializer_list<std::string_view> fields) {
        if (!v.is_object()) {
            throw PayloadError("payload body must be an object");
        }
        std::set<std::string_view> wanted(fields);
        for (const auto& [key, _] : v.items()) {
            if (!wanted.contains(key)) {
                throw PayloadError("unknown field '" + key + "'");
            }
        }
        for (auto f : fields) {
            if (!v.contains(f)) {
                throw PayloadError("missing field '" + std::string(f) + "'");
            }
        }
    }

    std::string text_field(const Value& v, const char* key) {
        const auto& f = v.at(key);
        if (!f.is_string()) throw PayloadError(std::string(key) + " must be text");
        return f.get<std::string>();
    }

    std::uint64_t count_field(const Value& v, const char* key) {
        const auto& f = v.at(key);
        if (!f.is_number_integer() || (!f.is_number_unsigned() && f.get<std::int64_t>() < 0)) {
            throw PayloadError(std::string(key) + " must be a non-negative integer");
        }
        return f.get<std::uint64_t>();
    }

    double decimal_field(const Value& v, const char* key) {
        const auto& f = v.at(key);
        if (!f.is_number()) throw PayloadError(std::string(key) + " must be a number");
        return f.get<double>();
    }

    std::vector<std::string> text_list(const Value& v, const char* key) {
        const auto& f = v.at(key);
        if (!f.is_array()) throw PayloadError(std::string(key) + " must be a list");
        std::vector<std::string> out;
        for (const auto& item : f) {
            if (!item.is_string()) throw PayloadError(std::string(key) + " entries must be text");
            out.push_back(item.get<std::string>());
        }
        return out;
    }

    struct Encoder {
        Value operator()(const MachineAsset& p) const {
            return {{"action", to_string(p.action)}, {"machine_name", p.machine_name}, {"description", p.description}};
        }
        Value operator()(const MachineUtilization& p) const {
            Value events = Value::array();
            for (const auto& e : p.events) {
                events.push_back({{"at", e.at}, {"state", to_string(e.state)}, {"duration_minutes", e.duration_minutes}});
            }
            return {{"oee", p.oee},
                    {"uptime_minutes", p.uptime_minutes},
                    {"power_kwh", p.power_kwh},
                    {"state", to_string(p.state)},
                    {"duration_minutes", p.duration_minutes},
                    {"events", std::move(events)}};
        }
        Value operator()(const MachineCapability& p) const {
            return {{"materials", p.materials}, {"feature_classes", p.feature_classes}, {"tolerance_um", p.tolerance_um}};
        }
        Value operator()(const ContractCall& p) const { return {{"method", p.method}, {"args", p.args}}; }
    };

}  // namespace

std::string_view to_string(Operation op) noexcept { return kOperations[static_cast<int>(op)]; }
std::string_view to_string(AssetAction a) noexcept { return kActions[static_cast<int>(a)]; }
std::string_view to_string(MachineState s) noexcept { return kStates[static_cast<int>(s)]; }

Operation operation_from_string(std::string_view s) { return enum_from<Operation>(s, kOperations, "operation"); }
AssetAction asset_action_from_string(std::string_view s) { return enum_from<AssetAction>(s, kActions, "action"); }
MachineState machine_state_from_string(std::string_view s) { return enum_from<MachineState>(s, kStates, "state"); }

Operation operation_of(const Payload& payload) noexcept {
    switch (payload.index()) {
        case 0: return Operation::Create;
        case 1: return Operation::Utilization;
        case 2: return Operation::Capability;
        default: return Operation::ContractCall;
    }
}

void validate_payload(const Payload& payload) {
    if (const auto* u = std::get_if<MachineUtilization>(&payload)) {
        if (!std::isfinite(u->oee) || u->oee < 0.0 || u->oee > 1.0) {
            throw PayloadError("oee must lie in [0, 1]");
        }
        if (!std::isfinite(u->power_kwh) || u->power_kwh < 0.0) {
            throw PayloadError("power_kwh must be non-negative");
        }
        for (std::size_t i = 1; i < u->events.size(); ++i) {
            if (u->events[i].at < u->events[i - 1].at) {
                throw PayloadError("utilization events must be timestamp-ordered");
            }
        }
    } else if (const auto* c = std::get_if<MachineCapability>(&payload)) {
        if (!std::isfinite(c->tolerance_um) || c->tolerance_um <= 0.0) {
            throw PayloadError("tolerance_um must be positive");
        }
    } else if (const auto* call = std::get_if<ContractCall>(&payload)) {
        if (call->method.empty()) throw PayloadError("contract call needs a method");
        if (!call->args.is_object()) throw PayloadError("contract call args must be an object");
    }
}

Value payload_to_value(const Payload& payload) { return std::visit(Encoder{}, payload); }

Payload payload_from_value(Operation op, const Value& v) {
    Payload out;
    try {
        switch (op) {
            case Operation::Create: {
                expect_fields(v, {"action", "machine_name", "description"});
                out = MachineAsset{asset_action_from_string(text_field(v, "action")), text_field(v, "machine_name"),
                                   text_field(v, "description")};
                break;
            }
            case Operation::Utilization: {
                expect_fields(v, {"oee", "uptime_minutes", "power_kwh", "state", "duration_minutes", "events"});
                MachineUtilization u;
                u.oee = decimal_field(v, "oee");
                u.uptime_minutes = count_field(v, "uptime_minutes");
                u.power_kwh = decimal_field(v, "power_kwh");
                u.state = machine_state_from_string(text_field(v, "state"));
                u.duration_minutes = count_field(v, "duration_minutes");
                if (!v.at("events").is_array()) throw PayloadError("events must be a list");
                for (const auto& e : v.at("events")) {
                    expect_fields(e, {"at", "state", "duration_minutes"});
                    if (!e.at("at").is_number_integer()) throw PayloadError("event at must be an integer");
                    u.events.push_back({e.at("at").get<std::int64_t>(), machine_state_from_string(text_field(e, "state")),
                                        count_field(e, "duration_minutes")});
                }
                out = std::move(u);
                break;
            }
            case Operation::Capability: {
                expect_fields(v, {"materials", "feature_classes", "tolerance_um"});
                out = MachineCapability{text_list(v, "materials"), text_list(v, "feature_classes"),
                                        decimal_field(v, "tolerance_um")};
                break;
            }
            case Operation::ContractCall: {
                expect_fields(v, {"method", "args"});
                out = ContractCall{text_field(v, "method"), v.at("args")};
                break;
            }
        }
    } catch (const Value::exception& e) {
        throw PayloadError(e.what());
    }
    validate_payload(out);
    return out;
}

}  // namespace fabrec::chain
