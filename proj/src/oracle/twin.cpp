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

#include <fabrec/oracle/twin.hpp>

#include <algorithm>

#include <fabrec/common/error.hpp>

namespace fabrec::oracle {

std::vector<chain::Transaction> twin_emit(const chain::KeyPair& machine_key, std::span<const MachineEvent> events,
                                          std::size_t batch_size, const contracts::ContractState& state) {
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    const chain::Address machine = machine_key.address();
    if (!state.is_registered(machine)) {
        throw AuthorizationError("machine " + machine.hex() + " is not registered");
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].machine != machine) throw PayloadError("event for another machine");
        if (i > 0 && events[i].at < events[i - 1].at) throw PayloadError("events out of order");
    }

    std::vector<chain::Transaction> out;
    for (std::size_t begin = 0; begin < events.size(); begin += batch_size) {
        const std::size_t end = std::min(events.size(), begin + batch_size);
        chain::MachineUtilization u;
        std::uint64_t working = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& e = events[i];
            u.events.push_back({e.at, e.state, e.duration_minutes});
            u.duration_minutes += e.duration_minutes;
            if (e.state != chain::MachineState::OFF) u.uptime_minutes += e.duration_minutes;
            if (e.state == chain::MachineState::WORKING) working += e.duration_minutes;
        }
        u.state = events[end - 1].state;
        u.oee = u.duration_minutes == 0 ? 0.0
                                        : static_cast<double>(working) / static_cast<double>(u.duration_minutes);
        out.push_back(chain::make_transaction(machine_key, machine, machine, chain::Operation::Utilization,
                                              std::move(u), events[end - 1].at));
    }
    return out;
}

std::vector<MachineEvent> reconstruct_events(const contracts::ContractState& state, const chain::Address& machine) {
    std::vector<MachineEvent> out;
    if (!state.is_registered(machine)) return out;
    for (const auto& e : state.phec_get_history(machine, 1, 0)) {
        if (e.kind != contracts::EventKind::UtilizationReported) continue;
        const auto v = chain::parse_value(e.summary);
        out.push_back({machine, chain::machine_state_from_string(v.at("state").get<std::string>()),
                       v.at("at").get<std::int64_t>(), v.at("duration_minutes").get<std::uint64_t>()});
    }
    return out;
}

}  // namespace fabrec::oracle
