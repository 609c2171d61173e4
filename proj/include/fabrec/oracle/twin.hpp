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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <fabrec/chain/transaction.hpp>
#include <fabrec/contracts/state.hpp>

namespace fabrec::oracle {

struct MachineEvent {
    chain::Address machine;
    chain::MachineState state{chain::MachineState::OFF};
    std::int64_t at{0};
    std::uint64_t duration_minutes{0};

    bool operator==(const MachineEvent&) const = default;
};

// Groups `events` into batches of at most batch_size and signs one
// MachineUtilization transaction per batch, in event order. The machine key
// signs as its own service provider.
// Throws AuthorizationError when the machine is not a registered
// participant in `state`, PayloadError when events belong to another
// machine or are out of order, ConfigError when batch_size is 0.
std::vector<chain::Transaction> twin_emit(const chain::KeyPair& machine_key, std::span<const MachineEvent> events,
                                          std::size_t batch_size, const contracts::ContractState& state);

// Machine events recorded on-chain in the machine's PHEC stream, in order.
std::vector<MachineEvent> reconstruct_events(const contracts::ContractState& state, const chain::Address& machine);

}  // namespace fabrec::oracle
