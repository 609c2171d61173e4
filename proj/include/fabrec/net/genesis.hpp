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

#include <string>
#include <vector>

#include <fabrec/chain/block.hpp>
#include <fabrec/consensus/poa.hpp>
#include <fabrec/consensus/pow.hpp>
#include <fabrec/consensus/score.hpp>
#include <fabrec/contracts/state.hpp>

namespace fabrec::net {

struct GenesisParticipant {
    std::string name;
    chain::PublicKey key{};
    // Also create the GRC vendor record and PHEC stream at genesis.
    bool registered{true};
};

// Everything a node needs to agree on before the first block.
struct GenesisConfig {
    consensus::ConsensusMode mode{consensus::ConsensusMode::PoA};
    consensus::PowConfig pow;
    consensus::PoaConfig poa;
    std::vector<GenesisParticipant> participants;
    std::vector<chain::Address> regulators;
    std::int64_t timestamp{0};

    chain::Value to_value() const;
    // Throws ConfigError.
    static GenesisConfig from_value(const chain::Value& v);
};

struct Genesis {
    GenesisConfig config;
    contracts::ContractState state;
    chain::Block block;
};

// Admits every participant key and registers the flagged ones.
// Throws ConfigError on duplicate participants.
Genesis build_genesis(GenesisConfig config);

}  // namespace fabrec::net
