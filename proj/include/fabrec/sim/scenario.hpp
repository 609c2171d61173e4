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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fabrec/net/genesis.hpp>
#include <fabrec/net/node.hpp>
#include <fabrec/net/simulator.hpp>
#include <fabrec/oracle/oracle.hpp>

namespace fabrec::sim {

struct KeySpec {
    // Exactly one is set: a passphrase or a 32-byte hex seed.
    std::optional<std::string> passphrase;
    std::optional<std::string> seed_hex;

    chain::KeyPair key_pair() const;
};

struct NodeSpec {
    std::string name;
    net::NodeRole role{net::NodeRole::observer};
    KeySpec key;
};

struct ParticipantSpec {
    std::string name;
    KeySpec key;
    bool registered{true};
};

// One scripted transaction. Either at_ms (absolute) or after_previous (a
// random gap in [lo, hi] after the previous item was included at its node).
struct WorkloadItem {
    std::optional<std::int64_t> at_ms;
    std::optional<std::pair<std::int64_t, std::int64_t>> after_previous;
    std::string node;
    std::string signer;
    // Participant name, "@name" or address; defaults to the signer.
    std::optional<std::string> machine;
    chain::Operation operation{chain::Operation::ContractCall};
    // Payload JSON. Strings "@name" become the participant address and
    // "@name.public_key" its public key.
    chain::Value payload;
};

struct TwinEventSpec {
    chain::MachineState state{chain::MachineState::OFF};
    std::uint64_t duration_minutes{0};
};

struct TwinSpec {
    std::string machine;
    std::string node;
    std::size_t batch_size{1};
    std::int64_t start_ms{0};
    std::int64_t interval_ms{1000};
    std::vector<TwinEventSpec> events;
};

struct OracleSpec {
    std::string node;
    std::vector<std::string> devices;
    std::vector<oracle::TriggerRule> rules;
};

struct FaultSpec {
    std::string node;
    std::int64_t crash_at_ms{0};
};

struct RunSpec {
    std::uint64_t confirm_depth{12};
    std::int64_t max_virtual_ms{600'000};
    std::int64_t settle_ms{10'000};
    std::size_t max_block_txs{100};
    std::int64_t sync_interval_ms{1000};
};

struct Scenario {
    std::string name;
    std::uint64_t seed{0};
    consensus::ConsensusMode mode{consensus::ConsensusMode::PoA};
    unsigned difficulty_bits{0};
    double ms_per_attempt{1.0};
    std::int64_t block_period_ms{1000};
    net::SimNetConfig network;
    std::vector<NodeSpec> nodes;
    std::vector<ParticipantSpec> participants;
    std::vector<WorkloadItem> workload;
    std::vector<TwinSpec> twins;
    std::optional<OracleSpec> oracle;
    std::vector<FaultSpec> faults;
    RunSpec run;

    // Throws ConfigError naming the offending field.
    static Scenario from_value(const chain::Value& v);
    static Scenario load(const std::filesystem::path& path);
    chain::Value to_value() const;
    // Cross-field checks: unique names and addresses, known references,
    // role/consensus fit. Throws ConfigError.
    void validate() const;

    net::GenesisConfig genesis_config() const;
};

}  // namespace fabrec::sim
