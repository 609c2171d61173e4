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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fabrec/net/chain_view.hpp>
#include <fabrec/oracle/actuator.hpp>
#include <fabrec/oracle/twin.hpp>

namespace fabrec::net {
class Node;
}

namespace fabrec::oracle {

enum class TriggerKind { hex_string_match, continuous_operation };

std::string_view to_string(TriggerKind k) noexcept;
TriggerKind trigger_kind_from_string(std::string_view s);

struct Action {
    std::string target;
    Command command{Command::ON};

    bool operator==(const Action&) const = default;
};

struct TriggerRule {
    std::string rule_id;
    TriggerKind kind{TriggerKind::hex_string_match};
    // hex_string_match: lowercase hex, even length, matched on byte
    // boundaries of the hex-encoded canonical payload.
    std::optional<std::string> hex_pattern;
    // continuous_operation: the machine whose PHEC stream is watched.
    std::optional<chain::Address> machine;
    std::optional<std::uint64_t> min_continuous_minutes;
    std::uint64_t min_confirmations{12};
    Action action;

    // Throws ConfigError.
    void validate() const;
    chain::Value to_value() const;
    // Throws ConfigError.
    static TriggerRule from_value(const chain::Value& v);
    bool operator==(const TriggerRule&) const = default;
};

// True when `pattern` occurs at an even offset of hex(canonical(payload)).
bool payload_matches(const chain::Transaction& tx, std::string_view pattern);

// Transactions whose WORKING events form the shortest prefix of an unbroken
// run (no OFF in between) reaching `min_minutes`, one entry per run.
std::vector<std::vector<chain::Hash256>> continuous_evidence(const contracts::ContractState& state,
                                                             const chain::Address& machine, std::uint64_t min_minutes);

chain::Hash256 evidence_hash(const std::vector<chain::Hash256>& tx_ids);

struct RuleCursor {
    std::uint64_t height{0};
    chain::Hash256 block;

    bool operator==(const RuleCursor&) const = default;
};

struct FiredRecord {
    std::string rule_id;
    chain::Hash256 evidence_hash;
    std::vector<chain::Hash256> evidence;
    std::int64_t at{0};
    bool compensated{false};

    bool operator==(const FiredRecord&) const = default;
};

struct Compensation {
    std::string rule_id;
    chain::Hash256 evidence_hash;
    std::int64_t at{0};
};

struct PollResult {
    std::vector<DeviceCommand> commands;
    std::vector<Compensation> compensations;
    // Rules whose cursor moved back to a fork point.
    std::vector<std::string> rolled_back;
};

// Read-only poller over a node's chain view. Each rule keeps its own cursor
// at its confirmed frontier; fired evidence sets are remembered so a trigger
// never repeats, including across restarts when the state is persisted.
class Oracle {
  public:
    explicit Oracle(std::vector<TriggerRule> rules);

    const std::vector<TriggerRule>& rules() const noexcept { return rules_; }
    const std::map<std::string, RuleCursor>& cursors() const noexcept { return cursors_; }
    const std::vector<FiredRecord>& fired() const noexcept { return fired_; }

    PollResult poll(const net::ChainView& view, std::int64_t now);

    chain::Value state_value() const;
    void restore(const chain::Value& v);
    void save(const std::filesystem::path& path) const;
    // Missing file leaves the oracle fresh.
    void load(const std::filesystem::path& path);

  private:
    void roll_back(const net::ChainView& view, const TriggerRule& rule, PollResult& out);
    void fire(const TriggerRule& rule, std::vector<chain::Hash256> evidence, std::int64_t now, PollResult& out);

    std::vector<TriggerRule> rules_;
    std::map<std::string, RuleCursor> cursors_;
    std::vector<FiredRecord> fired_;
    std::set<std::pair<std::string, chain::Hash256>> fired_keys_;
};

// Hooks an oracle to an observer node: polls on every tip change, drives
// the devices, and writes oracle records to the node trace.
class OracleService {
  public:
    OracleService(net::Node& node, Oracle oracle, DeviceBank& devices,
                  std::optional<std::filesystem::path> state_file = std::nullopt);

    OracleService(const OracleService&) = delete;
    OracleService& operator=(const OracleService&) = delete;

    const Oracle& oracle() const noexcept { return oracle_; }
    void poll_now();

  private:
    net::Node& node_;
    Oracle oracle_;
    DeviceBank& devices_;
    std::optional<std::filesystem::path> state_file_;
};

}  // namespace fabrec::oracle
