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
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fabrec/common/rng.hpp>
#include <fabrec/net/chain_view.hpp>
#include <fabrec/net/genesis.hpp>
#include <fabrec/net/mempool.hpp>
#include <fabrec/net/message.hpp>

namespace fabrec::net {

enum class NodeRole { authority, miner, observer, machine_agent };

std::string_view to_string(NodeRole role) noexcept;
NodeRole node_role_from_string(std::string_view s);

enum class ClockKind { virtual_time, wall };

enum class TimerKind { produce, vote_retry, sync };

struct NodeConfig {
    NodeConfig(std::string node_name, chain::KeyPair key, NodeRole node_role)
        : name(std::move(node_name)), identity(std::move(key)), role(node_role) {}

    std::string name;
    chain::KeyPair identity;
    NodeRole role{NodeRole::observer};
    ClockKind clock{ClockKind::virtual_time};
    // host:port endpoints, live transport only.
    std::vector<std::string> peers;
    std::size_t max_block_txs{100};
    // Simulated hashing speed of a miner.
    double ms_per_attempt{1.0};
    std::int64_t sync_interval_ms{1000};
    std::int64_t vote_retry_ms{250};
    std::int64_t vote_timeout_ms{3000};
    std::size_t orphan_capacity{64};
    // Depth at which locally submitted transactions are reported confirmed.
    std::uint64_t confirm_depth{12};
    std::uint64_t seed{0};
};

// Everything a node needs from its host: clock, transport, timers, trace.
class NodeEnv {
  public:
    virtual ~NodeEnv() = default;

    virtual std::int64_t now() const = 0;
    virtual void send(const chain::Address& to, const Envelope& msg) = 0;
    virtual void broadcast(const Envelope& msg) = 0;
    virtual void set_timer(std::int64_t delay_ms, TimerKind kind, std::uint64_t token) = 0;
    virtual void trace(chain::Value record) = 0;
};

enum class BlockStatus { accepted, orphan, duplicate, rejected };

struct BlockOutcome {
    BlockStatus status{BlockStatus::rejected};
    std::string reason;
};

// Timing of a transaction submitted at this node.
struct TxTiming {
    std::int64_t submitted_at{0};
    std::optional<std::int64_t> included_at;
    std::optional<std::int64_t> confirmed_at;
    // Canonical block holding the transaction when included_at was taken.
    std::optional<chain::Hash256> block;
};

// A federation node. All entry points run on one logical event loop; the
// host serializes calls.
class Node {
  public:
    // Throws ConfigError when the role does not fit the consensus setup.
    Node(NodeConfig config, const Genesis& genesis, NodeEnv& env);

    const NodeConfig& config() const noexcept { return config_; }
    const std::string& name() const noexcept { return config_.name; }
    chain::Address address() const { return config_.identity.address(); }
    const ChainView& view() const noexcept { return view_; }
    const Mempool& mempool() const noexcept { return mempool_; }
    const GenesisConfig& genesis_config() const noexcept { return genesis_; }
    bool running() const noexcept { return running_; }
    bool producing() const noexcept { return producing_; }
    bool may_produce() const noexcept;
    std::int64_t now() const { return env_.now(); }
    // Appends a record to this node's trace.
    void trace(chain::Value record) { emit(std::move(record)); }

    void start();
    // Crash fault: the node stops reacting to messages and timers.
    void stop();
    void set_producing(bool on);

    // Reasons: "invalid", "duplicate", "unregistered signer", "stopped".
    Verdict submit_transaction(const chain::Transaction& tx);

    BlockOutcome receive_block(const chain::Block& block, const std::optional<chain::Address>& from = std::nullopt);

    void on_message(const Envelope& msg);
    void on_timer(TimerKind kind, std::uint64_t token);

    // 0 while pending, depth below the canonical tip once included.
    std::optional<std::uint64_t> confirmations(const chain::Hash256& tx_id) const;

    const std::map<chain::Hash256, TxTiming>& submissions() const noexcept { return submissions_; }

    using TipListener = std::function<void(const Node&, const TipChange&)>;
    void on_tip_change(TipListener listener) { listeners_.push_back(std::move(listener)); }

  private:
    struct PendingSeal {
        chain::Block block;
        std::vector<chain::Vote> votes;
        std::int64_t started_at{0};
        std::uint64_t token{0};
    };

    struct Orphan {
        chain::Block block;
        std::optional<chain::Address> from;
    };

    Verdict admit_transaction(const chain::Transaction& tx, bool local);
    BlockOutcome accept_block(const chain::Block& block, contracts::ApplyResult applied);
    void buffer_orphan(const chain::Block& block, const std::optional<chain::Address>& from);
    void drain_orphans(const chain::Hash256& parent);
    void handle_tip_change(const TipChange& change);
    void update_submissions();

    void schedule_production();
    void start_mining();
    void finish_mining();
    void schedule_poa();
    void seal_poa();
    void finalize_seal(chain::Block block);
    void abandon_seal(std::string_view why);
    void request_votes();

    void on_vote_request(const Envelope& msg);
    void on_vote(const Envelope& msg);
    void on_request_block(const Envelope& msg);
    void on_hello(const Envelope& msg);
    void sync_tick();

    chain::KeyLookup registry_of(const BlockEntry& entry) const;
    chain::Block build_template(std::uint32_t difficulty) const;
    void emit(chain::Value record);
    Envelope envelope(MessageType type, chain::Value body) const;

    NodeConfig config_;
    GenesisConfig genesis_;
    NodeEnv& env_;
    ChainView view_;
    Mempool mempool_;
    Rng rng_;

    bool running_{false};
    bool producing_{true};
    std::uint64_t arrival_seq_{0};
    std::map<chain::Hash256, std::uint64_t> first_seen_;
    std::map<chain::Hash256, std::int64_t> pending_since_;
    std::map<chain::Hash256, TxTiming> submissions_;
    std::deque<Orphan> orphans_;
    std::set<chain::Hash256> voted_;

    std::uint64_t produce_token_{0};
    std::optional<chain::Block> mined_;
    std::optional<PendingSeal> pending_;

    std::vector<TipListener> listeners_;
};

}  // namespace fabrec::net
