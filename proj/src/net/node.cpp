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

#include <fabrec/net/node.hpp>

#include <algorithm>
#include <cmath>

#include <fabrec/common/error.hpp>
#include <fabrec/consensus/poa.hpp>
#include <fabrec/consensus/pow.hpp>
#include <fabrec/net/validate.hpp>

namespace fabrec::net {

namespace {

    constexpr std::int64_t kWiggleMs = 500;

    bool is_pow(const GenesisConfig& g) { return g.mode == consensus::ConsensusMode::PoW; }

}  // namespace

std::string_view to_string(NodeRole role) noexcept {
    switch (role) {
        case NodeRole::authority:
            return "authority";
        case NodeRole::miner:
            return "miner";
        case NodeRole::observer:
            return "observer";
        case NodeRole::machine_agent:
            return "machine_agent";
    }
    return "observer";
}

NodeRole node_role_from_string(std::string_view s) {
    if (s == "authority") return NodeRole::authority;
    if (s == "miner") return NodeRole::miner;
    if (s == "observer") return NodeRole::observer;
    if (s == "machine_agent") return NodeRole::machine_agent;
    throw ConfigError("unknown node role: " + std::string(s));
}

Node::Node(NodeConfig config, const Genesis& genesis, NodeEnv& env)
    : config_(std::move(config)),
      genesis_(genesis.config),
      env_(env),
      view_(genesis.block, genesis.state, genesis.config.mode),
      rng_(mix_seed(config_.seed)) {
    const bool pow = is_pow(genesis_);
    if (config_.role == NodeRole::authority) {
        if (pow) throw ConfigError(config_.name + ": authority role requires PoA");
        if (!genesis_.poa.is_authority(address())) {
            throw ConfigError(config_.name + ": not in the authority set");
        }
    }
    if (config_.role == NodeRole::miner && !pow) {
        throw ConfigError(config_.name + ": miner role requires PoW");
    }
    if (config_.max_block_txs == 0) throw ConfigError(config_.name + ": max_block_txs must be positive");
    if (config_.sync_interval_ms <= 0 || config_.vote_retry_ms <= 0 || config_.vote_timeout_ms <= 0) {
        throw ConfigError(config_.name + ": timer intervals must be positive");
    }
    if (!(config_.ms_per_attempt > 0.0)) throw ConfigError(config_.name + ": ms_per_attempt must be positive");
}

bool Node::may_produce() const noexcept {
    if (!running_ || !producing_) return false;
    return is_pow(genesis_) ? config_.role == NodeRole::miner : config_.role == NodeRole::authority;
}

void Node::start() {
    if (running_) return;
    running_ = true;
    env_.broadcast(envelope(MessageType::hello, {{"tip", view_.canonical_tip().hex()}, {"height", view_.height()}}));
    env_.set_timer(config_.sync_interval_ms, TimerKind::sync, 0);
    schedule_production();
}

void Node::stop() {
    if (!running_) return;
    running_ = false;
    ++produce_token_;
    mined_.reset();
    pending_.reset();
    emit({{"type", "stopped"}});
}

void Node::set_producing(bool on) {
    if (producing_ == on) return;
    producing_ = on;
    if (on) {
        schedule_production();
        return;
    }
    ++produce_token_;
    mined_.reset();
    if (pending_) abandon_seal("quiesce");
}

Verdict Node::submit_transaction(const chain::Transaction& tx) {
    if (!running_) return Verdict::fail("stopped");
    Verdict v = admit_transaction(tx, true);
    chain::Value rec{{"type", "tx_submitted"}, {"tx", tx.id.hex()}, {"accepted", v.ok}};
    if (!v.ok) rec["reason"] = v.reason;
    emit(std::move(rec));
    if (v.ok) {
        submissions_[tx.id] = TxTiming{env_.now(), std::nullopt, std::nullopt, std::nullopt};
    }
    return v;
}

Verdict Node::admit_transaction(const chain::Transaction& tx, bool local) {
    if (mempool_.contains(tx.id) || view_.inclusion_height(tx.id)) {
        return Verdict::fail("duplicate");
    }
    Verdict v = chain::verify_transaction(tx, registry_of(view_.tip()));
    if (!v.ok) {
        return Verdict::fail(v.reason == "unregistered signer" ? v.reason : "invalid");
    }
    auto [it, fresh] = first_seen_.try_emplace(tx.id, arrival_seq_);
    if (fresh) ++arrival_seq_;
    mempool_.add(tx, it->second);
    pending_since_[tx.id] = env_.now();
    env_.broadcast(envelope(MessageType::tx, tx.to_value()));
    if (!local) emit({{"type", "tx_received"}, {"tx", tx.id.hex()}});
    if (is_pow(genesis_) && may_produce() && mempool_.size() <= config_.max_block_txs) {
        start_mining();
    }
    return Verdict::pass();
}

chain::KeyLookup Node::registry_of(const BlockEntry& entry) const {
    return [state = entry.state](const chain::Address& who) { return state->public_key_of(who); };
}

BlockOutcome Node::receive_block(const chain::Block& block, const std::optional<chain::Address>& from) {
    if (!running_) return {BlockStatus::rejected, "stopped"};
    if (view_.contains(block.id)) return {BlockStatus::duplicate, {}};
    const bool buffered = std::any_of(orphans_.begin(), orphans_.end(),
                                      [&](const Orphan& o) { return o.block.id == block.id; });
    if (buffered) return {BlockStatus::duplicate, {}};

    const BlockEntry* parent = view_.find(block.header.prev_block);
    if (parent == nullptr) {
        buffer_orphan(block, from);
        return {BlockStatus::orphan, {}};
    }
    contracts::ApplyResult applied;
    if (Verdict v = validate_block(view_, genesis_, block, false, &applied); !v.ok) {
        emit({{"type", "block_rejected"}, {"id", block.id.hex()}, {"reason", v.reason}});
        return {BlockStatus::rejected, v.reason};
    }
    return accept_block(block, std::move(applied));
}

BlockOutcome Node::accept_block(const chain::Block& block, contracts::ApplyResult applied) {
    auto change = view_.insert(block, std::move(applied));
    env_.broadcast(envelope(MessageType::block, block.to_value()));
    if (change) handle_tip_change(*change);
    drain_orphans(block.id);
    return {BlockStatus::accepted, {}};
}

void Node::buffer_orphan(const chain::Block& block, const std::optional<chain::Address>& from) {
    orphans_.push_back({block, from});
    while (orphans_.size() > config_.orphan_capacity) {
        emit({{"type", "orphan_evicted"}, {"id", orphans_.front().block.id.hex()}});
        orphans_.pop_front();
    }
    const auto request = envelope(MessageType::request_block, {{"id", block.header.prev_block.hex()}});
    if (from) {
        env_.send(*from, request);
    } else {
        env_.broadcast(request);
    }
}

void Node::drain_orphans(const chain::Hash256& parent) {
    std::vector<Orphan> ready;
    for (auto it = orphans_.begin(); it != orphans_.end();) {
        if (it->block.header.prev_block == parent) {
            ready.push_back(std::move(*it));
            it = orphans_.erase(it);
        } else {
            ++it;
        }
    }
    for (const auto& o : ready) receive_block(o.block, o.from);
}

void Node::handle_tip_change(const TipChange& change) {
    for (const auto& id : change.removed) {
        for (const auto& tx : view_.entry(id).block.transactions) {
            if (view_.inclusion_height(tx.id)) continue;
            auto [it, fresh] = first_seen_.try_emplace(tx.id, arrival_seq_);
            if (fresh) ++arrival_seq_;
            if (mempool_.add(tx, it->second)) pending_since_[tx.id] = env_.now();
        }
    }
    for (const auto& id : change.added) {
        for (const auto& tx : view_.entry(id).block.transactions) {
            mempool_.erase(tx.id);
            pending_since_.erase(tx.id);
        }
    }
    emit({{"type", "tip"}, {"id", change.new_tip.hex()}, {"height", view_.height()}});
    if (change.depth() > 0) {
        emit({{"type", "reorg"},
              {"depth", change.depth()},
              {"old_tip", change.old_tip.hex()},
              {"new_tip", change.new_tip.hex()},
              {"fork_point", change.fork_point.hex()}});
    }
    update_submissions();

    if (pending_ && pending_->block.header.prev_block != view_.canonical_tip()) {
        abandon_seal("tip-changed");
    }
    schedule_production();
    for (const auto& listener : listeners_) listener(*this, change);
}

void Node::update_submissions() {
    const std::uint64_t tip_height = view_.height();
    for (auto& [id, timing] : submissions_) {
        const auto h = view_.inclusion_height(id);
        if (!h) {
            if (timing.block) {
                emit({{"type", "tx_evicted"}, {"tx", id.hex()}, {"block", timing.block->hex()}});
                timing.block.reset();
                timing.included_at.reset();
                timing.confirmed_at.reset();
            }
            continue;
        }
        const chain::Hash256& holder = *view_.canonical_at(*h);
        if (timing.block != holder) {
            timing.block = holder;
            timing.included_at = env_.now();
            timing.confirmed_at.reset();
            emit({{"type", "tx_included"},
                  {"tx", id.hex()},
                  {"block", holder.hex()},
                  {"height", *h},
                  {"latency_ms", env_.now() - timing.submitted_at}});
        }
        const std::uint64_t depth = tip_height - *h + 1;
        if (!timing.confirmed_at && depth >= config_.confirm_depth) {
            timing.confirmed_at = env_.now();
            emit({{"type", "tx_confirmed"},
                  {"tx", id.hex()},
                  {"block", holder.hex()},
                  {"depth", depth},
                  {"latency_ms", env_.now() - timing.submitted_at}});
        }
    }
}

std::optional<std::uint64_t> Node::confirmations(const chain::Hash256& tx_id) const {
    if (mempool_.contains(tx_id)) return 0;
    if (const auto h = view_.inclusion_height(tx_id)) return view_.height() - *h + 1;
    return std::nullopt;
}

void Node::schedule_production() {
    if (!may_produce()) return;
    if (is_pow(genesis_)) {
        start_mining();
    } else {
        schedule_poa();
    }
}

chain::Block Node::build_template(std::uint32_t difficulty) const {
    const BlockEntry& parent = view_.tip();
    const std::int64_t ts = std::max(env_.now(), parent.block.header.timestamp + 1);
    chain::Block draft;
    draft.header.height = parent.block.header.height + 1;
    draft.transactions = mempool_.take(config_.max_block_txs);
    const auto applied = contracts::apply_block_to_state(*parent.state, draft);
    return chain::make_block(parent.block, std::move(draft.transactions), config_.identity, applied.state_root, ts, 0,
                             difficulty);
}

void Node::start_mining() {
    const std::uint64_t token = ++produce_token_;
    chain::Block block = build_template(genesis_.pow.difficulty_bits);
    const auto outcome = consensus::pow_mine(block.header, genesis_.pow, rng_.next());
    if (outcome.found) {
        block.header.nonce = outcome.nonce;
        chain::reseal(block, config_.identity);
        mined_ = std::move(block);
    } else {
        mined_.reset();
    }
    const double ms = std::ceil(static_cast<double>(outcome.attempts) * config_.ms_per_attempt);
    env_.set_timer(std::max<std::int64_t>(1, static_cast<std::int64_t>(ms)), TimerKind::produce, token);
}

void Node::finish_mining() {
    if (!mined_) {
        start_mining();
        return;
    }
    chain::Block block = std::move(*mined_);
    mined_.reset();
    finalize_seal(std::move(block));
}

void Node::schedule_poa() {
    if (pending_) return;
    const auto& cfg = genesis_.poa;
    const BlockEntry& tip = view_.tip();
    const std::uint64_t height = tip.block.header.height + 1;
    const auto recent = view_.recent_sealers(tip.block.id, cfg.exclusion_window());
    const auto right = consensus::poa_may_seal(address(), height, recent, cfg);
    if (right == consensus::SealRight::forbidden) return;

    const std::uint64_t token = ++produce_token_;
    std::int64_t delay = std::max<std::int64_t>(0, tip.block.header.timestamp + cfg.block_period_ms - env_.now());
    if (right == consensus::SealRight::out_of_turn) {
        delay += cfg.block_period_ms + rng_.uniform(0, kWiggleMs * static_cast<std::int64_t>(cfg.size()));
    }
    env_.set_timer(delay, TimerKind::produce, token);
}

void Node::seal_poa() {
    const auto& cfg = genesis_.poa;
    const BlockEntry& tip = view_.tip();
    const std::uint64_t height = tip.block.header.height + 1;
    const auto recent = view_.recent_sealers(tip.block.id, cfg.exclusion_window());
    const auto right = consensus::poa_may_seal(address(), height, recent, cfg);
    if (right == consensus::SealRight::forbidden) return;

    const std::uint32_t weight =
        right == consensus::SealRight::in_turn ? consensus::kInTurnWeight : consensus::kOutOfTurnWeight;
    chain::Block block = build_template(weight);
    if (cfg.vote_threshold <= 1) {
        finalize_seal(std::move(block));
        return;
    }
    pending_ = PendingSeal{std::move(block), {}, env_.now(), ++produce_token_};
    request_votes();
    env_.set_timer(config_.vote_retry_ms, TimerKind::vote_retry, pending_->token);
}

void Node::request_votes() {
    env_.broadcast(envelope(MessageType::vote_request, {{"block", pending_->block.to_value()}}));
}

void Node::finalize_seal(chain::Block block) {
    emit({{"type", "sealed"}, {"block", block.to_value()}});
    const auto outcome = receive_block(block, std::nullopt);
    if (outcome.status == BlockStatus::rejected) {
        emit({{"type", "seal_failed"}, {"id", block.id.hex()}, {"reason", outcome.reason}});
        schedule_production();
    }
}

void Node::abandon_seal(std::string_view why) {
    emit({{"type", "abandoned"},
          {"id", pending_->block.id.hex()},
          {"height", pending_->block.header.height},
          {"votes", pending_->votes.size()},
          {"reason", why}});
    pending_.reset();
}

void Node::on_message(const Envelope& msg) {
    if (!running_) return;
    try {
        switch (msg.type) {
            case MessageType::tx:
                admit_transaction(chain::Transaction::from_value(msg.body), false);
                break;
            case MessageType::block:
                receive_block(chain::Block::from_value(msg.body), msg.sender);
                break;
            case MessageType::request_block:
                on_request_block(msg);
                break;
            case MessageType::hello:
                on_hello(msg);
                break;
            case MessageType::vote_request:
                on_vote_request(msg);
                break;
            case MessageType::vote:
                on_vote(msg);
                break;
        }
    } catch (const Error& e) {
        emit({{"type", "malformed"}, {"message", to_string(msg.type)}, {"error", e.what()}});
    } catch (const chain::Value::exception& e) {
        emit({{"type", "malformed"}, {"message", to_string(msg.type)}, {"error", e.what()}});
    }
}

void Node::on_request_block(const Envelope& msg) {
    const auto id = chain::Hash256::from_hex(msg.body.at("id").get<std::string>());
    if (const BlockEntry* e = view_.find(id)) {
        env_.send(msg.sender, envelope(MessageType::block, e->block.to_value()));
    }
}

void Node::on_hello(const Envelope& msg) {
    const auto tip = chain::Hash256::from_hex(msg.body.at("tip").get<std::string>());
    if (view_.contains(tip)) return;
    const bool buffered =
        std::any_of(orphans_.begin(), orphans_.end(), [&](const Orphan& o) { return o.block.id == tip; });
    if (!buffered) env_.send(msg.sender, envelope(MessageType::request_block, {{"id", tip.hex()}}));
}

void Node::on_vote_request(const Envelope& msg) {
    if (config_.role != NodeRole::authority) return;
    const chain::Block block = chain::Block::from_value(msg.body.at("block"));
    if (block.sealer() != msg.sender || block.sealer() == address()) return;

    if (!voted_.contains(block.id)) {
        const BlockEntry* parent = view_.find(block.header.prev_block);
        if (parent == nullptr) {
            env_.send(msg.sender, envelope(MessageType::request_block, {{"id", block.header.prev_block.hex()}}));
            return;
        }
        if (Verdict v = validate_block(view_, genesis_, block, true, nullptr); !v.ok) {
            emit({{"type", "vote_refused"}, {"id", block.id.hex()}, {"reason", v.reason}});
            return;
        }
        voted_.insert(block.id);
    }
    const chain::Vote vote = consensus::make_vote(config_.identity, block);
    env_.send(msg.sender, envelope(MessageType::vote, {{"block_id", block.id.hex()},
                                                       {"voter", chain::key_hex(vote.voter)},
                                                       {"signature", chain::signature_hex(vote.signature)}}));
}

void Node::on_vote(const Envelope& msg) {
    if (!pending_) return;
    const auto id = chain::Hash256::from_hex(msg.body.at("block_id").get<std::string>());
    if (id != pending_->block.id) return;
    chain::Vote vote{chain::public_key_from_hex(msg.body.at("voter").get<std::string>()),
                     chain::signature_from_hex(msg.body.at("signature").get<std::string>())};
    const bool known = std::any_of(pending_->votes.begin(), pending_->votes.end(),
                                   [&](const chain::Vote& v) { return v.voter == vote.voter; });
    if (known) return;
    pending_->votes.push_back(vote);
    auto tally = consensus::poa_collect_votes(pending_->block, pending_->votes, genesis_.poa);
    if (!tally.sealed) return;
    pending_.reset();
    finalize_seal(std::move(*tally.sealed));
}

void Node::on_timer(TimerKind kind, std::uint64_t token) {
    if (!running_) return;
    switch (kind) {
        case TimerKind::sync:
            sync_tick();
            break;
        case TimerKind::produce:
            if (token != produce_token_ || !may_produce()) return;
            if (is_pow(genesis_)) {
                finish_mining();
            } else {
                seal_poa();
            }
            break;
        case TimerKind::vote_retry:
            if (!pending_ || token != pending_->token) return;
            if (env_.now() - pending_->started_at >= config_.vote_timeout_ms) {
                abandon_seal("timeout");
                schedule_production();
                return;
            }
            request_votes();
            env_.set_timer(config_.vote_retry_ms, TimerKind::vote_retry, token);
            break;
    }
}

void Node::sync_tick() {
    env_.broadcast(envelope(MessageType::hello, {{"tip", view_.canonical_tip().hex()}, {"height", view_.height()}}));
    std::set<chain::Hash256> requested;
    for (const auto& o : orphans_) {
        const auto& prev = o.block.header.prev_block;
        if (view_.contains(prev) || !requested.insert(prev).second) continue;
        const auto request = envelope(MessageType::request_block, {{"id", prev.hex()}});
        if (o.from) {
            env_.send(*o.from, request);
        } else {
            env_.broadcast(request);
        }
    }
    const std::int64_t now = env_.now();
    for (const auto& id : mempool_.ids()) {
        auto it = pending_since_.find(id);
        if (it != pending_since_.end() && now - it->second >= config_.sync_interval_ms) {
            env_.broadcast(envelope(MessageType::tx, mempool_.find(id)->to_value()));
            it->second = now;
        }
    }
    env_.set_timer(config_.sync_interval_ms, TimerKind::sync, 0);
}

void Node::emit(chain::Value record) { env_.trace(std::move(record)); }

Envelope Node::envelope(MessageType type, chain::Value body) const {
    Envelope e;
    e.type = type;
    e.body = std::move(body);
    e.sender = address();
    return e;
}

}  // namespace fabrec::net
