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

#include <fabrec/oracle/oracle.hpp>

#include <fstream>

#include <fabrec/common/error.hpp>
#include <fabrec/common/hex.hpp>
#include <fabrec/net/node.hpp>

namespace fabrec::oracle {

std::string_view to_string(TriggerKind k) noexcept {
    return k == TriggerKind::hex_string_match ? "hex_string_match" : "continuous_operation";
}

TriggerKind trigger_kind_from_string(std::string_view s) {
    if (s == "hex_string_match") return TriggerKind::hex_string_match;
    if (s == "continuous_operation") return TriggerKind::continuous_operation;
    throw ConfigError("unknown trigger kind: " + std::string(s));
}

void TriggerRule::validate() const {
    if (rule_id.empty()) throw ConfigError("rule_id must not be empty");
    const std::string where = "rule " + rule_id + ": ";
    if (min_confirmations < 1) throw ConfigError(where + "min_confirmations must be at least 1");
    if (action.target.empty()) throw ConfigError(where + "action target must not be empty");
    if (kind == TriggerKind::hex_string_match) {
        if (!hex_pattern || hex_pattern->empty() || hex_pattern->size() % 2 != 0) {
            throw ConfigError(where + "hex_pattern must be non-empty with an even length");
        }
        for (char c : *hex_pattern) {
            if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
                throw ConfigError(where + "hex_pattern must be lowercase hex");
            }
        }
        if (machine || min_continuous_minutes) {
            throw ConfigError(where + "hex_string_match takes no machine or min_continuous_minutes");
        }
    } else {
        if (!machine || !min_continuous_minutes || *min_continuous_minutes == 0) {
            throw ConfigError(where + "continuous_operation needs machine and positive min_continuous_minutes");
        }
        if (hex_pattern) throw ConfigError(where + "continuous_operation takes no hex_pattern");
    }
}

chain::Value TriggerRule::to_value() const {
    chain::Value v{{"rule_id", rule_id},
                   {"kind", to_string(kind)},
                   {"min_confirmations", min_confirmations},
                   {"action", {{"target", action.target}, {"command", to_string(action.command)}}}};
    if (hex_pattern) v["hex_pattern"] = *hex_pattern;
    if (machine) v["machine"] = machine->hex();
    if (min_continuous_minutes) v["min_continuous_minutes"] = *min_continuous_minutes;
    return v;
}

TriggerRule TriggerRule::from_value(const chain::Value& v) {
    TriggerRule r;
    try {
        r.rule_id = v.at("rule_id").get<std::string>();
        r.kind = trigger_kind_from_string(v.at("kind").get<std::string>());
        if (v.contains("hex_pattern")) r.hex_pattern = v.at("hex_pattern").get<std::string>();
        if (v.contains("machine")) r.machine = chain::Address::from_hex(v.at("machine").get<std::string>());
        if (v.contains("min_continuous_minutes")) {
            r.min_continuous_minutes = v.at("min_continuous_minutes").get<std::uint64_t>();
        }
        r.min_confirmations = v.value("min_confirmations", std::uint64_t{12});
        const auto& a = v.at("action");
        r.action.target = a.at("target").get<std::string>();
        r.action.command = command_from_string(a.at("command").get<std::string>());
    } catch (const chain::Value::exception& e) {
        throw ConfigError(std::string("trigger rule: ") + e.what());
    } catch (const SerializationError& e) {
        throw ConfigError(std::string("trigger rule: ") + e.what());
    }
    r.validate();
    return r;
}

bool payload_matches(const chain::Transaction& tx, std::string_view pattern) {
    if (pattern.empty()) return false;
    const std::string hex = to_hex(as_bytes(chain::canonical_serialize(chain::payload_to_value(tx.payload))));
    for (auto pos = hex.find(pattern); pos != std::string::npos; pos = hex.find(pattern, pos + 1)) {
        if (pos % 2 == 0) return true;
    }
    return false;
}

std::vector<std::vector<chain::Hash256>> continuous_evidence(const contracts::ContractState& state,
                                                             const chain::Address& machine, std::uint64_t min_minutes) {
    std::vector<std::vector<chain::Hash256>> out;
    if (!state.is_registered(machine)) return out;
    std::uint64_t run = 0;
    bool reached = false;
    std::vector<chain::Hash256> txs;
    for (const auto& e : state.phec_get_history(machine, 1, 0)) {
        if (e.kind != contracts::EventKind::UtilizationReported) continue;
        const auto v = chain::parse_value(e.summary);
        const auto s = chain::machine_state_from_string(v.at("state").get<std::string>());
        if (s == chain::MachineState::OFF) {
            run = 0;
            reached = false;
            txs.clear();
            continue;
        }
        if (s != chain::MachineState::WORKING || reached) continue;
        run += v.at("duration_minutes").get<std::uint64_t>();
        if (txs.empty() || txs.back() != e.tx_id) txs.push_back(e.tx_id);
        if (run >= min_minutes) {
            out.push_back(txs);
            reached = true;
        }
    }
    return out;
}

chain::Hash256 evidence_hash(const std::vector<chain::Hash256>& tx_ids) {
    chain::Sha256Stream h;
    for (const auto& id : tx_ids) h.update(id.bytes);
    return h.finish();
}

Oracle::Oracle(std::vector<TriggerRule> rules) : rules_(std::move(rules)) {
    std::set<std::string> ids;
    for (const auto& r : rules_) {
        r.validate();
        if (!ids.insert(r.rule_id).second) throw ConfigError("duplicate rule_id " + r.rule_id);
    }
}

void Oracle::roll_back(const net::ChainView& view, const TriggerRule& rule, PollResult& out) {
    auto it = cursors_.find(rule.rule_id);
    if (it == cursors_.end() || it->second.height == 0) return;
    const net::BlockEntry* e = view.find(it->second.block);
    if (e == nullptr || view.is_canonical(e->block.id)) return;
    while (!view.is_canonical(e->block.id)) e = &view.entry(e->block.header.prev_block);
    it->second = {e->block.header.height, e->block.id};
    out.rolled_back.push_back(rule.rule_id);
}

void Oracle::fire(const TriggerRule& rule, std::vector<chain::Hash256> evidence, std::int64_t now, PollResult& out) {
    const chain::Hash256 h = evidence_hash(evidence);
    if (!fired_keys_.emplace(rule.rule_id, h).second) return;
    fired_.push_back({rule.rule_id, h, std::move(evidence), now, false});
    out.commands.push_back({rule.action.target, rule.action.command, now, rule.rule_id, h});
}

PollResult Oracle::poll(const net::ChainView& view, std::int64_t now) {
    PollResult out;
    for (auto& f : fired_) {
        if (f.compensated) continue;
        const bool evicted = std::any_of(f.evidence.begin(), f.evidence.end(),
                                         [&](const chain::Hash256& id) { return !view.inclusion_height(id); });
        if (evicted) {
            f.compensated = true;
            out.compensations.push_back({f.rule_id, f.evidence_hash, now});
        }
    }
    for (const auto& rule : rules_) {
        roll_back(view, rule, out);
        auto [it, fresh] = cursors_.try_emplace(rule.rule_id, RuleCursor{0, view.genesis().block.id});
        RuleCursor& cursor = it->second;
        if (view.height() + 1 <= rule.min_confirmations) continue;
        const std::uint64_t frontier = view.height() + 1 - rule.min_confirmations;
        if (frontier <= cursor.height) continue;

        if (rule.kind == TriggerKind::hex_string_match) {
            for (std::uint64_t h = cursor.height + 1; h <= frontier; ++h) {
                for (const auto& tx : view.entry(*view.canonical_at(h)).block.transactions) {
                    if (payload_matches(tx, *rule.hex_pattern)) fire(rule, {tx.id}, now, out);
                }
            }
        } else {
            const auto& state = *view.entry(*view.canonical_at(frontier)).state;
            for (auto& evidence : continuous_evidence(state, *rule.machine, *rule.min_continuous_minutes)) {
                fire(rule, std::move(evidence), now, out);
            }
        }
        cursor = {frontier, *view.canonical_at(frontier)};
    }
    return out;
}

chain::Value Oracle::state_value() const {
    chain::Value cursors = chain::Value::object();
    for (const auto& [id, c] : cursors_) cursors[id] = {{"height", c.height}, {"block", c.block.hex()}};
    chain::Value fired = chain::Value::array();
    for (const auto& f : fired_) {
        chain::Value evidence = chain::Value::array();
        for (const auto& id : f.evidence) evidence.push_back(id.hex());
        fired.push_back({{"rule_id", f.rule_id},
                         {"evidence_hash", f.evidence_hash.hex()},
                         {"evidence", std::move(evidence)},
                         {"at", f.at},
                         {"compensated", f.compensated}});
    }
    return {{"cursors", std::move(cursors)}, {"fired", std::move(fired)}};
}

void Oracle::restore(const chain::Value& v) {
    std::map<std::string, RuleCursor> cursors;
    std::vector<FiredRecord> fired;
    std::set<std::pair<std::string, chain::Hash256>> keys;
    try {
        for (const auto& [id, c] : v.at("cursors").items()) {
            cursors[id] = {c.at("height").get<std::uint64_t>(), chain::Hash256::from_hex(c.at("block").get<std::string>())};
        }
        for (const auto& f : v.at("fired")) {
            FiredRecord r;
            r.rule_id = f.at("rule_id").get<std::string>();
            r.evidence_hash = chain::Hash256::from_hex(f.at("evidence_hash").get<std::string>());
            for (const auto& id : f.at("evidence")) r.evidence.push_back(chain::Hash256::from_hex(id.get<std::string>()));
            r.at = f.at("at").get<std::int64_t>();
            r.compensated = f.at("compensated").get<bool>();
            keys.emplace(r.rule_id, r.evidence_hash);
            fired.push_back(std::move(r));
        }
    } catch (const chain::Value::exception& e) {
        throw SerializationError(std::string("oracle state: ") + e.what());
    }
    cursors_ = std::move(cursors);
    fired_ = std::move(fired);
    fired_keys_ = std::move(keys);
}

void Oracle::save(const std::filesystem::path& path) const {
    const auto tmp = std::filesystem::path(path).concat(".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << chain::canonical_serialize(state_value()) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

void Oracle::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return;
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    restore(chain::parse_value(text));
}

OracleService::OracleService(net::Node& node, Oracle oracle, DeviceBank& devices,
                             std::optional<std::filesystem::path> state_file)
    : node_(node), oracle_(std::move(oracle)), devices_(devices), state_file_(std::move(state_file)) {
    if (state_file_) oracle_.load(*state_file_);
    devices_.on_warning([this](const std::string& message) {
        node_.trace({{"type", "device_warning"}, {"message", message}});
    });
    node_.on_tip_change([this](const net::Node&, const net::TipChange&) { poll_now(); });
}

void OracleService::poll_now() {
    auto result = oracle_.poll(node_.view(), node_.now());
    for (const auto& rule_id : result.rolled_back) {
        node_.trace({{"type", "oracle_rollback"}, {"rule_id", rule_id}, {"height", oracle_.cursors().at(rule_id).height}});
    }
    for (const auto& c : result.compensations) {
        node_.trace({{"type", "compensation"}, {"rule_id", c.rule_id}, {"evidence_hash", c.evidence_hash.hex()}});
    }
    for (const auto& cmd : result.commands) {
        const bool applied = devices_.dispatch(cmd);
        chain::Value rec = cmd.to_value();
        rec["type"] = "actuator";
        rec["applied"] = applied;
        rec["tip_height"] = node_.view().height();
        node_.trace(std::move(rec));
    }
    if (state_file_) oracle_.save(*state_file_);
}

}  // namespace fabrec::oracle
