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

#include <fabrec/sim/scenario.hpp>

#include <algorithm>
#include <fstream>
#include <set>

#include <fabrec/common/error.hpp>
#include <fabrec/common/hex.hpp>

namespace fabrec::sim {

namespace {

    using chain::Value;

    [[noreturn]] void fail(const std::string& where, const std::string& what) {
        throw ConfigError(where + ": " + what);
    }

    const Value& field(const Value& obj, const char* key, const std::string& where) {
        if (!obj.is_object()) fail(where, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
        return *it;
    }

    std::string text(const Value& v, const std::string& where) {
        if (!v.is_string()) fail(where, "expected a string");
        return v.get<std::string>();
    }

    std::int64_t integer(const Value& v, const std::string& where) {
        if (!v.is_number_integer()) fail(where, "expected an integer");
        return v.get<std::int64_t>();
    }

    std::uint64_t count(const Value& v, const std::string& where) {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(where, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    double number(const Value& v, const std::string& where) {
        if (!v.is_number()) fail(where, "expected a number");
        return v.get<double>();
    }

    void only_fields(const Value& obj, std::initializer_list<const char*> allowed, const std::string& where) {
        for (const auto& [k, _] : obj.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) fail(where, "unknown field '" + k + "'");
        }
    }

    KeySpec parse_key(const Value* v, const std::string& fallback, const std::string& where) {
        KeySpec k;
        if (v == nullptr) {
            k.passphrase = fallback;
        } else if (v->is_string()) {
            k.passphrase = v->get<std::string>();
        } else if (v->is_object()) {
            only_fields(*v, {"seed"}, where);
            k.seed_hex = text(field(*v, "seed", where), where + ".seed");
            if (from_hex(*k.seed_hex).size() != 32) fail(where, "seed must be 32 bytes of hex");
        } else {
            fail(where, "expected a passphrase string or {\"seed\": hex}");
        }
        return k;
    }

    Value key_value(const KeySpec& k) {
        if (k.seed_hex) return {{"seed", *k.seed_hex}};
        return *k.passphrase;
    }

    const Value* optional(const Value& obj, const char* key) {
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

}  // namespace

chain::KeyPair KeySpec::key_pair() const {
    if (seed_hex) {
        const Bytes raw = from_hex(*seed_hex);
        chain::KeySeed seed{};
        if (raw.size() != seed.size()) throw ConfigError("key seed must be 32 bytes");
        std::copy(raw.begin(), raw.end(), seed.begin());
        return chain::KeyPair::from_seed(seed);
    }
    return chain::KeyPair::from_passphrase(passphrase.value_or(""));
}

Scenario Scenario::from_value(const chain::Value& v) {
    Scenario s;
    try {
        if (!v.is_object()) fail("scenario", "expected an object");
        only_fields(v, {"name", "seed", "consensus", "network", "nodes", "participants", "workload", "twins", "oracle",
                        "faults", "run"},
                    "scenario");
        s.name = text(field(v, "name", "scenario"), "name");
        s.seed = count(field(v, "seed", "scenario"), "seed");

        const Value& cons = field(v, "consensus", "scenario");
        s.mode = consensus::consensus_mode_from_string(text(field(cons, "mode", "consensus"), "consensus.mode"));
        if (s.mode == consensus::ConsensusMode::PoW) {
            only_fields(cons, {"mode", "difficulty_bits", "ms_per_attempt"}, "consensus");
            s.difficulty_bits = static_cast<unsigned>(count(field(cons, "difficulty_bits", "consensus"), "difficulty_bits"));
            if (const Value* m = optional(cons, "ms_per_attempt")) s.ms_per_attempt = number(*m, "ms_per_attempt");
        } else {
            only_fields(cons, {"mode", "block_period_ms"}, "consensus");
            if (const Value* p = optional(cons, "block_period_ms")) s.block_period_ms = integer(*p, "block_period_ms");
        }

        if (const Value* net = optional(v, "network")) {
            only_fields(*net, {"latency_ms", "drop_rate"}, "network");
            if (const Value* lat = optional(*net, "latency_ms")) {
                if (!lat->is_array() || lat->size() != 2) fail("network.latency_ms", "expected [min, max]");
                s.network.latency_min_ms = integer((*lat)[0], "network.latency_ms[0]");
                s.network.latency_max_ms = integer((*lat)[1], "network.latency_ms[1]");
            }
            if (const Value* d = optional(*net, "drop_rate")) s.network.drop_rate = number(*d, "network.drop_rate");
        }
        s.network.rng_seed = s.seed;

        const Value& nodes = field(v, "nodes", "scenario");
        if (!nodes.is_array() || nodes.empty()) fail("nodes", "expected a non-empty array");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string where = "nodes[" + std::to_string(i) + "]";
            only_fields(nodes[i], {"name", "role", "key"}, where);
            NodeSpec n;
            n.name = text(field(nodes[i], "name", where), where + ".name");
            n.role = net::node_role_from_string(text(field(nodes[i], "role", where), where + ".role"));
            n.key = parse_key(optional(nodes[i], "key"), n.name, where + ".key");
            s.nodes.push_back(std::move(n));
        }

        if (const Value* parts = optional(v, "participants")) {
            for (std::size_t i = 0; i < parts->size(); ++i) {
                const std::string where = "participants[" + std::to_string(i) + "]";
                const Value& p = (*parts)[i];
                only_fields(p, {"name", "key", "registered"}, where);
                ParticipantSpec ps;
                ps.name = text(field(p, "name", where), where + ".name");
                ps.key = parse_key(optional(p, "key"), ps.name, where + ".key");
                if (const Value* r = optional(p, "registered")) {
                    if (!r->is_boolean()) fail(where + ".registered", "expected a boolean");
                    ps.registered = r->get<bool>();
                }
                s.participants.push_back(std::move(ps));
            }
        }

        if (const Value* work = optional(v, "workload")) {
            for (std::size_t i = 0; i < work->size(); ++i) {
                const std::string where = "workload[" + std::to_string(i) + "]";
                const Value& w = (*work)[i];
                only_fields(w, {"at_ms", "after_previous_included_ms", "node", "signer", "machine", "operation", "payload"},
                            where);
                WorkloadItem item;
                if (const Value* at = optional(w, "at_ms")) item.at_ms = integer(*at, where + ".at_ms");
                if (const Value* gap = optional(w, "after_previous_included_ms")) {
                    if (!gap->is_array() || gap->size() != 2) fail(where, "after_previous_included_ms must be [lo, hi]");
                    item.after_previous = {integer((*gap)[0], where), integer((*gap)[1], where)};
                    if (item.after_previous->first < 0 || item.after_previous->second < item.after_previous->first) {
                        fail(where, "after_previous_included_ms must satisfy 0 <= lo <= hi");
                    }
                }
                if (item.at_ms.has_value() == item.after_previous.has_value()) {
                    fail(where, "exactly one of at_ms and after_previous_included_ms is required");
                }
                item.node = text(field(w, "node", where), where + ".node");
                item.signer = text(field(w, "signer", where), where + ".signer");
                if (const Value* m = optional(w, "machine")) item.machine = text(*m, where + ".machine");
                item.operation = chain::operation_from_string(text(field(w, "operation", where), where + ".operation"));
                item.payload = field(w, "payload", where);
                s.workload.push_back(std::move(item));
            }
        }

        if (const Value* twins = optional(v, "twins")) {
            for (std::size_t i = 0; i < twins->size(); ++i) {
                const std::string where = "twins[" + std::to_string(i) + "]";
                const Value& t = (*twins)[i];
                only_fields(t, {"machine", "node", "batch_size", "start_ms", "interval_ms", "events"}, where);
                TwinSpec ts;
                ts.machine = text(field(t, "machine", where), where + ".machine");
                ts.node = text(field(t, "node", where), where + ".node");
                ts.batch_size = count(field(t, "batch_size", where), where + ".batch_size");
                if (const Value* st = optional(t, "start_ms")) ts.start_ms = integer(*st, where + ".start_ms");
                if (const Value* iv = optional(t, "interval_ms")) ts.interval_ms = integer(*iv, where + ".interval_ms");
                for (const auto& e : field(t, "events", where)) {
                    only_fields(e, {"state", "duration_minutes"}, where + ".events");
                    ts.events.push_back({chain::machine_state_from_string(text(field(e, "state", where), where)),
                                         count(field(e, "duration_minutes", where), where + ".duration_minutes")});
                }
                s.twins.push_back(std::move(ts));
            }
        }

        if (const Value* o = optional(v, "oracle")) {
            only_fields(*o, {"node", "devices", "rules"}, "oracle");
            OracleSpec os;
            os.node = text(field(*o, "node", "oracle"), "oracle.node");
            for (const auto& d : field(*o, "devices", "oracle")) os.devices.push_back(text(d, "oracle.devices"));
            for (Value r : field(*o, "rules", "oracle")) {
                // Rules may name a participant machine as "@name".
                if (r.is_object() && r.contains("machine") && r["machine"].is_string()) {
                    const auto ref = r["machine"].get<std::string>();
                    if (ref.starts_with("@")) {
                        auto it = std::find_if(s.participants.begin(), s.participants.end(),
                                               [&](const ParticipantSpec& p) { return p.name == ref.substr(1); });
                        if (it == s.participants.end()) fail("oracle.rules", "unknown participant " + ref);
                        r["machine"] = it->key.key_pair().address().hex();
                    }
                }
                os.rules.push_back(oracle::TriggerRule::from_value(r));
            }
            s.oracle = std::move(os);
        }

        if (const Value* faults = optional(v, "faults")) {
            for (const auto& f : *faults) {
                only_fields(f, {"node", "crash_at_ms"}, "faults");
                s.faults.push_back({text(field(f, "node", "faults"), "faults.node"),
                                    integer(field(f, "crash_at_ms", "faults"), "faults.crash_at_ms")});
            }
        }

        if (const Value* run = optional(v, "run")) {
            only_fields(*run, {"confirm_depth", "max_virtual_ms", "settle_ms", "max_block_txs", "sync_interval_ms"}, "run");
            if (const Value* x = optional(*run, "confirm_depth")) s.run.confirm_depth = count(*x, "run.confirm_depth");
            if (const Value* x = optional(*run, "max_virtual_ms")) s.run.max_virtual_ms = integer(*x, "run.max_virtual_ms");
            if (const Value* x = optional(*run, "settle_ms")) s.run.settle_ms = integer(*x, "run.settle_ms");
            if (const Value* x = optional(*run, "max_block_txs")) s.run.max_block_txs = count(*x, "run.max_block_txs");
            if (const Value* x = optional(*run, "sync_interval_ms")) {
                s.run.sync_interval_ms = integer(*x, "run.sync_interval_ms");
            }
        }
    } catch (const chain::Value::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const SerializationError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const PayloadError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario " + path.string());
    Value v;
    try {
        v = Value::parse(in);
    } catch (const Value::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return from_value(v);
}

chain::Value Scenario::to_value() const {
    Value cons{{"mode", consensus::to_string(mode)}};
    if (mode == consensus::ConsensusMode::PoW) {
        cons["difficulty_bits"] = difficulty_bits;
        cons["ms_per_attempt"] = ms_per_attempt;
    } else {
        cons["block_period_ms"] = block_period_ms;
    }
    Value nodes_v = Value::array();
    for (const auto& n : nodes) {
        nodes_v.push_back({{"name", n.name}, {"role", net::to_string(n.role)}, {"key", key_value(n.key)}});
    }
    Value parts = Value::array();
    for (const auto& p : participants) {
        parts.push_back({{"name", p.name}, {"key", key_value(p.key)}, {"registered", p.registered}});
    }
    Value work = Value::array();
    for (const auto& w : workload) {
        Value item{{"node", w.node},
                   {"signer", w.signer},
                   {"operation", chain::to_string(w.operation)},
                   {"payload", w.payload}};
        if (w.at_ms) item["at_ms"] = *w.at_ms;
        if (w.after_previous) item["after_previous_included_ms"] = {w.after_previous->first, w.after_previous->second};
        if (w.machine) item["machine"] = *w.machine;
        work.push_back(std::move(item));
    }
    Value twins_v = Value::array();
    for (const auto& t : twins) {
        Value events = Value::array();
        for (const auto& e : t.events) {
            events.push_back({{"state", chain::to_string(e.state)}, {"duration_minutes", e.duration_minutes}});
        }
        twins_v.push_back({{"machine", t.machine},
                           {"node", t.node},
                           {"batch_size", t.batch_size},
                           {"start_ms", t.start_ms},
                           {"interval_ms", t.interval_ms},
                           {"events", std::move(events)}});
    }
    Value faults_v = Value::array();
    for (const auto& f : faults) faults_v.push_back({{"node", f.node}, {"crash_at_ms", f.crash_at_ms}});

    Value out{{"name", name},
              {"seed", seed},
              {"consensus", std::move(cons)},
              {"network",
               {{"latency_ms", {network.latency_min_ms, network.latency_max_ms}}, {"drop_rate", network.drop_rate}}},
              {"nodes", std::move(nodes_v)},
              {"participants", std::move(parts)},
              {"workload", std::move(work)},
              {"twins", std::move(twins_v)},
              {"faults", std::move(faults_v)},
              {"run",
               {{"confirm_depth", run.confirm_depth},
                {"max_virtual_ms", run.max_virtual_ms},
                {"settle_ms", run.settle_ms},
                {"max_block_txs", run.max_block_txs},
                {"sync_interval_ms", run.sync_interval_ms}}}};
    if (oracle) {
        Value rules = Value::array();
        for (const auto& r : oracle->rules) rules.push_back(r.to_value());
        out["oracle"] = {{"node", oracle->node}, {"devices", oracle->devices}, {"rules", std::move(rules)}};
    }
    return out;
}

void Scenario::validate() const {
    if (name.empty()) throw ConfigError("name must not be empty");
    network.validate();
    if (mode == consensus::ConsensusMode::PoW) {
        consensus::PowConfig{difficulty_bits}.validate();
        if (!(ms_per_attempt > 0.0)) throw ConfigError("consensus.ms_per_attempt must be positive");
    } else if (block_period_ms <= 0) {
        throw ConfigError("consensus.block_period_ms must be positive");
    }

    std::set<std::string> node_names;
    std::set<chain::Address> node_addrs;
    std::size_t producers = 0;
    for (const auto& n : nodes) {
        if (!node_names.insert(n.name).second) throw ConfigError("duplicate node name " + n.name);
        if (!node_addrs.insert(n.key.key_pair().address()).second) {
            throw ConfigError("duplicate node address for node " + n.name);
        }
        if (n.role == net::NodeRole::authority) {
            if (mode != consensus::ConsensusMode::PoA) throw ConfigError("node " + n.name + ": authority requires PoA");
            ++producers;
        }
        if (n.role == net::NodeRole::miner) {
            if (mode != consensus::ConsensusMode::PoW) throw ConfigError("node " + n.name + ": miner requires PoW");
            ++producers;
        }
    }
    if (producers == 0) throw ConfigError("scenario has no block producer");

    std::set<std::string> part_names;
    std::set<chain::Address> part_addrs;
    for (const auto& p : participants) {
        if (!part_names.insert(p.name).second) throw ConfigError("duplicate participant " + p.name);
        if (!part_addrs.insert(p.key.key_pair().address()).second) {
            throw ConfigError("duplicate participant address for " + p.name);
        }
    }

    auto known_node = [&](const std::string& n, const std::string& where) {
        if (!node_names.contains(n)) throw ConfigError(where + ": unknown node " + n);
    };
    auto known_part = [&](const std::string& p, const std::string& where) {
        if (!part_names.contains(p)) throw ConfigError(where + ": unknown participant " + p);
    };
    for (std::size_t i = 0; i < workload.size(); ++i) {
        const std::string where = "workload[" + std::to_string(i) + "]";
        known_node(workload[i].node, where);
        known_part(workload[i].signer, where);
        if (workload[i].at_ms && *workload[i].at_ms < 0) throw ConfigError(where + ": at_ms must be non-negative");
    }
    for (std::size_t i = 0; i < twins.size(); ++i) {
        const std::string where = "twins[" + std::to_string(i) + "]";
        known_node(twins[i].node, where);
        known_part(twins[i].machine, where);
        if (twins[i].batch_size == 0) throw ConfigError(where + ": batch_size must be positive");
        if (twins[i].interval_ms <= 0 || twins[i].start_ms < 0) throw ConfigError(where + ": bad timing");
    }
    if (oracle) {
        known_node(oracle->node, "oracle");
        for (const auto& n : nodes) {
            if (n.name == oracle->node && n.role != net::NodeRole::observer) {
                throw ConfigError("oracle node " + n.name + " must be an observer");
            }
        }
        std::set<std::string> rule_ids;
        for (const auto& r : oracle->rules) {
            if (!rule_ids.insert(r.rule_id).second) throw ConfigError("duplicate rule_id " + r.rule_id);
        }
    }
    for (const auto& f : faults) {
        known_node(f.node, "faults");
        if (f.crash_at_ms < 0) throw ConfigError("faults: crash_at_ms must be non-negative");
    }
    if (run.confirm_depth == 0) throw ConfigError("run.confirm_depth must be positive");
    if (run.max_virtual_ms <= 0 || run.settle_ms < 0) throw ConfigError("run: bad time limits");
    if (run.max_block_txs == 0) throw ConfigError("run.max_block_txs must be positive");
    if (run.sync_interval_ms <= 0) throw ConfigError("run.sync_interval_ms must be positive");
}

net::GenesisConfig Scenario::genesis_config() const {
    net::GenesisConfig g;
    g.mode = mode;
    if (mode == consensus::ConsensusMode::PoW) {
        g.pow.difficulty_bits = difficulty_bits;
    } else {
        std::vector<chain::Address> auths;
        for (const auto& n : nodes) {
            if (n.role == net::NodeRole::authority) auths.push_back(n.key.key_pair().address());
        }
        g.poa = consensus::PoaConfig::make(std::move(auths), block_period_ms);
    }
    for (const auto& p : participants) g.participants.push_back({p.name, p.key.key_pair().public_key(), p.registered});
    return g;
}

}  // namespace fabrec::sim
