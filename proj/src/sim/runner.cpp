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

#include <fabrec/sim/runner.hpp>

#include <fabrec/common/error.hpp>
#include <fabrec/net/live.hpp>

namespace fabrec::sim {

namespace {

    constexpr std::uint64_t kGapStream = 0x6761702d726e67ULL;

}  // namespace

ScenarioRunner::ScenarioRunner(Scenario scenario, RunOptions options)
    : scenario_(std::move(scenario)),
      options_(std::move(options)),
      gap_rng_(mix_seed(scenario_.seed ^ kGapStream)) {
    scenario_.validate();
    genesis_ = net::build_genesis(scenario_.genesis_config());
    for (const auto& p : scenario_.participants) participant_keys_.emplace(p.name, p.key.key_pair());

    for (std::size_t i = 0; i < scenario_.workload.size(); ++i) {
        const auto& w = scenario_.workload[i];
        const std::string where = "workload[" + std::to_string(i) + "]";
        const chain::KeyPair& signer = participant_keys_.at(w.signer);
        const chain::Address machine = w.machine ? resolve_address(*w.machine) : signer.address();
        chain::Payload payload;
        try {
            payload = chain::payload_from_value(w.operation, substitute(w.payload));
            chain::validate_payload(payload);
        } catch (const PayloadError& e) {
            throw ConfigError(where + ": " + e.what());
        }
        prepared_.push_back(Prepared{i, signer, machine, std::move(payload)});
    }

    if (options_.live) {
        sim_ = std::make_unique<net::LiveNetwork>();
    } else {
        net::SimNetConfig net = scenario_.network;
        net.rng_seed = scenario_.seed;
        sim_ = std::make_unique<net::Simulator>(net);
    }
    if (options_.trace != nullptr) {
        sim_->set_trace_sink([out = options_.trace](const chain::Value& record) {
            *out << chain::canonical_serialize(record) << '\n';
        });
    }

    for (std::size_t i = 0; i < scenario_.nodes.size(); ++i) {
        const auto& spec = scenario_.nodes[i];
        net::NodeConfig cfg(spec.name, spec.key.key_pair(), spec.role);
        cfg.max_block_txs = scenario_.run.max_block_txs;
        cfg.ms_per_attempt = scenario_.ms_per_attempt;
        cfg.sync_interval_ms = scenario_.run.sync_interval_ms;
        cfg.confirm_depth = scenario_.run.confirm_depth;
        cfg.seed = mix_seed(scenario_.seed + 1 + i);
        auto& node = sim_->add_node(std::move(cfg), genesis_);
        node.on_tip_change([this](const net::Node& n, const net::TipChange&) { on_tip(n); });
    }

    if (scenario_.oracle) {
        for (const auto& d : scenario_.oracle->devices) {
            oracle::DeviceBank::Sink sink;
            if (options_.device_sink) {
                sink = [this, d](const std::string& line) { options_.device_sink(d, line); };
            }
            devices_.add_device(d, std::move(sink));
        }
        oracle_ = std::make_unique<oracle::OracleService>(sim_->node(scenario_.oracle->node),
                                                          oracle::Oracle(scenario_.oracle->rules), devices_);
    }
}

ScenarioRunner::~ScenarioRunner() {
    if (auto* live = dynamic_cast<net::LiveNetwork*>(sim_.get())) live->shutdown();
}

chain::Address ScenarioRunner::resolve_address(const std::string& ref) const {
    const std::string name = !ref.empty() && ref[0] == '@' ? ref.substr(1) : ref;
    if (auto it = participant_keys_.find(name); it != participant_keys_.end()) return it->second.address();
    for (const auto& n : scenario_.nodes) {
        if (n.name == name) return n.key.key_pair().address();
    }
    try {
        return chain::Address::from_hex(ref);
    } catch (const Error&) {
        throw ConfigError("unknown participant or address " + ref);
    }
}

chain::Value ScenarioRunner::substitute(const chain::Value& v) const {
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.size() < 2 || s[0] != '@') return v;
        constexpr std::string_view kKeySuffix = ".public_key";
        if (s.size() > kKeySuffix.size() && s.ends_with(kKeySuffix)) {
            const std::string name = s.substr(1, s.size() - 1 - kKeySuffix.size());
            auto it = participant_keys_.find(name);
            if (it == participant_keys_.end()) throw ConfigError("unknown participant " + name);
            return chain::key_hex(it->second.public_key());
        }
        return resolve_address(s).hex();
    }
    if (v.is_array()) {
        chain::Value out = chain::Value::array();
        for (const auto& e : v) out.push_back(substitute(e));
        return out;
    }
    if (v.is_object()) {
        chain::Value out = chain::Value::object();
        for (const auto& [k, e] : v.items()) out[k] = substitute(e);
        return out;
    }
    return v;
}

void ScenarioRunner::record_submission(net::Node& node, const chain::Transaction& tx, const std::string& source) {
    const Verdict v = node.submit_transaction(tx);
    if (v.ok) {
        txs_.push_back({tx.id, node.name(), source, sim_->now(), std::nullopt, std::nullopt});
    } else {
        rejected_.push_back(source + " " + tx.id.hex() + ": " + v.reason);
    }
    dirty_ = true;
}

void ScenarioRunner::schedule_workload() {
    for (std::size_t i = 0; i < scenario_.workload.size(); ++i) {
        const auto& w = scenario_.workload[i];
        if (w.at_ms) {
            sim_->at(*w.at_ms, [this, i] { submit_item(i); });
        } else if (i == 0) {
            sim_->at(gap_rng_.uniform(w.after_previous->first, w.after_previous->second), [this] { submit_item(0); });
        }
    }
}

void ScenarioRunner::submit_item(std::size_t index) {
    const auto& w = scenario_.workload[index];
    const auto& p = prepared_[index];
    net::Node& node = sim_->node(w.node);
    const chain::Transaction tx = chain::make_transaction(p.signer, p.signer.address(), p.machine,
                                                          chain::operation_of(p.payload), p.payload, sim_->now());
    ++submitted_items_;
    const std::size_t before = txs_.size();
    record_submission(node, tx, "workload");
    after_submit(index, txs_.size() > before ? std::optional(tx.id) : std::nullopt);
}

void ScenarioRunner::after_submit(std::size_t index, const std::optional<chain::Hash256>& accepted) {
    const std::size_t next = index + 1;
    if (next >= scenario_.workload.size() || !scenario_.workload[next].after_previous) return;
    const auto [lo, hi] = *scenario_.workload[next].after_previous;
    if (!accepted || !sim_->node(scenario_.workload[index].node).running()) {
        sim_->at(sim_->now() + gap_rng_.uniform(lo, hi), [this, next] { submit_item(next); });
        return;
    }
    waiting_ = Waiting{next, scenario_.workload[index].node, *accepted};
}

void ScenarioRunner::schedule_twins() {
    for (const auto& twin : scenario_.twins) {
        const chain::KeyPair& machine = participant_keys_.at(twin.machine);
        const std::size_t batches = (twin.events.size() + twin.batch_size - 1) / twin.batch_size;
        expected_twin_batches_ += batches;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::int64_t base = twin.start_ms + static_cast<std::int64_t>(b) * twin.interval_ms;
            std::vector<oracle::MachineEvent> events;
            for (std::size_t j = b * twin.batch_size; j < std::min(twin.events.size(), (b + 1) * twin.batch_size); ++j) {
                const auto offset = static_cast<std::int64_t>(j - b * twin.batch_size);
                events.push_back({machine.address(), twin.events[j].state, base + offset, twin.events[j].duration_minutes});
            }
            const std::int64_t submit_at = events.back().at + 1;
            sim_->at(submit_at, [this, &twin, machine, events = std::move(events)] {
                net::Node& node = sim_->node(twin.node);
                ++submitted_twin_batches_;
                try {
                    const auto txs = oracle::twin_emit(machine, events, events.size(), *node.view().tip().state);
                    for (const auto& tx : txs) record_submission(node, tx, "twin");
                } catch (const AuthorizationError& e) {
                    rejected_.push_back(std::string("twin: ") + e.what());
                    sim_->trace({{"type", "twin_rejected"}, {"node", node.name()}, {"error", e.what()}});
                }
            });
        }
    }
}

void ScenarioRunner::on_tip(const net::Node& node) {
    dirty_ = true;
    if (!waiting_ || node.name() != waiting_->node) return;
    const auto& subs = node.submissions();
    auto it = subs.find(waiting_->tx);
    if (it == subs.end() || !it->second.included_at) return;
    const std::size_t next = waiting_->next_item;
    waiting_.reset();
    const auto [lo, hi] = *scenario_.workload[next].after_previous;
    sim_->at(sim_->now() + gap_rng_.uniform(lo, hi), [this, next] { submit_item(next); });
}

bool ScenarioRunner::all_confirmed() const {
    if (submitted_items_ < scenario_.workload.size() || submitted_twin_batches_ < expected_twin_batches_) return false;
    for (const auto* node : sim_->nodes()) {
        if (!node->running()) continue;
        for (const auto& rec : txs_) {
            if (node->confirmations(rec.tx).value_or(0) < scenario_.run.confirm_depth) return false;
        }
    }
    return true;
}

bool ScenarioRunner::converged() const {
    const net::Node* first = nullptr;
    for (const auto* node : sim_->nodes()) {
        if (!node->running()) continue;
        if (first == nullptr) {
            first = node;
            continue;
        }
        if (node->view().canonical_tip() != first->view().canonical_tip() ||
            node->view().tip().state_root != first->view().tip().state_root) {
            return false;
        }
    }
    return true;
}

RunResult ScenarioRunner::run() {
    chain::Value header{{"type", "scenario"},
                        {"name", scenario_.name},
                        {"seed", scenario_.seed},
                        {"scenario", scenario_.to_value()},
                        {"genesis",
                         {{"config", genesis_.config.to_value()},
                          {"block", genesis_.block.to_value()},
                          {"state_root", genesis_.state.root().hex()}}}};
    chain::Value nodes = chain::Value::array();
    for (const auto* n : sim_->nodes()) {
        nodes.push_back({{"name", n->name()}, {"role", net::to_string(n->config().role)}, {"address", n->address().hex()}});
    }
    header["nodes"] = std::move(nodes);
    chain::Value parts = chain::Value::object();
    for (const auto& [name, key] : participant_keys_) parts[name] = key.address().hex();
    header["participants"] = std::move(parts);
    sim_->trace(std::move(header));

    for (const auto& f : scenario_.faults) {
        sim_->at(f.crash_at_ms, [this, name = f.node] { sim_->node(name).stop(); });
    }
    schedule_workload();
    schedule_twins();
    sim_->start_all();

    const bool confirmed = sim_->run_until(
        [this] {
            if (!dirty_) return confirmed_cache_;
            dirty_ = false;
            confirmed_cache_ = all_confirmed();
            return confirmed_cache_;
        },
        scenario_.run.max_virtual_ms);
    bool quiesced = false;
    sim_->at(sim_->now(), [this, confirmed, &quiesced] {
        quiesced = true;
        sim_->trace({{"type", "quiesce"}, {"confirmed_all", confirmed}});
        for (auto* n : sim_->nodes()) n->set_producing(false);
    });
    const bool settled = sim_->run_until([this, &quiesced] { return quiesced && converged(); }, sim_->now() + scenario_.run.settle_ms);
    if (auto* live = dynamic_cast<net::LiveNetwork*>(sim_.get())) live->shutdown();

    RunResult r;
    r.confirmed_all = confirmed;
    r.converged = settled;
    r.exit_code = confirmed && settled ? kExitOk : kExitDiverged;
    r.end_ms = sim_->now();
    const net::Node* reference = nullptr;
    for (const auto* n : sim_->nodes()) {
        if (n->running()) {
            reference = n;
            break;
        }
    }
    if (reference != nullptr) {
        r.tip = reference->view().canonical_tip();
        r.height = reference->view().height();
        r.state_root = reference->view().tip().state_root;
    }
    for (auto rec : txs_) {
        const auto& subs = sim_->node(rec.node).submissions();
        if (auto it = subs.find(rec.tx); it != subs.end()) {
            rec.included_ms = it->second.included_at;
            rec.confirmed_ms = it->second.confirmed_at;
        }
        r.txs.push_back(std::move(rec));
    }
    r.rejected = rejected_;
    for (const auto& [name, state] : devices_.devices()) r.devices.emplace(name, state);
    r.stats = sim_->stats();

    sim_->trace({{"type", "summary"},
                 {"converged", r.converged},
                 {"confirmed_all", r.confirmed_all},
                 {"exit_code", r.exit_code},
                 {"tip", r.tip.hex()},
                 {"height", r.height},
                 {"state_root", r.state_root.hex()},
                 {"transactions", r.txs.size()},
                 {"rejected", r.rejected.size()},
                 {"messages", {{"sent", r.stats.sent}, {"dropped", r.stats.dropped}}}});
    return r;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
    ScenarioRunner runner(scenario, options);
    return runner.run();
}

}  // namespace fabrec::sim
