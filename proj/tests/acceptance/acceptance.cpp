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

// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// The exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <fabrec/bench/benchmark.hpp>
#include <fabrec/consensus/pow.hpp>
#include <fabrec/contracts/state.hpp>
#include <fabrec/sim/runner.hpp>

#include <support/scenarios.hpp>

using namespace fabrec;
using consensus::ConsensusMode;

namespace {

struct Outcome {
    bool ok{true};
    std::string detail;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (failures.size() < 5) failures.push_back(what);
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

unsigned count_zero_bits(const chain::Hash256& id) {
    unsigned n = 0;
    for (auto byte : id.bytes) {
        for (int bit = 7; bit >= 0; --bit) {
            if ((byte >> bit) & 1) return n;
            ++n;
        }
    }
    return n;
}

Outcome consensus_ordering() {
    Outcome out;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const auto checks = bench::check_ordering(seeds, bench::BenchmarkSpec::defaults(ConsensusMode::PoA),
                                              bench::BenchmarkSpec::defaults(ConsensusMode::PoW));
    std::size_t held = 0;
    for (const auto& c : checks) {
        const std::string s = "seed " + std::to_string(c.seed);
        out.expect(c.poa.n == 60 && c.pow.n == 60, s + ": expected 60 samples per mode");
        out.expect(c.inclusion_mean(), s + ": mean inclusion PoA >= PoW");
        out.expect(c.inclusion_std(), s + ": inclusion stddev PoA >= PoW");
        out.expect(c.confirm_mean(), s + ": mean confirmation PoA >= PoW");
        out.expect(c.confirm_std(), s + ": confirmation stddev PoA >= PoW");
        held += c.holds();
    }
    const auto& c = checks.front();
    out.detail = std::to_string(held) + "/5 seeds; seed 1 inclusion " + fmt("%.2f", c.poa.mean_inclusion_s) + "+-" +
                 fmt("%.2f", c.poa.std_inclusion_s) + " s vs " + fmt("%.2f", c.pow.mean_inclusion_s) + "+-" +
                 fmt("%.2f", c.pow.std_inclusion_s) + " s, 12 conf " + fmt("%.1f", c.poa.mean_confirm_s) + " vs " +
                 fmt("%.1f", c.pow.mean_confirm_s) + " s";
    return out;
}

chain::Block pow_template(unsigned bits, std::uint64_t salt) {
    const auto sealer = test::key("miner");
    const auto parent = chain::make_genesis(1000, chain::sha256(std::string_view("state")));
    return chain::make_block(parent, {test::bid("alice", salt)}, sealer, chain::sha256(std::string_view("s")),
                             2000 + static_cast<std::int64_t>(salt), 0, bits);
}

Outcome pow_statistics() {
    Outcome out;
    for (unsigned d : {4u, 8u}) {
        auto block = pow_template(d, 0);
        const std::uint64_t trials = 40'000;
        std::uint64_t hits = 0;
        for (std::uint64_t nonce = 0; nonce < trials; ++nonce) {
            block.header.nonce = nonce;
            const auto id = chain::header_id(block.header);
            const bool counted = count_zero_bits(id) >= d;
            out.expect(counted == consensus::meets_target(id, d), "meets_target disagrees with bit count");
            hits += counted;
        }
        const double p = std::ldexp(1.0, -static_cast<int>(d));
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
        const double rate = static_cast<double>(hits) / static_cast<double>(trials);
        out.expect(std::abs(rate - p) <= 3 * se, "d=" + std::to_string(d) + " rate " + std::to_string(rate));
        out.detail += "d=" + std::to_string(d) + " rate " + fmt("%.5f", rate) + " (2^-d " + fmt("%.5f", p) + ", " +
                      fmt("%.2f", std::abs(rate - p) / se) + " SE); ";
    }
    double total = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto block = pow_template(8, i);
        const auto mined = consensus::pow_mine(block.header, {8}, mix_seed(i));
        out.expect(mined.found && count_zero_bits(mined.id) >= 8, "pow_mine returned a non-solution");
        total += static_cast<double>(mined.attempts);
    }
    const double mean = total / 200;
    out.expect(mean >= 128 && mean <= 512, "mean attempts " + std::to_string(mean));
    out.detail += "d=8 mean attempts " + fmt("%.1f", mean);
    return out;
}

struct QuietEnv : net::NodeEnv {
    std::int64_t now() const override { return 0; }
    void send(const chain::Address&, const net::Envelope&) override {}
    void broadcast(const net::Envelope&) override {}
    void set_timer(std::int64_t, net::TimerKind, std::uint64_t) override {}
    void trace(chain::Value) override {}
};

Outcome poa_threshold() {
    Outcome out;
    std::size_t blocks = 0;
    std::size_t node_checks = 0;
    for (std::size_t n : {1u, 3u, 4u, 5u, 7u}) {
        const auto names = test::numbered("authority-", n);
        test::ChainBuilder builder(test::poa_genesis(names, {"alice"}), names);
        const auto& cfg = builder.genesis().config.poa;
        out.expect(cfg.vote_threshold == n / 2 + 1, "threshold for N=" + std::to_string(n));
        QuietEnv env;
        std::vector<std::unique_ptr<net::Node>> nodes;
        for (const auto& name : names) {
            nodes.push_back(std::make_unique<net::Node>(test::node_config(name, net::NodeRole::authority),
                                                        builder.genesis(), env));
            nodes.back()->start();
        }
        std::int64_t spacing = 1000;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            for (std::size_t sealer = 0; sealer < n; ++sealer) {
                if (!(mask & (1u << sealer))) continue;
                auto block = builder.build(builder.genesis().block.id, {}, sealer, spacing++);
                block.votes.clear();
                for (std::size_t v = 0; v < n; ++v) {
                    if (v != sealer && (mask & (1u << v))) {
                        block.votes.push_back(consensus::make_vote(test::key(names[v]), block));
                    }
                }
                const auto signers = static_cast<std::size_t>(__builtin_popcount(mask));
                const bool enough = signers >= cfg.vote_threshold;
                const std::string where = "N=" + std::to_string(n) + " signers=" + std::to_string(signers);
                out.expect(consensus::poa_validate(block, {}, cfg).ok == enough, where + ": poa_validate");
                for (auto& node : nodes) {
                    const auto outcome = node->receive_block(block);
                    out.expect((outcome.status == net::BlockStatus::accepted) == enough, where + ": node " + node->name() + " " + outcome.reason);
                    ++node_checks;
                }
                ++blocks;
            }
        }
    }
    out.detail = std::to_string(blocks) + " signer sets, " + std::to_string(node_checks) + " node verdicts";
    return out;
}

// 100 blocks at N=4; with `crashed` one authority is down from the start so
// its turns are taken out of turn.
void clique_run(Outcome& out, const std::optional<std::string>& crashed) {
    const auto names = test::numbered("a", 4);
    const auto genesis = test::poa_genesis(names, {"alice"});
    net::Simulator sim({20, 80, 0.0, 7});
    for (const auto& name : names) sim.add_node(test::node_config(name, net::NodeRole::authority, 7), genesis);
    sim.start_all();
    if (crashed) sim.node(*crashed).stop();
    while (sim.node("a0").view().height() < 100) sim.run_until(sim.now() + 1000);
    const auto& view = sim.node("a0").view();
    std::vector<chain::Address> sealers;
    std::size_t in_turn = 0;
    for (std::size_t h = 1; h <= 100; ++h) {
        const auto& b = view.entry(view.canonical_chain()[h]).block;
        if (b.header.difficulty == 2) {
            ++in_turn;
            out.expect(b.sealer() == test::key(names[h % 4]).address(), "in-turn sealer at height " + std::to_string(h));
        }
        sealers.push_back(b.sealer());
    }
    const std::size_t window = 4 / 2 + 1;
    for (std::size_t i = 0; i + 1 < sealers.size(); ++i) {
        std::set<chain::Address> seen;
        for (std::size_t j = i; j < i + window && j < sealers.size(); ++j) {
            out.expect(seen.insert(sealers[j]).second, "repeated signer in window at " + std::to_string(i + 1));
        }
    }
    if (crashed) out.expect(in_turn < 100, "no out-of-turn blocks with an authority down");
    out.detail += std::string(out.detail.empty() ? "" : "; ") + (crashed ? "a3 down: " : "all up: ") +
                  std::to_string(in_turn) + "/100 in turn";
}

Outcome clique_schedule() {
    Outcome out;
    clique_run(out, std::nullopt);
    clique_run(out, "a3");
    return out;
}

Outcome tamper_evidence() {
    Outcome out;
    std::size_t neutral = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto r = test::tamper_case(seed);
        out.expect(r.ok, "seed " + std::to_string(seed) + ": " + r.detail);
        neutral += r.detail.find("id-neutral") != std::string::npos;
    }
    out.detail = "1000 cases (" + std::to_string(neutral) + " leave recomputed ids unchanged)";
    return out;
}

Outcome replicated_determinism() {
    Outcome out;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (auto mode : {ConsensusMode::PoA, ConsensusMode::PoW}) {
            const auto r = test::replay_case(seed, mode, 50);
            out.expect(r.ok, r.detail);
        }
    }
    out.detail = "100 cases x 2 modes x 50 blocks";
    return out;
}

Outcome contract_semantics() {
    Outcome out;
    contracts::ContractState state;
    std::uint64_t counter = 0;
    auto ctx = [&](const std::string& who) {
        ++counter;
        return contracts::CallContext{test::key(who).address(), chain::sha256("tx-" + std::to_string(counter)), counter,
                                      static_cast<std::int64_t>(counter)};
    };
    auto error_of = [](const std::function<void()>& f) -> std::string {
        try {
            f();
        } catch (const contracts::ContractError& e) {
            return e.what();
        }
        return "";
    };
    const auto vendor = test::key("vendor").address();
    const auto buyer = test::key("buyer").address();
    state.grc_register_participant(ctx("vendor"), test::key("vendor").public_key());
    state.grc_register_participant(ctx("buyer"), test::key("buyer").public_key());
    out.expect(state.is_registered(vendor) && state.is_registered(buyer), "register");
    state.grc_add_machine(ctx("vendor"), {"PocketNC", "mac-0", true, 480, 20});
    out.expect(state.grc_get_number_of_machines(vendor) == 1, "getNumberOfMachines");
    out.expect(state.grc_get_machine_info(vendor, 0) == contracts::MachineInfo{"PocketNC", true, 20, "mac-0"},
               "getMachineInfo");
    state.grc_buy_hours(ctx("buyer"), vendor, "mac-0", 1);
    out.expect(state.vendor(vendor).machines[0].available_time == 420, "480 - 60 = 420");
    auto root = state.root();
    out.expect(error_of([&] { state.grc_buy_hours(ctx("buyer"), test::key("ghost").address(), "mac-0", 1); }) ==
                   "checkSeller failed",
               "checkSeller failure");
    out.expect(error_of([&] { state.grc_buy_hours(ctx("buyer"), vendor, "mac-0", 8); }) == "insufficient availability",
               "insufficient availability");
    out.expect(state.root() == root, "failed calls leave the state root unchanged");

    using contracts::RelationshipStatus;
    const RelationshipStatus all[] = {RelationshipStatus::current, RelationshipStatus::voided,
                                      RelationshipStatus::completed};
    int legal = 0;
    int illegal = 0;
    for (auto from : all) {
        for (auto to : all) {
            const auto rel = state.prc_open(ctx("vendor"), buyer, "job " + std::to_string(counter), std::nullopt);
            if (from != RelationshipStatus::current) state.prc_close(ctx("vendor"), rel, from);
            root = state.root();
            const bool applied = error_of([&] { state.prc_close(ctx("buyer"), rel, to); }).empty();
            (applied ? legal : illegal) += 1;
            out.expect(applied == (from == RelationshipStatus::current && to != RelationshipStatus::current),
                       "transition " + std::string(contracts::to_string(from)) + " -> " + std::string(contracts::to_string(to)));
            out.expect(applied == contracts::relationship_transition_allowed(from, to), "transition table");
            if (!applied) out.expect(state.root() == root, "illegal transition changed state");
        }
    }
    out.expect(legal == 2 && illegal == 7, "transition matrix counts");
    out.detail = "420 minutes left, " + std::to_string(legal) + " legal / " + std::to_string(illegal) +
                 " illegal transitions";
    return out;
}

Outcome convergence() {
    Outcome out;
    std::size_t returned = 0;
    std::size_t reorgs = 0;
    std::set<std::string> covered;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto mode = i % 2 == 0 ? ConsensusMode::PoA : ConsensusMode::PoW;
        const std::size_t nodes = 2 + (i / 2) % 6;
        const double drop = (i / 4) % 2 == 0 ? 0.0 : 0.3;
        const auto report = test::convergence_case(test::convergence_scenario(100 + i, nodes, drop, mode));
        out.expect(report.result.ok, report.result.detail);
        returned += report.returned;
        reorgs += report.reorgs;
        covered.insert(std::string(consensus::to_string(mode)) + (drop > 0 ? " lossy" : " clean"));
    }
    out.expect(covered.size() == 4, "mode/drop coverage");
    out.expect(returned > 0, "no scenario evicted a transaction from a fork");
    out.detail = "20 scenarios, " + std::to_string(reorgs) + " reorgs, " + std::to_string(returned) +
                 " txs returned from evicted forks and re-confirmed";
    return out;
}

sim::Scenario oracle_scenario(const std::vector<std::pair<std::string, std::uint64_t>>& events) {
    chain::Value v = chain::parse_value(R"({
      "name": "oracle", "seed": 9,
      "consensus": {"mode": "PoA", "block_period_ms": 1000},
      "network": {"latency_ms": [20, 80], "drop_rate": 0.0},
      "nodes": [
        {"name": "authority-0", "role": "authority"},
        {"name": "authority-1", "role": "authority"},
        {"name": "authority-2", "role": "authority"},
        {"name": "shopfloor", "role": "machine_agent"},
        {"name": "watcher", "role": "observer"}
      ],
      "participants": [{"name": "mill", "key": "mill"}],
      "oracle": {
        "node": "watcher", "devices": ["led-1"],
        "rules": [{"rule_id": "eight-hour-run", "kind": "continuous_operation", "machine": "@mill",
                   "min_continuous_minutes": 480, "min_confirmations": 12,
                   "action": {"target": "led-1", "command": "ON"}}]
      },
      "run": {"confirm_depth": 12, "max_virtual_ms": 120000, "settle_ms": 20000}
    })");
    chain::Value twin{{"machine", "mill"}, {"node", "shopfloor"}, {"batch_size", 2}, {"start_ms", 1000},
                      {"interval_ms", 1500}, {"events", chain::Value::array()}};
    for (const auto& [state, minutes] : events) twin["events"].push_back({{"state", state}, {"duration_minutes", minutes}});
    v["twins"] = chain::Value::array({twin});
    return sim::Scenario::from_value(v);
}

Outcome end_to_end_oracle() {
    Outcome out;
    {
        const auto scenario = oracle_scenario({{"WORKING", 120}, {"WORKING", 120}, {"WORKING", 120}, {"WORKING", 120}});
        std::ostringstream trace;
        sim::RunOptions options;
        options.trace = &trace;
        sim::ScenarioRunner runner(scenario, options);
        const auto result = runner.run();
        out.expect(result.exit_code == sim::kExitOk, "480-minute run did not finish cleanly");
        const auto& led = result.devices.at("led-1");
        out.expect(led.command_log.size() == 1, "expected exactly one command, got " + std::to_string(led.command_log.size()));
        out.expect(led.powered, "led-1 is not ON");

        const auto& view = runner.node("watcher").view();
        std::uint64_t evidence_height = 0;
        for (const auto& rec : result.txs) {
            if (rec.source != "twin") continue;
            const auto h = view.inclusion_height(rec.tx);
            out.expect(h.has_value(), "twin transaction not on the canonical chain");
            evidence_height = std::max(evidence_height, h.value_or(0));
        }
        std::size_t actuator_records = 0;
        std::istringstream lines(trace.str());
        for (std::string line; std::getline(lines, line);) {
            const auto rec = chain::parse_value(line);
            if (rec.value("type", "") != "actuator") continue;
            ++actuator_records;
            const auto depth = rec["tip_height"].get<std::uint64_t>() - evidence_height + 1;
            out.expect(depth >= 12, "fired at depth " + std::to_string(depth));
            out.detail = "480 min: 1 ON at evidence depth " + std::to_string(depth) + "; ";
        }
        out.expect(actuator_records == 1, "actuator records in trace: " + std::to_string(actuator_records));
    }
    {
        const auto scenario = oracle_scenario({{"WORKING", 300}, {"OFF", 10}, {"WORKING", 200}});
        const auto result = sim::run_scenario(scenario, {});
        out.expect(result.exit_code == sim::kExitOk, "counter-scenario did not finish cleanly");
        const auto& led = result.devices.at("led-1");
        out.expect(led.command_log.empty() && !led.powered, "counter-scenario produced a command");
        out.detail += "300/OFF/200: " + std::to_string(led.command_log.size()) + " commands";
    }
    return out;
}

std::string trace_of(const sim::Scenario& s) {
    std::ostringstream trace;
    sim::RunOptions options;
    options.trace = &trace;
    sim::run_scenario(s, options);
    return trace.str();
}

Outcome reproducibility() {
    Outcome out;
    std::vector<sim::Scenario> scenarios{
        sim::Scenario::load(std::string(FABREC_SCENARIO_DIR) + "/quickstart-poa.scenario"),
        test::convergence_scenario(7, 5, 0.3, ConsensusMode::PoW),
        test::convergence_scenario(8, 4, 0.3, ConsensusMode::PoA),
        oracle_scenario({{"WORKING", 480}}),
    };
    std::size_t bytes = 0;
    for (const auto& s : scenarios) {
        const auto a = trace_of(s);
        const auto b = trace_of(s);
        out.expect(!a.empty() && a == b, s.name + " traces differ");
        bytes += a.size();
    }
    out.detail = std::to_string(scenarios.size()) + " scenarios run twice, " + std::to_string(bytes) +
                 " trace bytes compared";
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"consensus ordering", 120, consensus_ordering},
        {"pow statistics", 30, pow_statistics},
        {"poa threshold", 10, poa_threshold},
        {"clique schedule", 10, clique_schedule},
        {"tamper evidence", 30, tamper_evidence},
        {"replicated determinism", 60, replicated_determinism},
        {"contract semantics", 5, contract_semantics},
        {"convergence", 120, convergence},
        {"end-to-end oracle", 30, end_to_end_oracle},
        {"reproducibility", 60, reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            out.ok = false;
            out.failures.push_back("took " + fmt("%.1f", secs) + " s, budget " + fmt("%.0f", c.budget_s) + " s");
        }
        failed += !out.ok;
        std::printf("%s  %-24s %6.1f s  %s\n", out.ok ? "PASS" : "FAIL", c.name, secs, out.detail.c_str());
        for (const auto& f : out.failures) std::printf("      %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed;
}
