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

#include <catch_amalgamated.hpp>

#include <fabrec/common/error.hpp>

#include <support/scenarios.hpp>

using namespace fabrec;

namespace {

struct Network {
    net::Genesis genesis;
    net::Simulator sim;
    std::vector<chain::Value> trace;

    Network(net::Genesis g, net::SimNetConfig cfg) : genesis(std::move(g)), sim(cfg) {
        sim.set_trace_sink([this](const chain::Value& v) { trace.push_back(v); });
    }

    net::Node& add(const std::string& name, net::NodeRole role, std::uint64_t seed = 1) {
        return sim.add_node(test::node_config(name, role, seed), genesis);
    }
};

std::string run_to_text(const sim::Scenario& s) {
    std::ostringstream out;
    sim::RunOptions options;
    options.trace = &out;
    const auto r = sim::run_scenario(s, options);
    REQUIRE(r.exit_code == sim::kExitOk);
    return out.str();
}

}  // namespace

TEST_CASE("simulator rejects duplicate nodes") {
    Network n(test::poa_genesis({"a0"}, {"alice"}), {});
    n.add("a0", net::NodeRole::authority);
    CHECK_THROWS_AS(n.add("a0", net::NodeRole::observer), ConfigError);
    net::NodeConfig same_key("other-name", test::key("a0"), net::NodeRole::observer);
    CHECK_THROWS_AS(n.sim.add_node(same_key, n.genesis), ConfigError);
    CHECK_THROWS_AS(net::SimNetConfig({10, 5, 0.0, 0}).validate(), ConfigError);
    CHECK_THROWS_AS(net::SimNetConfig({1, 5, 1.0, 0}).validate(), ConfigError);
}

TEST_CASE("PoA heartbeat keeps blocks coming and respects the schedule") {
    for (std::size_t n_auth : {1u, 3u, 4u, 7u}) {
        const auto names = test::numbered("a", n_auth);
        Network n(test::poa_genesis(names, {"alice"}), {20, 80, 0.0, 3});
        for (const auto& name : names) n.add(name, net::NodeRole::authority);
        n.sim.start_all();
        n.sim.run_until(100'500);
        const auto& view = n.sim.node("a0").view();
        INFO("N=" << n_auth << " height " << view.height());
        CHECK(view.height() >= 95);
        CHECK(view.height() <= 101);
        const auto& cfg = n.genesis.config.poa;
        std::vector<chain::Address> sealers;
        for (std::size_t h = 1; h < view.canonical_chain().size(); ++h) {
            const auto& b = view.entry(view.canonical_chain()[h]).block;
            if (b.header.difficulty == 2) CHECK(b.sealer() == consensus::poa_inturn_signer(h, cfg));
            sealers.push_back(b.sealer());
            CHECK(consensus::poa_validate(b, view.recent_sealers(b.header.prev_block, cfg.exclusion_window()), cfg).ok);
        }
        for (std::size_t i = 0; i < sealers.size(); ++i) {
            for (std::size_t j = i + 1; j <= i + cfg.exclusion_window() && j < sealers.size(); ++j) {
                CHECK(sealers[i] != sealers[j]);
            }
        }
    }
}

TEST_CASE("four nodes confirm twenty transactions, identically on every run") {
    auto s = test::convergence_scenario(5, 3, 0.0, consensus::ConsensusMode::PoA, 20);
    s.run.confirm_depth = 12;
    const auto report = test::convergence_case(s);
    INFO(report.result.detail);
    CHECK(report.result.ok);
    const auto first = run_to_text(s);
    const auto second = run_to_text(s);
    CHECK(first == second);
    s.seed = 6;
    CHECK(run_to_text(s) != first);
}

TEST_CASE("lossy links still converge") {
    for (auto mode : {consensus::ConsensusMode::PoA, consensus::ConsensusMode::PoW}) {
        const auto report = test::convergence_case(test::convergence_scenario(11, 4, 0.3, mode));
        INFO(report.result.detail);
        CHECK(report.result.ok);
    }
}

TEST_CASE("a single miner at difficulty 0 includes every transaction in the next block") {
    Network n(test::pow_genesis(0, {"alice"}), {1, 1, 0.0, 1});
    auto& miner = n.add("miner", net::NodeRole::miner);
    n.sim.start_all();
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto tx = test::bid("alice", i, static_cast<std::int64_t>(i) * 1000);
        std::uint64_t height_before = 0;
        n.sim.at(static_cast<std::int64_t>(i + 1) * 1000, [&, tx] {
            height_before = miner.view().height();
            REQUIRE(miner.submit_transaction(tx).ok);
        });
        REQUIRE(n.sim.run_until([&] { return miner.confirmations(tx.id).value_or(0) >= 1; }, (i + 2) * 1000));
        CHECK(miner.view().inclusion_height(tx.id) == height_before + 1);
        const auto& timing = miner.submissions().at(tx.id);
        CHECK(*timing.included_at - timing.submitted_at <= 2);
    }
}

TEST_CASE("valid transactions reach every mempool") {
    const auto names = test::numbered("a", 3);
    Network n(test::poa_genesis(names, {"alice"}), {20, 80, 0.0, 9});
    for (const auto& name : names) n.add(name, net::NodeRole::authority);
    auto& client = n.add("client", net::NodeRole::observer);
    for (auto* node : n.sim.nodes()) node->set_producing(false);
    n.sim.start_all();
    const auto tx = test::bid("alice", 1);
    n.sim.at(100, [&] { REQUIRE(client.submit_transaction(tx).ok); });
    n.sim.run_until(5'000);
    for (const auto* node : n.sim.nodes()) CHECK(node->mempool().contains(tx.id));
    const auto dup = n.sim.node("a1").submit_transaction(tx);
    CHECK(dup.reason == "duplicate");
}

TEST_CASE("a crashed authority does not stall the chain") {
    const auto names = test::numbered("a", 4);
    Network n(test::poa_genesis(names, {"alice"}), {20, 80, 0.0, 4});
    for (const auto& name : names) n.add(name, net::NodeRole::authority);
    n.sim.start_all();
    n.sim.at(5'000, [&] { n.sim.node("a2").stop(); });
    n.sim.run_until(60'000);
    const auto& view = n.sim.node("a0").view();
    // With one of four authorities gone and a two-block exclusion window,
    // only one live authority may seal each height, usually out of turn:
    // two periods plus a wiggle of up to 500 ms per authority, plus latency.
    CHECK(view.height() >= 20);
    for (std::size_t h = 2; h < view.canonical_chain().size(); ++h) {
        const auto& b = view.entry(view.canonical_chain()[h]).block;
        const auto& parent = view.entry(b.header.prev_block).block;
        CHECK(b.header.timestamp - parent.header.timestamp <= 2 * 1000 + 500 * 4 + 200);
    }
    CHECK(n.sim.node("a1").view().canonical_tip() == view.canonical_tip());
    CHECK(n.sim.node("a2").view().height() < 10);
}
