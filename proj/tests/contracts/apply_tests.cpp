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

#include <fabrec/contracts/apply.hpp>

#include <support/properties.hpp>

using namespace fabrec;

namespace {

chain::Transaction call(const std::string& signer, std::string method, chain::Value args, std::int64_t ts) {
    const auto k = test::key(signer);
    return chain::make_transaction(k, k.address(), chain::ContractCall{std::move(method), std::move(args)}, ts);
}

chain::Block block_with(std::vector<chain::Transaction> txs, std::uint64_t height = 1) {
    chain::Block b;
    b.header.height = height;
    b.transactions = std::move(txs);
    return b;
}

}  // namespace

TEST_CASE("an empty block leaves the root unchanged") {
    const auto g = test::poa_genesis({"auth0"}, {"alice", "bob"});
    const auto r = contracts::apply_block_to_state(g.state, block_with({}));
    CHECK(r.state_root == g.state.root());
    CHECK(r.receipts.empty());
    CHECK(r.state == g.state);
}

TEST_CASE("a failing call is recorded and skipped") {
    const auto g = test::poa_genesis({"auth0"}, {"alice", "bob"});
    const auto good = call("alice", "grc.add_machine",
                           {{"mname", "PocketNC"}, {"mac", "m1"}, {"status", true}, {"available_time", 480}, {"m_rate", 20}},
                           10);
    const auto bad = call("bob", "grc.buy_hours",
                          {{"seller", test::key("alice").address().hex()}, {"mac", "m1"}, {"hours", 9}}, 11);
    const auto block = block_with({good, bad});
    const auto r1 = contracts::apply_block_to_state(g.state, block);
    const auto r2 = contracts::apply_block_to_state(g.state, block);
    REQUIRE(r1.receipts.size() == 2);
    CHECK(r1.receipts[0].ok);
    CHECK_FALSE(r1.receipts[1].ok);
    CHECK(r1.receipts[1].note == "insufficient availability");
    CHECK(r1.state.grc_get_number_of_machines(test::key("alice").address()) == 1);
    CHECK(r1.state_root == r2.state_root);
    CHECK(r1.receipts == r2.receipts);

    const auto only_good = contracts::apply_block_to_state(g.state, block_with({good}));
    CHECK(only_good.state_root == r1.state_root);
}

TEST_CASE("call argument checking") {
    const auto g = test::poa_genesis({"auth0"}, {"alice", "bob"});
    auto state = g.state;
    const auto note = [&](const chain::Transaction& tx) { return contracts::apply_transaction(state, tx, 1).note; };
    CHECK(note(call("alice", "grc.nope", chain::Value::object(), 1)) == "unknown method grc.nope");
    CHECK(note(call("alice", "app.bid", {{"data", "x"}, {"extra", 1}}, 2)) == "bad args: unknown field extra");
    CHECK(note(call("alice", "app.bid", chain::Value::object(), 3)) == "bad args: missing data");
    CHECK(note(call("alice", "app.bid", {{"data", 5}}, 4)) == "bad args: data must be text");
    CHECK(note(call("alice", "grc.buy_hours", {{"seller", "zz"}, {"mac", "m"}, {"hours", 1}}, 5)) ==
          "bad args: seller must be an address");
    CHECK(note(call("alice", "grc.buy_hours",
                    {{"seller", test::key("bob").address().hex()}, {"mac", "m"}, {"hours", -1}}, 6)) ==
          "bad args: hours must be a non-negative integer");
    CHECK(note(call("alice", "prc.close", {{"rel_id", "00"}, {"outcome", "completed"}}, 7)) == "bad args: rel_id");
    CHECK(state == g.state);
    CHECK(note(call("alice", "app.bid", {{"data", "ok"}}, 8)).empty());
}

TEST_CASE("machine data goes to the service provider's history") {
    const auto g = test::poa_genesis({"auth0"}, {"vendor"});
    auto state = g.state;
    const auto vendor = test::key("vendor");
    const auto machine = test::key("mill-07");
    chain::MachineUtilization u;
    u.state = chain::MachineState::WORKING;
    u.duration_minutes = 30;
    u.uptime_minutes = 30;
    u.oee = 0.5;
    const auto tx = chain::make_transaction(vendor, machine.address(), u, 5);
    const auto receipt = contracts::apply_transaction(state, tx, 3);
    CHECK(receipt.ok);
    const auto h = state.phec_get_history(vendor.address(), 0, 0);
    REQUIRE(h.size() == 2);
    CHECK(h[1].kind == contracts::EventKind::UtilizationReported);
    CHECK(h[1].tx_id == tx.id);
    CHECK(h[1].at_block == 3);
}

TEST_CASE("state root check") {
    const auto g = test::poa_genesis({"auth0"}, {"alice"});
    auto block = block_with({call("alice", "grc.add_machine",
                                  {{"mname", "m"}, {"mac", "m"}, {"status", true}, {"available_time", 60}, {"m_rate", 1}},
                                  1)});
    const auto r = contracts::apply_block_to_state(g.state, block);
    block.header.state_root = r.state_root;
    CHECK(contracts::check_state_root(block, r).ok);
    block.header.state_root = g.state.root();
    CHECK(contracts::check_state_root(block, r).reason == "state-root");
}

TEST_CASE("independent replicas agree on every state root") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        for (auto mode : {consensus::ConsensusMode::PoA, consensus::ConsensusMode::PoW}) {
            const auto r = test::replay_case(seed, mode, 30);
            INFO(r.detail);
            CHECK(r.ok);
        }
    }
}

TEST_CASE("histories only grow along a chain") {
    const auto participants = test::numbered("h", 4);
    test::ChainBuilder builder(test::poa_genesis({"auth0"}, participants), {"auth0"});
    test::Workload work(participants, 99);
    std::map<chain::Address, std::vector<contracts::HistoricalEvent>> last;
    for (int i = 0; i < 40; ++i) {
        builder.extend(work.batch(5, i * 1000));
        const auto& state = *builder.view().tip().state;
        for (const auto& name : participants) {
            const auto who = test::key(name).address();
            const auto now = state.phec_get_history(who, 0, 0);
            const auto& before = last[who];
            REQUIRE(now.size() >= before.size());
            CHECK(std::equal(before.begin(), before.end(), now.begin()));
            last[who] = now;
        }
    }
}
