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

#include <sstream>

#include <fabrec/common/error.hpp>
#include <fabrec/sim/inspect.hpp>
#include <fabrec/sim/runner.hpp>

using namespace fabrec;

namespace {

const std::string kQuickstart = std::string(FABREC_SCENARIO_DIR) + "/quickstart-poa.scenario";

struct Recorded {
    sim::Scenario scenario;
    sim::RunResult result;
    std::string trace;
};

const Recorded& quickstart() {
    static const Recorded r = [] {
        Recorded out;
        out.scenario = sim::Scenario::load(kQuickstart);
        std::ostringstream trace;
        sim::RunOptions options;
        options.trace = &trace;
        out.result = sim::run_scenario(out.scenario, options);
        out.trace = trace.str();
        return out;
    }();
    return r;
}

sim::TraceArchive archive() {
    std::istringstream in(quickstart().trace);
    return sim::TraceArchive::parse(in);
}

chain::Value base_scenario() {
    return chain::parse_value(R"({
      "name": "t", "seed": 1,
      "consensus": {"mode": "PoA", "block_period_ms": 1000},
      "nodes": [{"name": "a", "role": "authority"}],
      "participants": [{"name": "p", "key": "p"}]
    })");
}

}  // namespace

TEST_CASE("scenario parsing rejects malformed input") {
    CHECK_NOTHROW(sim::Scenario::from_value(base_scenario()).validate());

    auto v = base_scenario();
    v["colour"] = "red";
    CHECK_THROWS_AS(sim::Scenario::from_value(v), ConfigError);

    v = base_scenario();
    v["nodes"].push_back({{"name", "b"}, {"role", "authority"}, {"key", "a"}});
    CHECK_THROWS_AS(sim::Scenario::from_value(v).validate(), ConfigError);

    v = base_scenario();
    v["nodes"].push_back({{"name", "a"}, {"role", "observer"}});
    CHECK_THROWS_AS(sim::Scenario::from_value(v).validate(), ConfigError);

    v = base_scenario();
    v["nodes"][0]["role"] = "miner";
    CHECK_THROWS_AS(sim::Scenario::from_value(v).validate(), ConfigError);

    v = base_scenario();
    v["consensus"]["mode"] = "PoS";
    CHECK_THROWS_AS(sim::Scenario::from_value(v), ConfigError);

    v = base_scenario();
    v["workload"] = chain::Value::array();
    v["workload"].push_back({{"at_ms", 1}, {"node", "nowhere"}, {"signer", "p"}, {"payload", {{"method", "app.bid"}}}});
    CHECK_THROWS_AS(sim::Scenario::from_value(v).validate(), ConfigError);

    CHECK_THROWS_AS(sim::Scenario::load("/nonexistent/x.scenario"), ConfigError);
}

TEST_CASE("scenario survives a value round trip") {
    const auto s = sim::Scenario::load(kQuickstart);
    const auto again = sim::Scenario::from_value(s.to_value());
    CHECK(again.to_value() == s.to_value());
    CHECK(again.genesis_config().to_value() == s.genesis_config().to_value());
}

TEST_CASE("quickstart run is reproducible") {
    const auto& first = quickstart();
    REQUIRE(first.result.exit_code == sim::kExitOk);
    std::ostringstream trace;
    sim::RunOptions options;
    options.trace = &trace;
    const auto second = sim::run_scenario(first.scenario, options);
    CHECK(second.tip == first.result.tip);
    CHECK(second.state_root == first.result.state_root);
    CHECK(trace.str() == first.trace);
}

TEST_CASE("trace archive rebuilds the recorded chain") {
    const auto a = archive();
    CHECK(a.rejected().empty());
    CHECK(a.summary().has_value());
    CHECK(a.head().block.id == quickstart().result.tip);
    CHECK(a.head().state_root == quickstart().result.state_root);

    const auto chain = sim::inspect_chain(a);
    CHECK(chain["mode"] == "PoA");
    CHECK(chain["height"].get<std::uint64_t>() == quickstart().result.height);
    CHECK(chain["blocks"].size() == quickstart().result.height + 1);
    CHECK_FALSE(sim::render_report("chain", chain).empty());
}

TEST_CASE("block lookup by prefix shows votes and receipts") {
    const auto a = archive();
    const auto tip = quickstart().result.tip.hex();
    const auto full = sim::inspect_block(a, tip);
    const auto by_prefix = sim::inspect_block(a, tip.substr(0, 10));
    CHECK(full == by_prefix);
    CHECK(full["canonical"] == true);
    // Three authorities: threshold 2, so the sealer and one voter.
    CHECK(full["voters"].size() == 1);
    CHECK(full["receipts"].size() == full["block"]["transactions"].size());
    CHECK(sim::render_report("block", full).find("votes (1)") != std::string::npos);

    CHECK_THROWS_AS(sim::inspect_block(a, tip.substr(0, 7)), sim::InspectError);
    CHECK_THROWS_AS(sim::inspect_block(a, "ffffffffffffffffff"), sim::InspectError);
}

TEST_CASE("history, machines and relationships queries") {
    const auto a = archive();
    const auto history = sim::inspect_history(a, "acme-machining");
    REQUIRE(history["events"].size() >= 3);
    std::uint64_t seq = 0;
    for (const auto& e : history["events"]) {
        CHECK(e["seq"].get<std::uint64_t>() == seq + 1);
        seq = e["seq"].get<std::uint64_t>();
    }
    CHECK(sim::inspect_history(a, "@acme-machining") == history);
    CHECK(sim::inspect_history(a, a.resolve("acme-machining").hex()) == history);
    CHECK_THROWS_WITH(sim::inspect_history(a, "nobody"), "not found");

    const auto machines = sim::inspect_machines(a, "acme-machining");
    REQUIRE(machines["machines"].size() == 1);
    CHECK(machines["nom"] == 1);
    CHECK(machines["machines"][0]["mac"] == "00:1b:44:11:3a:b7");
    CHECK(machines["machines"][0]["available_time"] == 420);
    CHECK(sim::inspect_machines(a, "orbit-aero")["machines"].empty());
    CHECK_THROWS_WITH(sim::inspect_machines(a, "watcher"), "not a vendor");

    const auto rels = sim::inspect_relationships(a);
    // One from buy_hours, one from prc.open.
    CHECK(rels["relationships"].size() == 2);
    CHECK(sim::render_report("relationships", rels).find("2 relationship(s)") != std::string::npos);
    CHECK(sim::render_report("history", history).find("history of") == 0);
}

TEST_CASE("trace archive rejects broken input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(sim::TraceArchive::parse(empty), ConfigError);
    std::istringstream junk("{not json\n");
    CHECK_THROWS_AS(sim::TraceArchive::parse(junk), SerializationError);

    // Drop the header line: blocks then arrive with no genesis.
    const auto& t = quickstart().trace;
    std::istringstream headless(t.substr(t.find('\n') + 1));
    CHECK_THROWS_AS(sim::TraceArchive::parse(headless), ConfigError);
}
