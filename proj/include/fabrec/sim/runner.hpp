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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fabrec/sim/scenario.hpp>

namespace fabrec::sim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDiverged = 2;

struct TxRecord {
    chain::Hash256 tx;
    std::string node;
    // "workload" or "twin".
    std::string source;
    std::int64_t submitted_ms{0};
    std::optional<std::int64_t> included_ms;
    std::optional<std::int64_t> confirmed_ms;
};

struct RunResult {
    // All running nodes agree on tip and state root after settling.
    bool converged{false};
    // Every accepted transaction reached confirm_depth on every running node.
    bool confirmed_all{false};
    int exit_code{kExitDiverged};
    std::int64_t end_ms{0};
    chain::Hash256 tip;
    std::uint64_t height{0};
    chain::Hash256 state_root;
    std::vector<TxRecord> txs;
    std::vector<std::string> rejected;
    std::map<std::string, oracle::ActuatorState> devices;
    net::NetStats stats;
};

struct RunOptions {
    // Receives each trace record as one canonical JSON line.
    std::ostream* trace{nullptr};
    // Receives device sink lines (device id, line).
    std::function<void(const std::string&, const std::string&)> device_sink;
    // Run the nodes over loopback TCP on the wall clock instead of the
    // simulator. Network latency and drop settings do not apply.
    bool live{false};
};

// Executes a scenario on the simulator: scripted workload, twins, oracle
// and crash faults run until every accepted transaction is confirm_depth
// deep on all running nodes (or max_virtual_ms passes); then production
// stops and the network settles for up to settle_ms.
class ScenarioRunner {
  public:
    // Throws ConfigError when the scenario cannot be instantiated.
    explicit ScenarioRunner(Scenario scenario, RunOptions options = {});
    ~ScenarioRunner();

    ScenarioRunner(const ScenarioRunner&) = delete;
    ScenarioRunner& operator=(const ScenarioRunner&) = delete;

    RunResult run();

    const Scenario& scenario() const noexcept { return scenario_; }
    net::Network& network() noexcept { return *sim_; }
    net::Node& node(const std::string& name) const { return sim_->node(name); }
    const net::Genesis& genesis() const noexcept { return genesis_; }
    const oracle::OracleService* oracle_service() const noexcept { return oracle_.get(); }

  private:
    struct Prepared {
        std::size_t item{0};
        chain::KeyPair signer;
        chain::Address machine;
        chain::Payload payload;
    };

    void schedule_workload();
    void submit_item(std::size_t index);
    void after_submit(std::size_t index, const std::optional<chain::Hash256>& accepted);
    void schedule_twins();
    void record_submission(net::Node& node, const chain::Transaction& tx, const std::string& source);
    void on_tip(const net::Node& node);
    bool all_confirmed() const;
    bool converged() const;
    chain::Address resolve_address(const std::string& ref) const;
    chain::Value substitute(const chain::Value& v) const;

    Scenario scenario_;
    RunOptions options_;
    net::Genesis genesis_;
    std::unique_ptr<net::Network> sim_;
    oracle::DeviceBank devices_;
    std::unique_ptr<oracle::OracleService> oracle_;
    std::map<std::string, chain::KeyPair> participant_keys_;
    std::vector<Prepared> prepared_;
    Rng gap_rng_;

    std::size_t submitted_items_{0};
    std::size_t expected_twin_batches_{0};
    std::size_t submitted_twin_batches_{0};
    struct Waiting {
        std::size_t next_item{0};
        std::string node;
        chain::Hash256 tx;
    };
    std::optional<Waiting> waiting_;
    std::vector<TxRecord> txs_;
    std::vector<std::string> rejected_;
    bool dirty_{true};
    mutable bool confirmed_cache_{false};
};

// Convenience wrapper: construct, run, return the result.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace fabrec::sim
