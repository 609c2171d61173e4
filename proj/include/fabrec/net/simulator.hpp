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
#include <memory>
#include <queue>
#include <string_view>
#include <vector>

#include <fabrec/common/rng.hpp>
#include <fabrec/net/network.hpp>

namespace fabrec::net {

struct SimNetConfig {
    // Per-message latency, uniform in [latency_min_ms, latency_max_ms].
    std::int64_t latency_min_ms{20};
    std::int64_t latency_max_ms{80};
    // Probability that a single message is lost, in [0, 1).
    double drop_rate{0.0};
    std::uint64_t rng_seed{0};

    // Throws ConfigError.
    void validate() const;
};

using SimStats = NetStats;

// Deterministic discrete-event network of nodes on a virtual clock. Events
// are ordered by (time, insertion sequence); all randomness comes from the
// configured seed.
class Simulator final : public Network {
  public:
    explicit Simulator(SimNetConfig config);
    ~Simulator() override;

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    // Throws ConfigError on a duplicate node name or address.
    Node& add_node(NodeConfig config, const Genesis& genesis) override;

    std::vector<Node*> nodes() const override;
    Node& node(std::string_view name) const override;
    Node* find(const chain::Address& address) const;

    void set_trace_sink(TraceSink sink) override { sink_ = std::move(sink); }
    // Writes a record stamped with the current time, outside any node.
    void trace(chain::Value record) override;

    std::int64_t now() const noexcept override { return now_; }
    NetStats stats() const override { return stats_; }

    void start_all() override;
    // Runs `fn` at virtual time `at` (not before now).
    void at(std::int64_t at, std::function<void()> fn) override;

    // Processes the next event. False when the queue is empty.
    bool step();
    // Processes every event scheduled at or before `deadline`; the clock
    // then reads `deadline`.
    void run_until(std::int64_t deadline);
    // Runs until `done` holds (checked after each event) or the deadline
    // passes. Returns whether `done` held.
    bool run_until(const std::function<bool()>& done, std::int64_t deadline) override;

  private:
    class Endpoint;

    struct Event {
        std::int64_t at{0};
        std::uint64_t seq{0};
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const noexcept {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    void deliver(std::size_t to, const Envelope& msg);

    SimNetConfig config_;
    Rng rng_;
    std::int64_t now_{0};
    std::uint64_t seq_{0};
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<std::unique_ptr<Endpoint>> endpoints_;
    TraceSink sink_;
    SimStats stats_;
};

}  // namespace fabrec::net
