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

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <fabrec/net/network.hpp>

namespace fabrec::net {

// Nodes on the wall clock, each with its own I/O thread, exchanging
// newline-delimited envelopes over TCP on the loopback interface in a full
// mesh. Node callbacks, scripted actions and trace writes are serialized by
// one lock; socket reads and writes happen outside it.
// TODO: apply the scenario latency and drop settings to live links.
class LiveNetwork final : public Network {
  public:
    explicit LiveNetwork(std::string host = "127.0.0.1");
    ~LiveNetwork() override;

    LiveNetwork(const LiveNetwork&) = delete;
    LiveNetwork& operator=(const LiveNetwork&) = delete;

    // Binds the node's listening socket on an ephemeral port.
    Node& add_node(NodeConfig config, const Genesis& genesis) override;
    std::vector<Node*> nodes() const override;
    Node& node(std::string_view name) const override;

    void set_trace_sink(TraceSink sink) override;
    void trace(chain::Value record) override;

    // Milliseconds since construction.
    std::int64_t now() const override;
    NetStats stats() const override;

    // Connects the mesh, then starts every node and its I/O thread.
    void start_all() override;
    void at(std::int64_t at, std::function<void()> fn) override;
    bool run_until(const std::function<bool()>& done, std::int64_t deadline) override;

    // Joins the I/O threads; nodes keep their state but receive nothing
    // further. Idempotent.
    void shutdown();

    std::uint16_t port_of(std::string_view name) const;

  private:
    class Peer;
    struct Scheduled {
        std::int64_t at{0};
        std::uint64_t seq{0};
        std::function<void()> fn;
    };

    void trace_locked(chain::Value record);
    void io_loop(Peer& peer);

    std::string host_;
    std::chrono::steady_clock::time_point epoch_;
    mutable std::recursive_mutex world_;
    std::vector<std::unique_ptr<Peer>> peers_;
    std::vector<Scheduled> scheduled_;
    std::uint64_t seq_{0};
    TraceSink sink_;
    NetStats stats_;
    std::atomic<bool> stopping_{false};
    bool started_{false};
};

}  // namespace fabrec::net
