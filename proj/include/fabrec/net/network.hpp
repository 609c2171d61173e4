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
#include <string_view>
#include <vector>

#include <fabrec/net/node.hpp>

namespace fabrec::net {

struct NetStats {
    std::uint64_t sent{0};
    std::uint64_t dropped{0};
    std::uint64_t delivered{0};
    std::uint64_t events{0};
};

// A set of nodes wired together, plus a clock for scripted actions.
class Network {
  public:
    using TraceSink = std::function<void(const chain::Value&)>;

    virtual ~Network() = default;

    // Throws ConfigError on a duplicate node name or address.
    virtual Node& add_node(NodeConfig config, const Genesis& genesis) = 0;
    virtual std::vector<Node*> nodes() const = 0;
    virtual Node& node(std::string_view name) const = 0;

    virtual void set_trace_sink(TraceSink sink) = 0;
    // Writes a record stamped with the current time, outside any node.
    virtual void trace(chain::Value record) = 0;

    virtual std::int64_t now() const = 0;
    virtual NetStats stats() const = 0;

    virtual void start_all() = 0;
    // Runs `fn` at time `at` (not before now), serialized with node events.
    virtual void at(std::int64_t at, std::function<void()> fn) = 0;
    // Runs until `done` holds or the deadline passes. `done` is evaluated
    // serialized with node events. Returns whether `done` held.
    virtual bool run_until(const std::function<bool()>& done, std::int64_t deadline) = 0;
};

}  // namespace fabrec::net
