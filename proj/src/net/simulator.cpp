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

#include <fabrec/net/simulator.hpp>

#include <stdexcept>

#include <fabrec/common/error.hpp>

namespace fabrec::net {

void SimNetConfig::validate() const {
    if (latency_min_ms < 0 || latency_max_ms < latency_min_ms) {
        throw ConfigError("latency range must satisfy 0 <= min <= max");
    }
    if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
        throw ConfigError("drop_rate must be in [0, 1)");
    }
}

class Simulator::Endpoint : public NodeEnv {
  public:
    Endpoint(Simulator& sim, std::size_t index) : sim_(sim), index_(index) {}

    std::int64_t now() const override { return sim_.now_; }

    void send(const chain::Address& to, const Envelope& msg) override {
        for (std::size_t i = 0; i < sim_.endpoints_.size(); ++i) {
            if (i != index_ && sim_.endpoints_[i]->node->address() == to) {
                sim_.deliver(i, msg);
                return;
            }
        }
    }

    void broadcast(const Envelope& msg) override {
        for (std::size_t i = 0; i < sim_.endpoints_.size(); ++i) {
            if (i != index_) sim_.deliver(i, msg);
        }
    }

    void set_timer(std::int64_t delay_ms, TimerKind kind, std::uint64_t token) override {
        Node* target = node.get();
        sim_.at(sim_.now_ + std::max<std::int64_t>(0, delay_ms), [target, kind, token] { target->on_timer(kind, token); });
    }

    void trace(chain::Value record) override {
        record["node"] = node->name();
        sim_.trace(std::move(record));
    }

    std::unique_ptr<Node> node;

  private:
    Simulator& sim_;
    std::size_t index_;
};

Simulator::Simulator(SimNetConfig config) : config_(config), rng_(mix_seed(config.rng_seed)) { config_.validate(); }

Simulator::~Simulator() = default;

Node& Simulator::add_node(NodeConfig config, const Genesis& genesis) {
    const auto address = config.identity.address();
    for (const auto& ep : endpoints_) {
        if (ep->node->name() == config.name) throw ConfigError("duplicate node name " + config.name);
        if (ep->node->address() == address) throw ConfigError("duplicate node address " + address.hex());
    }
    auto ep = std::make_unique<Endpoint>(*this, endpoints_.size());
    ep->node = std::make_unique<Node>(std::move(config), genesis, *ep);
    endpoints_.push_back(std::move(ep));
    return *endpoints_.back()->node;
}

std::vector<Node*> Simulator::nodes() const {
    std::vector<Node*> out;
    out.reserve(endpoints_.size());
    for (const auto& ep : endpoints_) out.push_back(ep->node.get());
    return out;
}

Node& Simulator::node(std::string_view name) const {
    for (const auto& ep : endpoints_) {
        if (ep->node->name() == name) return *ep->node;
    }
    throw std::out_of_range("no node named " + std::string(name));
}

Node* Simulator::find(const chain::Address& address) const {
    for (const auto& ep : endpoints_) {
        if (ep->node->address() == address) return ep->node.get();
    }
    return nullptr;
}

void Simulator::trace(chain::Value record) {
    if (!sink_) return;
    record["t"] = now_;
    sink_(record);
}

void Simulator::start_all() {
    for (const auto& ep : endpoints_) ep->node->start();
}

void Simulator::at(std::int64_t at, std::function<void()> fn) {
    queue_.push(Event{std::max(at, now_), seq_++, std::move(fn)});
}

void Simulator::deliver(std::size_t to, const Envelope& msg) {
    ++stats_.sent;
    if (config_.drop_rate > 0.0 && rng_.chance(config_.drop_rate)) {
        ++stats_.dropped;
        return;
    }
    const std::int64_t latency = rng_.uniform(config_.latency_min_ms, config_.latency_max_ms);
    Node* target = endpoints_[to]->node.get();
    at(now_ + latency, [this, target, msg] {
        ++stats_.delivered;
        target->on_message(msg);
    });
}

bool Simulator::step() {
    if (queue_.empty()) return false;
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    now_ = ev.at;
    ++stats_.events;
    ev.fn();
    return true;
}

void Simulator::run_until(std::int64_t deadline) {
    while (!queue_.empty() && queue_.top().at <= deadline) step();
    now_ = std::max(now_, deadline);
}

bool Simulator::run_until(const std::function<bool()>& done, std::int64_t deadline) {
    if (done()) return true;
    while (!queue_.empty() && queue_.top().at <= deadline) {
        step();
        if (done()) return true;
    }
    now_ = std::max(now_, deadline);
    return done();
}

}  // namespace fabrec::net
