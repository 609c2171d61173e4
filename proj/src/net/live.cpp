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

#include <fabrec/net/live.hpp>

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <map>
#include <queue>
#include <stdexcept>
#include <thread>

#include <fabrec/common/error.hpp>

namespace fabrec::net {

namespace {

    [[noreturn]] void sys_fail(const std::string& what) { throw Error(what + ": " + std::strerror(errno)); }

    void close_fd(int& fd) {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }

    void write_all(int fd, std::string_view data) {
        while (!data.empty()) {
            const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                return;
            }
            data.remove_prefix(static_cast<std::size_t>(n));
        }
    }

}  // namespace

class LiveNetwork::Peer : public NodeEnv {
  public:
    explicit Peer(LiveNetwork& net) : net_(net) {}
    ~Peer() override {
        close_fd(listen_fd);
        close_fd(wake_read);
        close_fd(wake_write);
        for (auto& [addr, fd] : outgoing) ::close(fd);
        for (auto& c : incoming) ::close(c.fd);
    }

    std::int64_t now() const override { return net_.now(); }

    void send(const chain::Address& to, const Envelope& msg) override {
        for (const auto& p : net_.peers_) {
            if (p.get() != this && p->node->address() == to) {
                ++net_.stats_.sent;
                outbox_to(to, msg.to_line());
                return;
            }
        }
    }

    void broadcast(const Envelope& msg) override {
        const std::string line = msg.to_line();
        for (const auto& p : net_.peers_) {
            if (p.get() == this) continue;
            ++net_.stats_.sent;
            outbox_to(p->node->address(), line);
        }
    }

    void set_timer(std::int64_t delay_ms, TimerKind kind, std::uint64_t token) override {
        timers.push({net_.now() + std::max<std::int64_t>(0, delay_ms), timer_seq++, kind, token});
        wake();
    }

    void trace(chain::Value record) override {
        record["node"] = node->name();
        net_.trace_locked(std::move(record));
    }

    void outbox_to(const chain::Address& to, const std::string& line) {
        outbox[to] += line;
        wake();
    }

    void wake() const {
        const char b = 1;
        [[maybe_unused]] const auto n = ::write(wake_write, &b, 1);
    }

    struct Timer {
        std::int64_t at{0};
        std::uint64_t seq{0};
        TimerKind kind{TimerKind::sync};
        std::uint64_t token{0};
    };
    struct Later {
        bool operator()(const Timer& a, const Timer& b) const noexcept {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };
    struct Conn {
        int fd{-1};
        LineBuffer buffer;
    };

    std::unique_ptr<Node> node;
    int listen_fd{-1};
    int wake_read{-1};
    int wake_write{-1};
    std::uint16_t port{0};
    std::map<chain::Address, int> outgoing;
    std::map<chain::Address, std::string> outbox;
    std::vector<Conn> incoming;
    std::priority_queue<Timer, std::vector<Timer>, Later> timers;
    std::uint64_t timer_seq{0};
    std::thread thread;

  private:
    LiveNetwork& net_;
};

LiveNetwork::LiveNetwork(std::string host) : host_(std::move(host)), epoch_(std::chrono::steady_clock::now()) {}

LiveNetwork::~LiveNetwork() { shutdown(); }

Node& LiveNetwork::add_node(NodeConfig config, const Genesis& genesis) {
    std::lock_guard lock(world_);
    if (started_) throw ConfigError("cannot add nodes to a running live network");
    const auto address = config.identity.address();
    for (const auto& p : peers_) {
        if (p->node->name() == config.name) throw ConfigError("duplicate node name " + config.name);
        if (p->node->address() == address) throw ConfigError("duplicate node address " + address.hex());
    }
    config.clock = ClockKind::wall;
    auto peer = std::make_unique<Peer>(*this);

    int pipe_fds[2];
    if (::pipe2(pipe_fds, O_NONBLOCK | O_CLOEXEC) != 0) sys_fail("pipe");
    peer->wake_read = pipe_fds[0];
    peer->wake_write = pipe_fds[1];

    peer->listen_fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (peer->listen_fd < 0) sys_fail("socket");
    const int one = 1;
    ::setsockopt(peer->listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = 0;
    if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) throw ConfigError("bad listen host " + host_);
    if (::bind(peer->listen_fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) sys_fail("bind");
    if (::listen(peer->listen_fd, 64) != 0) sys_fail("listen");
    socklen_t len = sizeof addr;
    ::getsockname(peer->listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
    peer->port = ntohs(addr.sin_port);

    config.peers.clear();
    peer->node = std::make_unique<Node>(std::move(config), genesis, *peer);
    peers_.push_back(std::move(peer));
    return *peers_.back()->node;
}

std::vector<Node*> LiveNetwork::nodes() const {
    std::vector<Node*> out;
    for (const auto& p : peers_) out.push_back(p->node.get());
    return out;
}

Node& LiveNetwork::node(std::string_view name) const {
    for (const auto& p : peers_) {
        if (p->node->name() == name) return *p->node;
    }
    throw std::out_of_range("no node named " + std::string(name));
}

std::uint16_t LiveNetwork::port_of(std::string_view name) const {
    for (const auto& p : peers_) {
        if (p->node->name() == name) return p->port;
    }
    throw std::out_of_range("no node named " + std::string(name));
}

void LiveNetwork::set_trace_sink(TraceSink sink) {
    std::lock_guard lock(world_);
    sink_ = std::move(sink);
}

void LiveNetwork::trace(chain::Value record) {
    std::lock_guard lock(world_);
    trace_locked(std::move(record));
}

void LiveNetwork::trace_locked(chain::Value record) {
    if (!sink_) return;
    record["t"] = now();
    sink_(record);
}

std::int64_t LiveNetwork::now() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - epoch_).count();
}

NetStats LiveNetwork::stats() const {
    std::lock_guard lock(world_);
    return stats_;
}

void LiveNetwork::start_all() {
    std::lock_guard lock(world_);
    if (started_) return;
    for (auto& from : peers_) {
        for (auto& to : peers_) {
            if (from == to) continue;
            const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
            if (fd < 0) sys_fail("socket");
            sockaddr_in addr{};
            addr.sin_family = AF_INET;
            addr.sin_port = htons(to->port);
            ::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr);
            if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
                ::close(fd);
                sys_fail("connect to " + to->node->name());
            }
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            from->outgoing.emplace(to->node->address(), fd);
        }
    }
    started_ = true;
    for (auto& p : peers_) p->node->start();
    for (auto& p : peers_) {
        Peer* raw = p.get();
        p->thread = std::thread([this, raw] { io_loop(*raw); });
    }
}

void LiveNetwork::io_loop(Peer& peer) {
    std::vector<pollfd> fds;
    std::vector<std::pair<int, std::string>> writes;
    char buf[65536];
    while (!stopping_) {
        int timeout = 50;
        {
            std::lock_guard lock(world_);
            const std::int64_t t = now();
            while (!peer.timers.empty() && peer.timers.top().at <= t) {
                const auto timer = peer.timers.top();
                peer.timers.pop();
                ++stats_.events;
                peer.node->on_timer(timer.kind, timer.token);
            }
            if (!peer.timers.empty()) {
                timeout = static_cast<int>(std::clamp<std::int64_t>(peer.timers.top().at - now(), 0, 50));
            }
            for (auto& [to, data] : peer.outbox) {
                if (data.empty()) continue;
                auto it = peer.outgoing.find(to);
                if (it != peer.outgoing.end()) writes.emplace_back(it->second, std::move(data));
                data.clear();
            }
        }
        for (const auto& [fd, data] : writes) write_all(fd, data);
        writes.clear();

        fds.clear();
        fds.push_back({peer.wake_read, POLLIN, 0});
        fds.push_back({peer.listen_fd, POLLIN, 0});
        for (const auto& c : peer.incoming) fds.push_back({c.fd, POLLIN, 0});
        const int ready = ::poll(fds.data(), fds.size(), timeout);
        if (ready <= 0) continue;

        if (fds[0].revents & POLLIN) {
            while (::read(peer.wake_read, buf, sizeof buf) > 0) {
            }
        }
        if (fds[1].revents & POLLIN) {
            const int fd = ::accept4(peer.listen_fd, nullptr, nullptr, SOCK_CLOEXEC);
            if (fd >= 0) peer.incoming.push_back({fd, {}});
        }
        std::vector<std::string> lines;
        for (std::size_t i = 2; i < fds.size(); ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            auto& conn = peer.incoming[i - 2];
            const ssize_t n = ::recv(conn.fd, buf, sizeof buf, 0);
            if (n <= 0) {
                close_fd(conn.fd);
                continue;
            }
            conn.buffer.append(std::string_view(buf, static_cast<std::size_t>(n)));
            std::string line;
            while (conn.buffer.next_line(line)) lines.push_back(std::move(line));
        }
        std::erase_if(peer.incoming, [](const Peer::Conn& c) { return c.fd < 0; });
        if (lines.empty()) continue;

        std::lock_guard lock(world_);
        for (const auto& line : lines) {
            if (stopping_) break;
            try {
                const Envelope env = Envelope::from_line(line);
                ++stats_.delivered;
                ++stats_.events;
                peer.node->on_message(env);
            } catch (const Error& e) {
                peer.trace({{"type", "malformed"}, {"error", e.what()}});
            }
        }
    }
}

void LiveNetwork::at(std::int64_t at, std::function<void()> fn) {
    std::lock_guard lock(world_);
    scheduled_.push_back({std::max(at, now()), seq_++, std::move(fn)});
}

bool LiveNetwork::run_until(const std::function<bool()>& done, std::int64_t deadline) {
    using namespace std::chrono_literals;
    while (true) {
        {
            std::lock_guard lock(world_);
            while (true) {
                const std::int64_t t = now();
                auto due = std::min_element(scheduled_.begin(), scheduled_.end(), [](const auto& a, const auto& b) {
                    return a.at != b.at ? a.at < b.at : a.seq < b.seq;
                });
                if (due == scheduled_.end() || due->at > t) break;
                auto fn = std::move(due->fn);
                scheduled_.erase(due);
                fn();
            }
            if (done()) return true;
            if (now() >= deadline) return false;
        }
        std::this_thread::sleep_for(5ms);
    }
}

void LiveNetwork::shutdown() {
    if (stopping_.exchange(true)) return;
    for (auto& p : peers_) p->wake();
    for (auto& p : peers_) {
        if (p->thread.joinable()) p->thread.join();
    }
}

}  // namespace fabrec::net
