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

#include <fabrec/bench/benchmark.hpp>

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <fabrec/common/error.hpp>
#include <fabrec/common/rng.hpp>
#include <fabrec/sim/runner.hpp>

namespace fabrec::bench {

namespace {

    constexpr const char* kClient = "bench-client";

    chain::Value expand(const chain::Value& v, std::size_t index) {
        if (v.is_string()) {
            std::string s = v.get<std::string>();
            const std::string tag = "{i}";
            for (auto pos = s.find(tag); pos != std::string::npos; pos = s.find(tag, pos)) {
                s.replace(pos, tag.size(), std::to_string(index));
            }
            return s;
        }
        if (v.is_array()) {
            chain::Value out = chain::Value::array();
            for (const auto& e : v) out.push_back(expand(e, index));
            return out;
        }
        if (v.is_object()) {
            chain::Value out = chain::Value::object();
            for (const auto& [k, e] : v.items()) out[k] = expand(e, index);
            return out;
        }
        return v;
    }

    std::int64_t parse_int(std::string_view field, std::size_t line) {
        std::int64_t out = 0;
        const auto* end = field.data() + field.size();
        auto [ptr, ec] = std::from_chars(field.data(), end, out);
        if (ec != std::errc{} || ptr != end) {
            throw SerializationError("csv line " + std::to_string(line) + ": bad integer '" + std::string(field) + "'");
        }
        return out;
    }

}  // namespace

BenchmarkSpec BenchmarkSpec::defaults(consensus::ConsensusMode mode) {
    BenchmarkSpec s;
    s.mode = mode;
    s.templates = {chain::Value{{"method", "app.bid"}, {"args", {{"data", "bench invocation {i}"}}}}};
    return s;
}

void BenchmarkSpec::validate() const {
    if (invocations == 0 || runs == 0 || confirm_depth == 0) {
        throw ConfigError("invocations, runs and confirm_depth must be positive");
    }
    if (gap_ms.first < 0 || gap_ms.second < gap_ms.first) throw ConfigError("gap_ms must satisfy 0 <= lo <= hi");
    if (templates.empty()) throw ConfigError("at least one workload template is required");
    if (mode == consensus::ConsensusMode::PoA) {
        if (authorities == 0 || block_period_ms <= 0) throw ConfigError("PoA needs authorities and a positive period");
    } else {
        if (miners == 0 || target_block_ms <= 0) throw ConfigError("PoW needs miners and a positive target");
        consensus::PowConfig{difficulty_bits}.validate();
    }
    network.validate();
}

double BenchmarkSpec::ms_per_attempt() const {
    const double attempts = static_cast<double>(1ULL << difficulty_bits);
    return static_cast<double>(target_block_ms) * static_cast<double>(miners) / attempts;
}

sim::Scenario BenchmarkSpec::scenario(std::size_t run) const {
    validate();
    sim::Scenario s;
    s.name = std::string("bench-") + std::string(consensus::to_string(mode)) + "-run" + std::to_string(run);
    s.seed = mix_seed(seed * 1000003ULL + run);
    s.mode = mode;
    s.network = network;
    if (mode == consensus::ConsensusMode::PoA) {
        s.block_period_ms = block_period_ms;
        for (std::size_t i = 0; i < authorities; ++i) {
            const std::string name = "authority-" + std::to_string(i);
            s.nodes.push_back({name, net::NodeRole::authority, {name, std::nullopt}});
        }
    } else {
        s.difficulty_bits = difficulty_bits;
        s.ms_per_attempt = ms_per_attempt();
        for (std::size_t i = 0; i < miners; ++i) {
            const std::string name = "miner-" + std::to_string(i);
            s.nodes.push_back({name, net::NodeRole::miner, {name, std::nullopt}});
        }
    }
    s.nodes.push_back({"client", net::NodeRole::observer, {"client", std::nullopt}});
    s.participants.push_back({kClient, {kClient, std::nullopt}, true});

    Rng pick(mix_seed(s.seed ^ 0x74656d706cULL));
    std::int64_t at = 0;
    for (std::size_t i = 0; i < invocations; ++i) {
        sim::WorkloadItem item;
        item.node = "client";
        item.signer = kClient;
        item.operation = chain::Operation::ContractCall;
        const auto& tmpl = templates[static_cast<std::size_t>(pick.uniform(0, static_cast<std::int64_t>(templates.size()) - 1))];
        item.payload = expand(tmpl, i);
        if (concurrent || i == 0) {
            at += pick.uniform(gap_ms.first, gap_ms.second);
            item.at_ms = at;
        } else {
            item.after_previous = gap_ms;
        }
        s.workload.push_back(std::move(item));
    }
    s.run.confirm_depth = confirm_depth;
    s.run.max_virtual_ms = 600'000 + static_cast<std::int64_t>(invocations) * 120'000;
    s.run.settle_ms = 30'000;
    return s;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
    spec.validate();
    BenchmarkResult out;
    out.spec = spec;
    const std::string mode(consensus::to_string(spec.mode));
    for (std::size_t run = 0; run < spec.runs; ++run) {
        const auto result = sim::run_scenario(spec.scenario(run));
        if (!result.converged || !result.confirmed_all || !result.rejected.empty() ||
            result.txs.size() != spec.invocations) {
            throw BenchmarkError(mode + " run " + std::to_string(run) + " did not confirm and converge (seed " +
                                 std::to_string(spec.seed) + ")");
        }
        for (const auto& t : result.txs) {
            out.records.push_back({t.tx.hex(), mode, t.submitted_ms, *t.included_ms, *t.confirmed_ms});
        }
    }
    out.aggregate = aggregate(out.records, mode);
    return out;
}

ModeAggregate aggregate(std::span<const BenchRecord> records, std::string_view mode) {
    std::vector<double> inclusion;
    std::vector<double> confirm;
    for (const auto& r : records) {
        if (r.mode != mode) continue;
        inclusion.push_back(static_cast<double>(r.included_ms - r.submit_ms) / 1000.0);
        confirm.push_back(static_cast<double>(r.confirmed_ms - r.submit_ms) / 1000.0);
    }
    if (inclusion.size() < 2) throw std::invalid_argument("aggregate needs at least two records for " + std::string(mode));
    const auto inc = stats(inclusion);
    const auto conf = stats(confirm);
    return {std::string(mode), inc.n, inc.mean, *inc.stddev, conf.mean, *conf.stddev};
}

std::string to_csv(std::span<const BenchRecord> records) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.tx_id << ',' << r.mode << ',' << r.submit_ms << ',' << r.included_ms << ',' << r.confirmed_ms << '\n';
    }
    return out.str();
}

std::vector<BenchRecord> from_csv(std::string_view text) {
    std::vector<BenchRecord> out;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != kCsvHeader) throw SerializationError("csv: unexpected header");
            header = false;
            continue;
        }
        std::vector<std::string_view> f;
        for (std::size_t pos = 0;;) {
            const auto comma = line.find(',', pos);
            f.push_back(line.substr(pos, comma - pos));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (f.size() != 5) throw SerializationError("csv line " + std::to_string(line_no) + ": expected 5 fields");
        out.push_back({std::string(f[0]), std::string(f[1]), parse_int(f[2], line_no), parse_int(f[3], line_no),
                       parse_int(f[4], line_no)});
    }
    if (header) throw SerializationError("csv: missing header");
    return out;
}

std::string format_table(std::span<const ModeAggregate> rows, std::uint64_t confirm_depth) {
    std::ostringstream out;
    char buf[160];
    out << "Time to inclusion\n";
    std::snprintf(buf, sizeof buf, "%-6s %6s %12s %12s\n", "mode", "n", "avg_s", "std_s");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-6s %6zu %12.3f %12.3f\n", r.mode.c_str(), r.n, r.mean_inclusion_s,
                      r.std_inclusion_s);
        out << buf;
    }
    out << "\nTime to " << confirm_depth << " confirmations\n";
    std::snprintf(buf, sizeof buf, "%-6s %6s %12s %12s\n", "mode", "n", "avg_s", "std_s");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-6s %6zu %12.3f %12.3f\n", r.mode.c_str(), r.n, r.mean_confirm_s,
                      r.std_confirm_s);
        out << buf;
    }
    return out.str();
}

std::vector<OrderingCheck> check_ordering(std::span<const std::uint64_t> seeds, const BenchmarkSpec& poa,
                                          const BenchmarkSpec& pow) {
    std::vector<OrderingCheck> out;
    for (const auto seed : seeds) {
        BenchmarkSpec a = poa;
        BenchmarkSpec b = pow;
        a.seed = seed;
        b.seed = seed;
        out.push_back({seed, run_benchmark(a).aggregate, run_benchmark(b).aggregate});
    }
    return out;
}

}  // namespace fabrec::bench
