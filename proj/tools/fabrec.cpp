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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <fabrec/bench/benchmark.hpp>
#include <fabrec/chain/canonical.hpp>
#include <fabrec/common/error.hpp>
#include <fabrec/common/hex.hpp>
#include <fabrec/sim/inspect.hpp>
#include <fabrec/sim/runner.hpp>

namespace {

using namespace fabrec;

struct RunArgs {
    std::string scenario;
    std::string trace;
    std::string sink_dir;
    std::optional<std::uint64_t> seed;
    bool live{false};
};

struct InspectArgs {
    std::string trace;
    std::string query;
    std::string target;
    bool json{false};
};

struct BenchArgs {
    std::string mode{"both"};
    std::size_t runs{3};
    std::size_t invocations{20};
    std::uint64_t confirm_depth{12};
    std::uint64_t seed{1};
    std::size_t check_seeds{0};
    std::string csv;
    bool concurrent{false};
    std::size_t authorities{3};
    std::int64_t period_ms{1000};
    std::size_t miners{2};
    unsigned difficulty{10};
    std::int64_t target_ms{4000};
    std::int64_t gap_lo{1000};
    std::int64_t gap_hi{3000};
    double drop_rate{0.0};
};

struct GenesisArgs {
    std::string participants;
    std::string mode{"poa"};
    std::vector<std::string> authorities;
    std::int64_t period_ms{1000};
    unsigned difficulty{10};
    std::string output;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

int cmd_run(const RunArgs& a) {
    sim::Scenario scenario = sim::Scenario::load(a.scenario);
    if (a.seed) scenario.seed = *a.seed;

    std::ofstream trace_file;
    sim::RunOptions options;
    options.live = a.live;
    if (!a.trace.empty()) {
        trace_file.open(a.trace, std::ios::binary | std::ios::trunc);
        if (!trace_file) throw ConfigError("cannot write trace " + a.trace);
        options.trace = &trace_file;
    }
    std::map<std::string, std::ofstream> sinks;
    if (!a.sink_dir.empty()) {
        std::filesystem::create_directories(a.sink_dir);
        options.device_sink = [&](const std::string& device, const std::string& line) {
            auto it = sinks.find(device);
            if (it == sinks.end()) {
                it = sinks.emplace(device, std::ofstream(std::filesystem::path(a.sink_dir) / (device + ".log"),
                                                         std::ios::trunc))
                         .first;
            }
            it->second << line << '\n' << std::flush;
        };
    }

    const sim::RunResult r = sim::run_scenario(scenario, options);
    std::printf("scenario  %s (seed %llu, %s)\n", scenario.name.c_str(), static_cast<unsigned long long>(scenario.seed),
                a.live ? "live" : "simulated");
    std::printf("height    %llu\n", static_cast<unsigned long long>(r.height));
    std::printf("tip       %s\n", r.tip.hex().c_str());
    std::printf("state     %s\n", r.state_root.hex().c_str());
    std::size_t confirmed = 0;
    for (const auto& t : r.txs) confirmed += t.confirmed_ms.has_value();
    std::printf("txs       %zu accepted, %zu confirmed, %zu rejected\n", r.txs.size(), confirmed, r.rejected.size());
    for (const auto& why : r.rejected) std::printf("  rejected %s\n", why.c_str());
    for (const auto& [name, dev] : r.devices) {
        std::printf("device    %s %s (%zu commands)\n", name.c_str(), dev.powered ? "ON" : "OFF",
                    dev.command_log.size());
    }
    std::printf("messages  %llu sent, %llu dropped\n", static_cast<unsigned long long>(r.stats.sent),
                static_cast<unsigned long long>(r.stats.dropped));
    std::printf("elapsed   %lld ms (%s clock)\n", static_cast<long long>(r.end_ms), a.live ? "wall" : "virtual");
    if (r.exit_code != sim::kExitOk) {
        std::fprintf(stderr, "error: %s\n",
                     !r.confirmed_all ? "not every transaction reached the confirmation depth"
                                      : "nodes did not converge on one tip and state root");
    }
    return r.exit_code;
}

int cmd_inspect(const InspectArgs& a) {
    const auto archive = sim::TraceArchive::load(a.trace);
    chain::Value report;
    if (a.query == "chain") {
        report = sim::inspect_chain(archive);
    } else {
        if (a.query != "relationships" && a.target.empty()) throw ConfigError(a.query + " needs a target");
        if (a.query == "block") report = sim::inspect_block(archive, a.target);
        else if (a.query == "history") report = sim::inspect_history(archive, a.target);
        else if (a.query == "machines") report = sim::inspect_machines(archive, a.target);
        else if (a.query == "relationships") report = sim::inspect_relationships(archive);
        else throw ConfigError("unknown query " + a.query);
    }
    if (a.json) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout << sim::render_report(a.query, report);
    }
    return 0;
}

bench::BenchmarkSpec bench_spec(const BenchArgs& a, consensus::ConsensusMode mode) {
    auto s = bench::BenchmarkSpec::defaults(mode);
    s.runs = a.runs;
    s.invocations = a.invocations;
    s.confirm_depth = a.confirm_depth;
    s.seed = a.seed;
    s.concurrent = a.concurrent;
    s.authorities = a.authorities;
    s.block_period_ms = a.period_ms;
    s.miners = a.miners;
    s.difficulty_bits = a.difficulty;
    s.target_block_ms = a.target_ms;
    s.gap_ms = {a.gap_lo, a.gap_hi};
    s.network.drop_rate = a.drop_rate;
    s.validate();
    return s;
}

int cmd_bench(const BenchArgs& a) {
    std::vector<consensus::ConsensusMode> modes;
    if (a.mode == "poa" || a.mode == "both") modes.push_back(consensus::ConsensusMode::PoA);
    if (a.mode == "pow" || a.mode == "both") modes.push_back(consensus::ConsensusMode::PoW);
    if (modes.empty()) throw ConfigError("--mode must be poa, pow or both");

    std::vector<bench::BenchRecord> records;
    std::vector<bench::ModeAggregate> rows;
    for (const auto mode : modes) {
        const auto spec = bench_spec(a, mode);
        if (mode == consensus::ConsensusMode::PoW) {
            std::printf("pow calibration: %u bits, %zu miners, %.4f ms per attempt (target %lld ms blocks)\n",
                        spec.difficulty_bits, spec.miners, spec.ms_per_attempt(),
                        static_cast<long long>(spec.target_block_ms));
        }
        auto result = bench::run_benchmark(spec);
        records.insert(records.end(), result.records.begin(), result.records.end());
        rows.push_back(result.aggregate);
    }
    std::printf("seed %llu, %zu runs x %zu invocations, %s submissions\n\n", static_cast<unsigned long long>(a.seed),
                a.runs, a.invocations, a.concurrent ? "concurrent" : "sequential");
    std::cout << bench::format_table(rows, a.confirm_depth);
    if (!a.csv.empty()) {
        write_file(a.csv, bench::to_csv(records));
        std::printf("\nwrote %zu records to %s\n", records.size(), a.csv.c_str());
    }

    int status = 0;
    if (a.check_seeds > 0) {
        std::vector<std::uint64_t> seeds;
        for (std::size_t i = 0; i < a.check_seeds; ++i) seeds.push_back(a.seed + i);
        const auto checks = bench::check_ordering(seeds, bench_spec(a, consensus::ConsensusMode::PoA),
                                                  bench_spec(a, consensus::ConsensusMode::PoW));
        std::printf("\nordering check (poa < pow for mean and std)\n");
        for (const auto& c : checks) {
            std::printf("seed %-6llu inclusion %s/%s  confirm %s/%s  %s\n", static_cast<unsigned long long>(c.seed),
                        c.inclusion_mean() ? "ok" : "NO", c.inclusion_std() ? "ok" : "NO",
                        c.confirm_mean() ? "ok" : "NO", c.confirm_std() ? "ok" : "NO",
                        c.holds() ? "holds" : "FLAKY: check the PoW calibration");
            if (!c.holds()) status = sim::kExitDiverged;
        }
    }
    return status;
}

int cmd_keygen(const std::optional<std::string>& passphrase) {
    const auto key = passphrase ? chain::KeyPair::from_passphrase(*passphrase) : chain::KeyPair::generate();
    const chain::Value out{{"address", key.address().hex()},
                           {"public_key", chain::key_hex(key.public_key())},
                           {"seed", to_hex(key.seed())}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

chain::PublicKey participant_key(const chain::Value& p) {
    if (p.contains("public_key")) return chain::public_key_from_hex(p.at("public_key").get<std::string>());
    if (p.contains("passphrase")) return chain::KeyPair::from_passphrase(p.at("passphrase").get<std::string>()).public_key();
    if (p.contains("seed")) {
        const Bytes raw = from_hex(p.at("seed").get<std::string>());
        chain::KeySeed seed{};
        if (raw.size() != seed.size()) throw ConfigError("key seed must be 32 bytes");
        std::copy(raw.begin(), raw.end(), seed.begin());
        return chain::KeyPair::from_seed(seed).public_key();
    }
    throw ConfigError("participant needs public_key, passphrase or seed");
}

int cmd_genesis(const GenesisArgs& a) {
    std::ifstream in(a.participants);
    if (!in) throw ConfigError("cannot open " + a.participants);
    std::stringstream buf;
    buf << in.rdbuf();
    const chain::Value list = chain::parse_value(buf.str());
    if (!list.is_array()) throw ConfigError("participants file must hold a JSON array");

    net::GenesisConfig cfg;
    for (const auto& p : list) {
        if (!p.is_object() || !p.contains("name")) throw ConfigError("each participant needs a name");
        cfg.participants.push_back({p.at("name").get<std::string>(), participant_key(p), p.value("registered", true)});
    }
    cfg.mode = consensus::consensus_mode_from_string(a.mode == "poa" ? "PoA" : a.mode == "pow" ? "PoW" : a.mode);
    if (cfg.mode == consensus::ConsensusMode::PoW) {
        cfg.pow.difficulty_bits = a.difficulty;
        cfg.pow.validate();
    } else {
        std::vector<chain::Address> auths;
        for (const auto& ref : a.authorities) {
            if (ref.starts_with("0x")) {
                auths.push_back(chain::Address::from_hex(ref));
                continue;
            }
            auto it = std::find_if(cfg.participants.begin(), cfg.participants.end(),
                                   [&](const net::GenesisParticipant& gp) { return gp.name == ref; });
            if (it == cfg.participants.end()) {
                auths.push_back(chain::Address::from_public_key(chain::public_key_from_hex(ref)));
            } else {
                auths.push_back(chain::Address::from_public_key(it->key));
            }
        }
        cfg.poa = consensus::PoaConfig::make(std::move(auths), a.period_ms);
    }
    const net::Genesis g = net::build_genesis(cfg);
    const chain::Value out{{"config", g.config.to_value()},
                           {"block", g.block.to_value()},
                           {"state_root", g.state.root().hex()}};
    if (a.output.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        write_file(a.output, out.dump(2) + "\n");
        std::printf("genesis %s written to %s\n", g.block.id.hex().c_str(), a.output.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FabRec permissioned manufacturing ledger: simulator, inspector and benchmark"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Execute a scenario and write its trace");
    run_cmd->add_option("scenario", run.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--trace", run.trace, "Trace output (JSON lines)");
    run_cmd->add_option("--sink-dir", run.sink_dir, "Directory for device sink logs");
    run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
    run_cmd->add_flag("--live", run.live, "Run nodes over loopback TCP on the wall clock");

    InspectArgs inspect;
    auto* inspect_cmd = app.add_subcommand("inspect", "Query the chain recorded in a trace");
    inspect_cmd->add_option("trace", inspect.trace, "Trace file")->required()->check(CLI::ExistingFile);
    inspect_cmd->add_option("query", inspect.query, "chain | block | history | machines | relationships")
        ->required()
        ->check(CLI::IsMember({"chain", "block", "history", "machines", "relationships"}));
    inspect_cmd->add_option("target", inspect.target, "Block id, address or participant name");
    inspect_cmd->add_flag("--json", inspect.json, "Machine-readable output");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Compare PoA and PoW transaction latency");
    bench_cmd->add_option("--mode", bench.mode, "poa | pow | both")->check(CLI::IsMember({"poa", "pow", "both"}));
    bench_cmd->add_option("--runs", bench.runs, "Runs per mode");
    bench_cmd->add_option("--invocations", bench.invocations, "Contract calls per run");
    bench_cmd->add_option("--confirm-depth", bench.confirm_depth, "Confirmations to wait for");
    bench_cmd->add_option("--seed", bench.seed, "Base seed");
    bench_cmd->add_option("--check-seeds", bench.check_seeds, "Verify the ordering over this many seeds");
    bench_cmd->add_option("--csv", bench.csv, "Raw per-transaction CSV output");
    bench_cmd->add_flag("--concurrent", bench.concurrent, "Submit on a fixed schedule instead of after inclusion");
    bench_cmd->add_option("--authorities", bench.authorities, "PoA authority count");
    bench_cmd->add_option("--period-ms", bench.period_ms, "PoA block period");
    bench_cmd->add_option("--miners", bench.miners, "PoW miner count");
    bench_cmd->add_option("--difficulty", bench.difficulty, "PoW difficulty bits");
    bench_cmd->add_option("--target-block-ms", bench.target_ms, "PoW mean block interval to calibrate for");
    bench_cmd->add_option("--gap-min-ms", bench.gap_lo, "Minimum pause between submissions");
    bench_cmd->add_option("--gap-max-ms", bench.gap_hi, "Maximum pause between submissions");
    bench_cmd->add_option("--drop-rate", bench.drop_rate, "Simulated message loss");

    std::optional<std::string> passphrase;
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair and address");
    keygen_cmd->add_option("--passphrase", passphrase, "Derive the key from a passphrase");

    GenesisArgs genesis;
    auto* genesis_cmd = app.add_subcommand("genesis", "Build a genesis file from a participant list");
    genesis_cmd->add_option("participants", genesis.participants, "JSON array of participants")
        ->required()
        ->check(CLI::ExistingFile);
    genesis_cmd->add_option("--mode", genesis.mode, "poa | pow")->check(CLI::IsMember({"poa", "pow"}));
    genesis_cmd->add_option("--authority", genesis.authorities, "Authority: participant name, address or key");
    genesis_cmd->add_option("--period-ms", genesis.period_ms, "PoA block period");
    genesis_cmd->add_option("--difficulty", genesis.difficulty, "PoW difficulty bits");
    genesis_cmd->add_option("--output", genesis.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : sim::kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*inspect_cmd) return cmd_inspect(inspect);
        if (*bench_cmd) return cmd_bench(bench);
        if (*keygen_cmd) return cmd_keygen(passphrase);
        if (*genesis_cmd) return cmd_genesis(genesis);
    } catch (const sim::InspectError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return sim::kExitConfig;
    } catch (const bench::BenchmarkError& e) {
        std::fprintf(stderr, "benchmark aborted: %s\n", e.what());
        return sim::kExitDiverged;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return sim::kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return sim::kExitConfig;
    }
    return 0;
}
