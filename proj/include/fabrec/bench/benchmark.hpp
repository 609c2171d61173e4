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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fabrec/bench/stats.hpp>
#include <fabrec/sim/scenario.hpp>

namespace fabrec::bench {

class BenchmarkError : public Error {
  public:
    using Error::Error;
};

// Latency benchmark configuration: `runs` independent simulations, each
// submitting `invocations` contract calls from a client node.
struct BenchmarkSpec {
    consensus::ConsensusMode mode{consensus::ConsensusMode::PoA};
    // PoA
    std::size_t authorities{3};
    std::int64_t block_period_ms{1000};
    // PoW: hashing speed is derived so that all miners together find a
    // block every target_block_ms on average.
    std::size_t miners{2};
    unsigned difficulty_bits{10};
    std::int64_t target_block_ms{4000};

    std::size_t invocations{20};
    std::size_t runs{3};
    std::uint64_t confirm_depth{12};
    // Gap between an inclusion and the next submission (sequential mode),
    // or between submissions (concurrent mode).
    std::pair<std::int64_t, std::int64_t> gap_ms{1000, 3000};
    bool concurrent{false};
    // ContractCall payloads picked at random per invocation; "{i}" inside a
    // string becomes the invocation number.
    std::vector<chain::Value> templates;
    net::SimNetConfig network;
    std::uint64_t seed{1};

    static BenchmarkSpec defaults(consensus::ConsensusMode mode);
    // Throws ConfigError.
    void validate() const;
    double ms_per_attempt() const;
    sim::Scenario scenario(std::size_t run) const;
};

struct BenchRecord {
    std::string tx_id;
    std::string mode;
    std::int64_t submit_ms{0};
    std::int64_t included_ms{0};
    std::int64_t confirmed_ms{0};

    bool operator==(const BenchRecord&) const = default;
};

struct ModeAggregate {
    std::string mode;
    std::size_t n{0};
    double mean_inclusion_s{0.0};
    double std_inclusion_s{0.0};
    double mean_confirm_s{0.0};
    double std_confirm_s{0.0};
};

struct BenchmarkResult {
    BenchmarkSpec spec;
    std::vector<BenchRecord> records;
    ModeAggregate aggregate;
};

// Throws BenchmarkError when a run does not confirm every invocation or does
// not converge.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

// Records of one mode. Throws std::invalid_argument if fewer than two.
ModeAggregate aggregate(std::span<const BenchRecord> records, std::string_view mode);

inline constexpr std::string_view kCsvHeader = "tx_id,mode,submit_ms,included_ms,confirmed_ms";

std::string to_csv(std::span<const BenchRecord> records);
// Throws SerializationError on a malformed file.
std::vector<BenchRecord> from_csv(std::string_view text);

// Time-to-inclusion and time-to-confirmation tables, one row per mode.
std::string format_table(std::span<const ModeAggregate> rows, std::uint64_t confirm_depth);

// PoA-versus-PoW ordering for one seed.
struct OrderingCheck {
    std::uint64_t seed{0};
    ModeAggregate poa;
    ModeAggregate pow;

    bool inclusion_mean() const noexcept { return poa.mean_inclusion_s < pow.mean_inclusion_s; }
    bool inclusion_std() const noexcept { return poa.std_inclusion_s < pow.std_inclusion_s; }
    bool confirm_mean() const noexcept { return poa.mean_confirm_s < pow.mean_confirm_s; }
    bool confirm_std() const noexcept { return poa.std_confirm_s < pow.std_confirm_s; }
    bool holds() const noexcept { return inclusion_mean() && inclusion_std() && confirm_mean() && confirm_std(); }
};

// Runs the default PoA and PoW benchmarks for each seed.
std::vector<OrderingCheck> check_ordering(std::span<const std::uint64_t> seeds, const BenchmarkSpec& poa,
                                          const BenchmarkSpec& pow);

}  // namespace fabrec::bench
