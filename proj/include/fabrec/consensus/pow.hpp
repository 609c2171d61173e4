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
#include <cstdint>

#include <fabrec/chain/block.hpp>
#include <fabrec/common/error.hpp>

namespace fabrec::consensus {

inline constexpr unsigned kMaxDifficultyBits = 40;

struct PowConfig {
    unsigned difficulty_bits{0};
    std::uint64_t max_nonce_attempts{1ULL << 32};

    // Throws ConfigError.
    void validate() const;
};

struct MineOutcome {
    bool found{false};
    std::uint64_t nonce{0};
    // Hashes evaluated, including the successful one.
    std::uint64_t attempts{0};
    chain::Hash256 id;
};

// True iff `id` has at least `bits` leading zero bits.
bool meets_target(const chain::Hash256& id, unsigned bits) noexcept;

// Searches nonces rng_seed, rng_seed + 1, ... until the header id meets the
// target in header.difficulty. Returns found == false once
// max_nonce_attempts hashes have been tried or `cancel` is raised (checked
// between attempts).
MineOutcome pow_mine(const chain::BlockHeader& header, const PowConfig& cfg, std::uint64_t rng_seed,
                     const std::atomic<bool>* cancel = nullptr);

// Reasons: "target", "difficulty", "votes".
Verdict pow_validate(const chain::Block& block, const PowConfig& cfg);

}  // namespace fabrec::consensus
