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

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>

#include <fabrec/chain/block.hpp>

namespace fabrec::consensus {

enum class ConsensusMode { PoW, PoA };

std::string_view to_string(ConsensusMode mode) noexcept;
ConsensusMode consensus_mode_from_string(std::string_view s);

struct ChainScore {
    // PoW: sum of 2^difficulty. PoA: sum of in-turn/out-of-turn weights.
    std::uint64_t total_weight{0};
    std::uint64_t height{0};

    bool operator==(const ChainScore&) const = default;
};

// Fork-choice contribution of one non-genesis block.
std::uint64_t block_weight(const chain::BlockHeader& header, ConsensusMode mode);

// `chain` starts at genesis; genesis carries no weight.
ChainScore chain_score(std::span<const chain::Block> chain, ConsensusMode mode);

// Fork-choice order: larger weight, then greater height, then the
// lexicographically smaller block id.
bool prefer_tip(const ChainScore& a, const chain::Hash256& a_id, const ChainScore& b, const chain::Hash256& b_id) noexcept;

}  // namespace fabrec::consensus
