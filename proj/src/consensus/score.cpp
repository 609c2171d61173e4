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

#include <fabrec/consensus/score.hpp>

#include <fabrec/common/error.hpp>

namespace fabrec::consensus {

std::string_view to_string(ConsensusMode mode) noexcept { return mode == ConsensusMode::PoW ? "PoW" : "PoA"; }

ConsensusMode consensus_mode_from_string(std::string_view s) {
    if (s == "PoW") return ConsensusMode::PoW;
    if (s == "PoA") return ConsensusMode::PoA;
    throw ConfigError("unknown consensus mode '" + std::string(s) + "'");
}

std::uint64_t block_weight(const chain::BlockHeader& header, ConsensusMode mode) {
    if (mode == ConsensusMode::PoA) {
        return header.difficulty;
    }
    if (header.difficulty > 62) {
        throw Error("PoW difficulty too large to score");
    }
    return std::uint64_t{1} << header.difficulty;
}

ChainScore chain_score(std::span<const chain::Block> chain, ConsensusMode mode) {
    ChainScore score;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        score.total_weight += block_weight(chain[i].header, mode);
    }
    score.height = chain.empty() ? 0 : chain.size() - 1;
    return score;
}

bool prefer_tip(const ChainScore& a, const chain::Hash256& a_id, const ChainScore& b, const chain::Hash256& b_id) noexcept {
    if (a.total_weight != b.total_weight) return a.total_weight > b.total_weight;
    if (a.height != b.height) return a.height > b.height;
    return a_id < b_id;
}

}  // namespace fabrec::consensus
