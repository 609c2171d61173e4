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
#include <optional>
#include <span>
#include <vector>

#include <fabrec/chain/block.hpp>
#include <fabrec/common/error.hpp>

namespace fabrec::consensus {

inline constexpr std::uint32_t kInTurnWeight = 2;
inline constexpr std::uint32_t kOutOfTurnWeight = 1;

// Fixed authority set from genesis.
struct PoaConfig {
    std::vector<chain::Address> authorities;
    std::int64_t block_period_ms{1000};
    // floor(N/2) + 1 distinct endorsements (sealer plus voters).
    std::size_t vote_threshold{1};

    // Throws ConfigError on an empty or duplicated authority list or a
    // non-positive period.
    static PoaConfig make(std::vector<chain::Address> authorities, std::int64_t block_period_ms);

    std::size_t size() const noexcept { return authorities.size(); }
    // Number of preceding blocks whose sealers may not seal again: floor(N/2).
    std::size_t exclusion_window() const noexcept { return authorities.size() / 2; }
    bool is_authority(const chain::Address& a) const noexcept;
};

enum class SealRight { in_turn, out_of_turn, forbidden };

chain::Address poa_inturn_signer(std::uint64_t height, const PoaConfig& cfg);

// `recent_sealers` are the sealers of the last exclusion_window() blocks of
// the chain being extended.
SealRight poa_may_seal(const chain::Address& sealer, std::uint64_t height, std::span<const chain::Address> recent_sealers,
                       const PoaConfig& cfg);

chain::Vote make_vote(const chain::KeyPair& voter, const chain::Block& block);

struct VoteTally {
    // Set when the threshold is met; carries the accepted votes.
    std::optional<chain::Block> sealed;
    std::size_t endorsements{0};
};

// Attaches the valid, distinct, authority-issued votes to `block`. Votes
// with bad signatures, from non-authorities, or duplicating an earlier voter
// (or the sealer) are ignored. If the sealer plus voters stay below the
// threshold the block is abandoned (sealed is empty).
VoteTally poa_collect_votes(chain::Block block, std::span<const chain::Vote> votes, const PoaConfig& cfg);

// Consensus checks for a structurally valid block. Reasons: "nonce",
// "unauthorized", "recent-signer", "weight", "voter-not-authority",
// "duplicate-vote", "vote-signature", "threshold".
Verdict poa_validate(const chain::Block& block, std::span<const chain::Address> recent_sealers, const PoaConfig& cfg);

}  // namespace fabrec::consensus
