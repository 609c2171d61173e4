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

#include <fabrec/consensus/poa.hpp>

#include <algorithm>
#include <set>

namespace fabrec::consensus {

PoaConfig PoaConfig::make(std::vector<chain::Address> authorities, std::int64_t block_period_ms) {
    if (authorities.empty()) {
        throw ConfigError("PoA needs at least one authority");
    }
    std::set<chain::Address> unique(authorities.begin(), authorities.end());
    if (unique.size() != authorities.size()) {
        throw ConfigError("duplicate authority address");
    }
    if (block_period_ms <= 0) {
        throw ConfigError("block_period_ms must be positive");
    }
    PoaConfig cfg;
    cfg.vote_threshold = authorities.size() / 2 + 1;
    cfg.authorities = std::move(authorities);
    cfg.block_period_ms = block_period_ms;
    return cfg;
}

bool PoaConfig::is_authority(const chain::Address& a) const noexcept {
    return std::find(authorities.begin(), authorities.end(), a) != authorities.end();
}

chain::Address poa_inturn_signer(std::uint64_t height, const PoaConfig& cfg) {
    return cfg.authorities[height % cfg.authorities.size()];
}

SealRight poa_may_seal(const chain::Address& sealer, std::uint64_t height, std::span<const chain::Address> recent_sealers,
                       const PoaConfig& cfg) {
    if (!cfg.is_authority(sealer)) {
        return SealRight::forbidden;
    }
    if (std::find(recent_sealers.begin(), recent_sealers.end(), sealer) != recent_sealers.end()) {
        return SealRight::forbidden;
    }
    return poa_inturn_signer(height, cfg) == sealer ? SealRight::in_turn : SealRight::out_of_turn;
}

chain::Vote make_vote(const chain::KeyPair& voter, const chain::Block& block) {
    return {voter.public_key(), voter.sign(block.id.bytes)};
}

VoteTally poa_collect_votes(chain::Block block, std::span<const chain::Vote> votes, const PoaConfig& cfg) {
    std::set<chain::PublicKey> seen{block.header.node_pubkey};
    std::vector<chain::Vote> accepted;
    for (const auto& vote : votes) {
        if (seen.contains(vote.voter)) continue;
        if (!cfg.is_authority(chain::Address::from_public_key(vote.voter))) continue;
        if (!chain::verify_signature(vote.voter, block.id.bytes, vote.signature)) continue;
        seen.insert(vote.voter);
        accepted.push_back(vote);
    }
    std::sort(accepted.begin(), accepted.end(), [](const auto& a, const auto& b) { return a.voter < b.voter; });

    VoteTally tally;
    tally.endorsements = cfg.is_authority(block.sealer()) ? accepted.size() + 1 : accepted.size();
    if (tally.endorsements >= cfg.vote_threshold) {
        block.votes = std::move(accepted);
        tally.sealed = std::move(block);
    }
    return tally;
}

Verdict poa_validate(const chain::Block& block, std::span<const chain::Address> recent_sealers, const PoaConfig& cfg) {
    if (block.header.nonce != 0) {
        return Verdict::fail("nonce");
    }
    const chain::Address sealer = block.sealer();
    const SealRight right = poa_may_seal(sealer, block.header.height, recent_sealers, cfg);
    if (right == SealRight::forbidden) {
        return Verdict::fail(cfg.is_authority(sealer) ? "recent-signer" : "unauthorized");
    }
    const std::uint32_t expected = right == SealRight::in_turn ? kInTurnWeight : kOutOfTurnWeight;
    if (block.header.difficulty != expected) {
        return Verdict::fail("weight");
    }
    std::set<chain::PublicKey> voters;
    for (const auto& vote : block.votes) {
        if (!cfg.is_authority(chain::Address::from_public_key(vote.voter))) {
            return Verdict::fail("voter-not-authority");
        }
        if (!voters.insert(vote.voter).second) {
            return Verdict::fail("duplicate-vote");
        }
        if (!chain::verify_signature(vote.voter, block.id.bytes, vote.signature)) {
            return Verdict::fail("vote-signature");
        }
    }
    voters.insert(block.header.node_pubkey);
    if (voters.size() < cfg.vote_threshold) {
        return Verdict::fail("threshold");
    }
    return Verdict::pass();
}

}  // namespace fabrec::consensus
