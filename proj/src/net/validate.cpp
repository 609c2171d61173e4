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

#include <fabrec/net/validate.hpp>

#include <set>

#include <fabrec/chain/validation.hpp>
#include <fabrec/consensus/poa.hpp>
#include <fabrec/consensus/pow.hpp>

namespace fabrec::net {

Verdict validate_block(const ChainView& view, const GenesisConfig& genesis, const chain::Block& block, bool vote_check,
                       contracts::ApplyResult* applied) {
    const BlockEntry* parent = view.find(block.header.prev_block);
    if (parent == nullptr) return Verdict::fail("unknown-parent");
    const auto state = parent->state;
    const chain::KeyLookup registry = [state](const chain::Address& who) { return state->public_key_of(who); };
    if (Verdict v = chain::validate_block_structure(block, parent->block, registry); !v.ok) return v;
    if (genesis.mode == consensus::ConsensusMode::PoW) {
        if (Verdict v = consensus::pow_validate(block, genesis.pow); !v.ok) return v;
    } else {
        consensus::PoaConfig cfg = genesis.poa;
        if (vote_check) cfg.vote_threshold = 1;
        const auto recent = view.recent_sealers(parent->block.id, cfg.exclusion_window());
        if (Verdict v = consensus::poa_validate(block, recent, cfg); !v.ok) return v;
    }
    std::set<chain::Hash256> seen;
    for (const auto& tx : block.transactions) {
        if (!seen.insert(tx.id).second || view.in_ancestry(tx.id, parent->block.id)) {
            return Verdict::fail("duplicate-tx");
        }
    }
    contracts::ApplyResult result = contracts::apply_block_to_state(*state, block);
    if (Verdict v = contracts::check_state_root(block, result); !v.ok) return v;
    if (applied != nullptr) *applied = std::move(result);
    return Verdict::pass();
}

}  // namespace fabrec::net
