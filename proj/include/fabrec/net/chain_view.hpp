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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include <fabrec/chain/block.hpp>
#include <fabrec/consensus/score.hpp>
#include <fabrec/contracts/apply.hpp>

namespace fabrec::net {

struct BlockEntry {
    chain::Block block;
    std::shared_ptr<const contracts::ContractState> state;
    chain::Hash256 state_root;
    std::vector<contracts::CallReceipt> receipts;
    consensus::ChainScore score;
};

// Canonical tip movement. `removed` lists evicted blocks tip-first, `added`
// lists the new branch from the fork point upward.
struct TipChange {
    chain::Hash256 old_tip;
    chain::Hash256 new_tip;
    chain::Hash256 fork_point;
    std::vector<chain::Hash256> removed;
    std::vector<chain::Hash256> added;

    std::size_t depth() const noexcept { return removed.size(); }
};

// A node's block tree: every validated block, the chain heads, and the
// canonical chain selected by fork choice.
class ChainView {
  public:
    ChainView(const chain::Block& genesis, contracts::ContractState genesis_state, consensus::ConsensusMode mode);

    consensus::ConsensusMode mode() const noexcept { return mode_; }

    bool contains(const chain::Hash256& id) const { return blocks_.contains(id); }
    const BlockEntry* find(const chain::Hash256& id) const;
    const BlockEntry& entry(const chain::Hash256& id) const;
    const BlockEntry& genesis() const { return entry(canonical_.front()); }
    const BlockEntry& tip() const { return entry(canonical_.back()); }
    const chain::Hash256& canonical_tip() const { return canonical_.back(); }
    std::uint64_t height() const noexcept { return canonical_.size() - 1; }
    const std::vector<chain::Hash256>& canonical_chain() const noexcept { return canonical_; }
    const std::set<chain::Hash256>& tips() const noexcept { return tips_; }
    std::size_t size() const noexcept { return blocks_.size(); }

    // Canonical block at `height`, if the chain is that tall.
    const chain::Hash256* canonical_at(std::uint64_t height) const;
    bool is_canonical(const chain::Hash256& id) const;

    // Height of the canonical block containing tx_id.
    std::optional<std::uint64_t> inclusion_height(const chain::Hash256& tx_id) const;

    // True when tx_id appears in `block_id` or any of its ancestors.
    bool in_ancestry(const chain::Hash256& tx_id, const chain::Hash256& block_id) const;
    bool is_ancestor(const chain::Hash256& ancestor, const chain::Hash256& descendant) const;

    // Sealers of up to `window` blocks ending at `block_id` (genesis excluded).
    std::vector<chain::Address> recent_sealers(const chain::Hash256& block_id, std::size_t window) const;

    // Adds a fully validated block whose parent is present, then re-runs fork
    // choice. Returns the tip movement, if any.
    std::optional<TipChange> insert(chain::Block block, contracts::ApplyResult applied);

  private:
    void index_block(const chain::Block& block, std::uint64_t height, bool add);

    consensus::ConsensusMode mode_;
    std::map<chain::Hash256, BlockEntry> blocks_;
    std::set<chain::Hash256> tips_;
    std::vector<chain::Hash256> canonical_;
    std::map<chain::Hash256, std::uint64_t> canonical_txs_;
    std::map<chain::Hash256, std::vector<chain::Hash256>> tx_blocks_;
};

// Tip with maximal ChainScore; ties by greater height, then smaller id.
chain::Hash256 fork_choice(const ChainView& view);

}  // namespace fabrec::net
