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

#include <fabrec/net/chain_view.hpp>

#include <algorithm>

#include <fabrec/common/error.hpp>

namespace fabrec::net {

ChainView::ChainView(const chain::Block& genesis, contracts::ContractState genesis_state, consensus::ConsensusMode mode)
    : mode_(mode) {
    BlockEntry e;
    e.block = genesis;
    e.state_root = genesis.header.state_root;
    e.state = std::make_shared<const contracts::ContractState>(std::move(genesis_state));
    blocks_.emplace(genesis.id, std::move(e));
    tips_.insert(genesis.id);
    canonical_.push_back(genesis.id);
}

const BlockEntry* ChainView::find(const chain::Hash256& id) const {
    auto it = blocks_.find(id);
    return it == blocks_.end() ? nullptr : &it->second;
}

const BlockEntry& ChainView::entry(const chain::Hash256& id) const {
    auto it = blocks_.find(id);
    if (it == blocks_.end()) {
        throw Error("unknown block " + id.hex());
    }
    return it->second;
}

const chain::Hash256* ChainView::canonical_at(std::uint64_t height) const {
    return height < canonical_.size() ? &canonical_[height] : nullptr;
}

bool ChainView::is_canonical(const chain::Hash256& id) const {
    const BlockEntry* e = find(id);
    if (e == nullptr) return false;
    const auto* at = canonical_at(e->block.header.height);
    return at != nullptr && *at == id;
}

std::optional<std::uint64_t> ChainView::inclusion_height(const chain::Hash256& tx_id) const {
    if (auto it = canonical_txs_.find(tx_id); it != canonical_txs_.end()) return it->second;
    return std::nullopt;
}

bool ChainView::is_ancestor(const chain::Hash256& ancestor, const chain::Hash256& descendant) const {
    const BlockEntry* a = find(ancestor);
    const BlockEntry* d = find(descendant);
    if (a == nullptr || d == nullptr) return false;
    while (d->block.header.height > a->block.header.height) {
        d = find(d->block.header.prev_block);
    }
    return d->block.id == ancestor;
}

bool ChainView::in_ancestry(const chain::Hash256& tx_id, const chain::Hash256& block_id) const {
    auto it = tx_blocks_.find(tx_id);
    if (it == tx_blocks_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const chain::Hash256& holder) { return is_ancestor(holder, block_id); });
}

std::vector<chain::Address> ChainView::recent_sealers(const chain::Hash256& block_id, std::size_t window) const {
    std::vector<chain::Address> out;
    const BlockEntry* e = find(block_id);
    while (e != nullptr && out.size() < window && !e->block.is_genesis()) {
        out.push_back(e->block.sealer());
        e = find(e->block.header.prev_block);
    }
    return out;
}

void ChainView::index_block(const chain::Block& block, std::uint64_t height, bool add) {
    for (const auto& tx : block.transactions) {
        if (add) {
            canonical_txs_[tx.id] = height;
        } else {
            canonical_txs_.erase(tx.id);
        }
    }
}

std::optional<TipChange> ChainView::insert(chain::Block block, contracts::ApplyResult applied) {
    const BlockEntry& parent = entry(block.header.prev_block);
    const chain::Hash256 id = block.id;
    if (blocks_.contains(id)) return std::nullopt;

    BlockEntry e;
    e.score.total_weight = parent.score.total_weight + consensus::block_weight(block.header, mode_);
    e.score.height = parent.score.height + 1;
    e.state_root = applied.state_root;
    e.state = std::make_shared<const contracts::ContractState>(std::move(applied.state));
    e.receipts = std::move(applied.receipts);
    for (const auto& tx : block.transactions) {
        tx_blocks_[tx.id].push_back(id);
    }
    tips_.erase(block.header.prev_block);
    tips_.insert(id);
    e.block = std::move(block);
    blocks_.emplace(id, std::move(e));

    const chain::Hash256 best = fork_choice(*this);
    if (best == canonical_.back()) return std::nullopt;

    TipChange change;
    change.old_tip = canonical_.back();
    change.new_tip = best;

    // Walk the new branch down until it meets the canonical chain.
    std::vector<chain::Hash256> branch;
    const BlockEntry* cursor = &entry(best);
    while (!is_canonical(cursor->block.id)) {
        branch.push_back(cursor->block.id);
        cursor = &entry(cursor->block.header.prev_block);
    }
    change.fork_point = cursor->block.id;
    const std::uint64_t fork_height = cursor->block.header.height;

    while (canonical_.size() > fork_height + 1) {
        const chain::Hash256 gone = canonical_.back();
        index_block(entry(gone).block, 0, false);
        change.removed.push_back(gone);
        canonical_.pop_back();
    }
    std::reverse(branch.begin(), branch.end());
    for (const auto& bid : branch) {
        canonical_.push_back(bid);
        index_block(entry(bid).block, canonical_.size() - 1, true);
    }
    change.added = std::move(branch);
    return change;
}

chain::Hash256 fork_choice(const ChainView& view) {
    const chain::Hash256* best = nullptr;
    const consensus::ChainScore* best_score = nullptr;
    for (const auto& tip : view.tips()) {
        const auto& score = view.entry(tip).score;
        if (best == nullptr || consensus::prefer_tip(score, tip, *best_score, *best)) {
            best = &tip;
            best_score = &score;
        }
    }
    return *best;
}

}  // namespace fabrec::net
