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

#include <catch_amalgamated.hpp>

#include <algorithm>

#include <fabrec/chain/hash.hpp>
#include <fabrec/common/rng.hpp>
#include <fabrec/net/chain_view.hpp>

#include <support/harness.hpp>

using namespace fabrec;

namespace {

struct Tree {
    chain::Block genesis = chain::make_genesis(0, chain::sha256(std::string_view("root")));
    std::vector<chain::Block> blocks;

    const chain::Block& add(const chain::Block& parent, std::uint32_t difficulty, std::uint64_t salt) {
        chain::Block b;
        b.header.prev_block = parent.id;
        b.header.height = parent.header.height + 1;
        b.header.timestamp = parent.header.timestamp + 1;
        b.header.difficulty = difficulty;
        b.header.nonce = salt;
        b.id = b.compute_id();
        blocks.push_back(b);
        return blocks.back();
    }

    const chain::Block& by_id(const chain::Hash256& id) const {
        if (id == genesis.id) return genesis;
        return *std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) { return b.id == id; });
    }

    // Scores every leaf by walking to genesis and picks the best one.
    chain::Hash256 brute_force_tip(consensus::ConsensusMode mode) const {
        std::set<chain::Hash256> parents;
        for (const auto& b : blocks) parents.insert(b.header.prev_block);
        chain::Hash256 best = genesis.id;
        std::uint64_t best_weight = 0;
        std::uint64_t best_height = 0;
        for (const auto& b : blocks) {
            if (parents.contains(b.id)) continue;
            std::uint64_t weight = 0;
            for (const chain::Block* cur = &b; !cur->is_genesis(); cur = &by_id(cur->header.prev_block)) {
                weight += mode == consensus::ConsensusMode::PoW ? (1ULL << cur->header.difficulty) : cur->header.difficulty;
            }
            const bool better = weight > best_weight || (weight == best_weight && b.header.height > best_height) ||
                                (weight == best_weight && b.header.height == best_height && b.id < best);
            if (better) {
                best = b.id;
                best_weight = weight;
                best_height = b.header.height;
            }
        }
        return best;
    }
};

contracts::ApplyResult no_op() {
    contracts::ContractState s;
    return {s, s.root(), {}};
}

}  // namespace

TEST_CASE("a single chain is its own head") {
    Tree t;
    net::ChainView view(t.genesis, {}, consensus::ConsensusMode::PoA);
    CHECK(view.canonical_tip() == t.genesis.id);
    CHECK(view.height() == 0);
    const chain::Block* parent = &t.genesis;
    for (int i = 0; i < 5; ++i) {
        const auto& b = t.add(*parent, 2, 0);
        const auto change = view.insert(b, no_op());
        REQUIRE(change);
        CHECK(change->depth() == 0);
        CHECK(change->added == std::vector<chain::Hash256>{b.id});
        parent = &t.blocks.back();
    }
    CHECK(view.canonical_tip() == parent->id);
    CHECK(view.height() == 5);
    CHECK(net::fork_choice(view) == parent->id);
    CHECK(view.tips().size() == 1);
}

TEST_CASE("PoW fork resolution follows accumulated work") {
    Tree t;
    net::ChainView view(t.genesis, {}, consensus::ConsensusMode::PoW);
    // Branch b: four difficulty-10 blocks.
    const chain::Block* p = &t.genesis;
    std::vector<chain::Hash256> b_branch;
    for (int i = 0; i < 4; ++i) {
        t.blocks.reserve(16);
        p = &t.add(*p, 10, 100 + i);
        b_branch.push_back(p->id);
        view.insert(*p, no_op());
    }
    CHECK(view.canonical_tip() == b_branch.back());

    // Branch a: 12 then 10, 5120 > 4096.
    const auto& a1 = t.add(t.genesis, 12, 1);
    CHECK_FALSE(view.insert(a1, no_op()));
    const auto a1_id = a1.id;
    const auto& a2 = t.add(t.by_id(a1_id), 10, 2);
    const auto change = view.insert(a2, no_op());
    REQUIRE(change);
    CHECK(view.canonical_tip() == a2.id);
    CHECK(change->depth() == 4);
    CHECK(change->fork_point == t.genesis.id);
    CHECK(change->added == std::vector<chain::Hash256>{a1_id, a2.id});
    std::vector<chain::Hash256> removed(b_branch.rbegin(), b_branch.rend());
    CHECK(change->removed == removed);
    CHECK(view.tip().score.total_weight == 5120);
    CHECK(t.brute_force_tip(consensus::ConsensusMode::PoW) == view.canonical_tip());
}

TEST_CASE("fork choice matches a brute-force scorer on random trees") {
    for (auto mode : {consensus::ConsensusMode::PoW, consensus::ConsensusMode::PoA}) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            Rng rng(seed);
            Tree t;
            t.blocks.reserve(64);
            std::vector<chain::Hash256> pool{t.genesis.id};
            const auto n = rng.uniform(1, 40);
            for (int i = 0; i < n; ++i) {
                const auto& parent = t.by_id(pool[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(pool.size()) - 1))]);
                const auto d = mode == consensus::ConsensusMode::PoW ? static_cast<std::uint32_t>(rng.uniform(0, 4))
                                                                     : static_cast<std::uint32_t>(rng.uniform(1, 2));
                pool.push_back(t.add(parent, d, static_cast<std::uint64_t>(i)).id);
            }

            // Two insertion orders: creation order, and a shuffled order
            // that still respects parent-before-child.
            net::ChainView first(t.genesis, {}, mode);
            for (const auto& b : t.blocks) first.insert(b, no_op());
            std::vector<std::size_t> order(t.blocks.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            for (std::size_t i = order.size(); i > 1; --i) {
                std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
            }
            net::ChainView second(t.genesis, {}, mode);
            std::vector<bool> done(t.blocks.size(), false);
            for (std::size_t inserted = 0; inserted < t.blocks.size();) {
                for (auto i : order) {
                    if (done[i] || !second.contains(t.blocks[i].header.prev_block)) continue;
                    second.insert(t.blocks[i], no_op());
                    done[i] = true;
                    ++inserted;
                }
            }
            const auto expected = t.brute_force_tip(mode);
            INFO(consensus::to_string(mode) << " seed " << seed);
            CHECK(first.canonical_tip() == expected);
            CHECK(second.canonical_tip() == expected);
            CHECK(net::fork_choice(first) == expected);

            // The canonical chain is the ancestry of the tip.
            const auto& chain_ids = first.canonical_chain();
            CHECK(chain_ids.front() == t.genesis.id);
            for (std::size_t h = 1; h < chain_ids.size(); ++h) {
                CHECK(first.entry(chain_ids[h]).block.header.prev_block == chain_ids[h - 1]);
                CHECK(first.is_canonical(chain_ids[h]));
            }
        }
    }
}

TEST_CASE("transaction lookups follow the canonical chain") {
    const auto g = test::poa_genesis({"a0"}, {"alice"});
    net::ChainView view(g.block, g.state, consensus::ConsensusMode::PoA);
    const auto tx = test::bid("alice", 1);
    const auto signer = test::key("a0");
    const auto b1 = chain::make_block(g.block, {tx}, signer, g.state.root(), 1000, 0, 2);
    const auto b2 = chain::make_block(b1, {}, signer, g.state.root(), 2000, 0, 2);
    view.insert(b1, no_op());
    view.insert(b2, no_op());
    CHECK(view.inclusion_height(tx.id) == 1u);
    CHECK(view.in_ancestry(tx.id, b2.id));
    CHECK_FALSE(view.in_ancestry(tx.id, g.block.id));
    CHECK(view.is_ancestor(b1.id, b2.id));
    CHECK_FALSE(view.is_ancestor(b2.id, b1.id));
    CHECK(view.recent_sealers(b2.id, 1) == std::vector<chain::Address>{signer.address()});
    CHECK(view.recent_sealers(b2.id, 5).size() == 2);
    CHECK(view.recent_sealers(g.block.id, 3).empty());
    CHECK(*view.canonical_at(2) == b2.id);
    CHECK(view.canonical_at(3) == nullptr);

    // A heavier sibling of b1 evicts the transaction.
    const auto other = chain::make_block(g.block, {}, test::key("x"), g.state.root(), 1000, 0, 5);
    const auto other2 = chain::make_block(other, {}, test::key("x"), g.state.root(), 1500, 0, 5);
    view.insert(other, no_op());
    view.insert(other2, no_op());
    CHECK(view.canonical_tip() == other2.id);
    CHECK_FALSE(view.inclusion_height(tx.id));
    CHECK(view.in_ancestry(tx.id, b2.id));
    CHECK(view.tips().size() == 2);
}
