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
#include <span>
#include <vector>

#include <fabrec/chain/canonical.hpp>
#include <fabrec/chain/crypto.hpp>
#include <fabrec/chain/hash.hpp>
#include <fabrec/chain/transaction.hpp>

namespace fabrec::chain {

struct BlockHeader {
    Hash256 prev_block;
    std::uint64_t height{0};
    std::int64_t timestamp{0};
    Hash256 tx_root;
    PublicKey node_pubkey{};
    Hash256 state_root;
    // PoW search value; always 0 under PoA.
    std::uint64_t nonce{0};
    // PoW: required leading zero bits of the id. PoA: 2 in-turn, 1 out-of-turn.
    std::uint32_t difficulty{0};

    Value to_value() const;
    // Throws SerializationError; only the canonical encoding is accepted.
    static BlockHeader from_value(const Value& v);

    bool operator==(const BlockHeader&) const = default;
};

struct Vote {
    PublicKey voter{};
    Signature signature{};

    bool operator==(const Vote&) const = default;
};

struct Block {
    Hash256 id;
    BlockHeader header;
    std::vector<Transaction> transactions;
    Signature signature{};
    std::vector<Vote> votes;

    Value to_value() const;
    static Block from_value(const Value& v);

    Hash256 compute_id() const;
    bool is_genesis() const noexcept { return header.height == 0 && header.prev_block.is_zero(); }
    Address sealer() const { return Address::from_public_key(header.node_pubkey); }

    bool operator==(const Block&) const = default;
};

Hash256 header_id(const BlockHeader& header);

// Flat SHA-256 over the concatenated transaction ids, in block order.
Hash256 compute_tx_root(std::span<const Hash256> tx_ids);
Hash256 compute_tx_root(std::span<const Transaction> txs);

Block make_genesis(std::int64_t timestamp, const Hash256& state_root);

// Builds and seals a child of `parent`. Votes start empty.
// Throws LinkageError when the parent has no id or the timestamp does not
// advance.
Block make_block(const Block& parent, std::vector<Transaction> txs, const KeyPair& sealer, const Hash256& state_root,
                 std::int64_t timestamp, std::uint64_t nonce, std::uint32_t difficulty);

// Recomputes id and sealer signature after a header edit (e.g. a new nonce).
void reseal(Block& block, const KeyPair& sealer);

}  // namespace fabrec::chain
