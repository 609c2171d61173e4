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

#include <fabrec/chain/block.hpp>

#include <fabrec/common/error.hpp>

namespace fabrec::chain {

Value BlockHeader::to_value() const {
    return {{"prev_block", prev_block.hex()},
            {"height", height},
            {"timestamp", timestamp},
            {"tx_root", tx_root.hex()},
            {"node_pubkey", key_hex(node_pubkey)},
            {"state_root", state_root.hex()},
            {"nonce", nonce},
            {"difficulty", difficulty}};
}

BlockHeader BlockHeader::from_value(const Value& v) {
    if (!v.is_object() || v.size() != 8) {
        throw SerializationError("block header must have exactly 8 fields");
    }
    BlockHeader h;
    try {
        h.prev_block = Hash256::from_hex(v.at("prev_block").get<std::string>());
        h.height = v.at("height").get<std::uint64_t>();
        h.timestamp = v.at("timestamp").get<std::int64_t>();
        h.tx_root = Hash256::from_hex(v.at("tx_root").get<std::string>());
        h.node_pubkey = public_key_from_hex(v.at("node_pubkey").get<std::string>());
        h.state_root = Hash256::from_hex(v.at("state_root").get<std::string>());
        h.nonce = v.at("nonce").get<std::uint64_t>();
        h.difficulty = v.at("difficulty").get<std::uint32_t>();
    } catch (const Value::exception& e) {
        throw SerializationError(std::string("block header: ") + e.what());
    }
    if (h.difficulty > 256) {
        throw SerializationError("difficulty above 256");
    }
    if (h.to_value() != v) {
        throw SerializationError("block header is not in canonical form");
    }
    return h;
}

Value Block::to_value() const {
    Value txs = Value::array();
    for (const auto& tx : transactions) {
        txs.push_back(tx.to_value());
    }
    Value vote_list = Value::array();
    for (const auto& vote : votes) {
        vote_list.push_back({{"voter", key_hex(vote.voter)}, {"signature", signature_hex(vote.signature)}});
    }
    return {{"id", id.hex()},
            {"header", header.to_value()},
            {"transactions", std::move(txs)},
            {"signature", signature_hex(signature)},
            {"votes", std::move(vote_list)}};
}

Block Block::from_value(const Value& v) {
    if (!v.is_object() || v.size() != 5) {
        throw SerializationError("block must have exactly id, header, transactions, signature, votes");
    }
    Block b;
    try {
        b.id = Hash256::from_hex(v.at("id").get<std::string>());
        b.header = BlockHeader::from_value(v.at("header"));
        for (const auto& tx : v.at("transactions")) {
            b.transactions.push_back(Transaction::from_value(tx));
        }
        b.signature = signature_from_hex(v.at("signature").get<std::string>());
        for (const auto& vote : v.at("votes")) {
            if (!vote.is_object() || vote.size() != 2) throw SerializationError("malformed vote");
            b.votes.push_back({public_key_from_hex(vote.at("voter").get<std::string>()),
                               signature_from_hex(vote.at("signature").get<std::string>())});
        }
    } catch (const Value::exception& e) {
        throw SerializationError(std::string("block: ") + e.what());
    }
    return b;
}

Hash256 header_id(const BlockHeader& header) { return sha256(canonical_serialize(header.to_value())); }

Hash256 Block::compute_id() const { return header_id(header); }

Hash256 compute_tx_root(std::span<const Hash256> tx_ids) {
    Sha256Stream stream;
    for (const auto& id : tx_ids) {
        stream.update(id.bytes);
    }
    return stream.finish();
}

Hash256 compute_tx_root(std::span<const Transaction> txs) {
    Sha256Stream stream;
    for (const auto& tx : txs) {
        stream.update(tx.id.bytes);
    }
    return stream.finish();
}

Block make_genesis(std::int64_t timestamp, const Hash256& state_root) {
    Block g;
    g.header.timestamp = timestamp;
    g.header.state_root = state_root;
    g.header.tx_root = compute_tx_root(std::span<const Hash256>{});
    g.id = g.compute_id();
    return g;
}

Block make_block(const Block& parent, std::vector<Transaction> txs, const KeyPair& sealer, const Hash256& state_root,
                 std::int64_t timestamp, std::uint64_t nonce, std::uint32_t difficulty) {
    if (parent.id.is_zero()) {
        throw LinkageError("parent block has no id");
    }
    if (timestamp <= parent.header.timestamp) {
        throw LinkageError("block timestamp must exceed parent timestamp");
    }
    Block b;
    b.header.prev_block = parent.id;
    b.header.height = parent.header.height + 1;
    b.header.timestamp = timestamp;
    b.header.tx_root = compute_tx_root(txs);
    b.header.node_pubkey = sealer.public_key();
    b.header.state_root = state_root;
    b.header.nonce = nonce;
    b.header.difficulty = difficulty;
    b.transactions = std::move(txs);
    reseal(b, sealer);
    return b;
}

void reseal(Block& block, const KeyPair& sealer) {
    block.header.node_pubkey = sealer.public_key();
    block.id = block.compute_id();
    block.signature = sealer.sign(block.id.bytes);
}

}  // namespace fabrec::chain
