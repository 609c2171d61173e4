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

#include <fabrec/chain/validation.hpp>

#include <vector>

namespace fabrec::chain {

Verdict validate_block_structure(const Block& block, const Block& parent, const KeyLookup& registry) {
    if (block.header.prev_block != parent.id || parent.id.is_zero()) {
        return Verdict::fail("linkage");
    }
    if (block.header.height != parent.header.height + 1) {
        return Verdict::fail("height");
    }
    if (block.header.timestamp <= parent.header.timestamp) {
        return Verdict::fail("timestamp");
    }
    if (block.compute_id() != block.id) {
        return Verdict::fail("id");
    }
    std::vector<Hash256> recomputed;
    recomputed.reserve(block.transactions.size());
    for (const auto& tx : block.transactions) {
        recomputed.push_back(tx.compute_id());
    }
    if (compute_tx_root(recomputed) != block.header.tx_root) {
        return Verdict::fail("tx_root");
    }
    for (const auto& tx : block.transactions) {
        if (auto v = verify_transaction(tx, registry); !v) {
            return Verdict::fail("tx:" + v.reason);
        }
    }
    if (!verify_signature(block.header.node_pubkey, block.id.bytes, block.signature)) {
        return Verdict::fail("seal");
    }
    return Verdict::pass();
}

}  // namespace fabrec::chain
