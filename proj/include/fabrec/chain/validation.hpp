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

#include <fabrec/chain/block.hpp>
#include <fabrec/chain/transaction.hpp>
#include <fabrec/common/error.hpp>

namespace fabrec::chain {

// Consensus-independent checks of `block` against its parent, in order:
//   "linkage"    prev_block differs from parent id
//   "height"     height is not parent height + 1
//   "timestamp"  timestamp does not advance
//   "id"         stored id does not match the header
//   "tx_root"    header root differs from the root over recomputed tx ids
//   "tx:<why>"   a transaction fails verify_transaction
//   "seal"       sealer signature does not verify
Verdict validate_block_structure(const Block& block, const Block& parent, const KeyLookup& registry);

}  // namespace fabrec::chain
