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

#include <fabrec/net/chain_view.hpp>
#include <fabrec/net/genesis.hpp>

namespace fabrec::net {

// Full acceptance pipeline for a block whose parent is in `view`:
// structure, consensus, no transaction repeated from the ancestry, contract
// replay and state-root match. `vote_check` relaxes the PoA vote threshold
// for blocks still collecting endorsements. On success the replay result is
// moved into `applied` when given.
Verdict validate_block(const ChainView& view, const GenesisConfig& genesis, const chain::Block& block, bool vote_check,
                       contracts::ApplyResult* applied);

}  // namespace fabrec::net
