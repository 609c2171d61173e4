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

#include <string>
#include <vector>

#include <fabrec/chain/block.hpp>
#include <fabrec/contracts/state.hpp>

namespace fabrec::contracts {

// Per-transaction execution record. Failed calls are noted, not fatal.
struct CallReceipt {
    Hash256 tx_id;
    bool ok{true};
    std::string note;

    chain::Value to_value() const;
    bool operator==(const CallReceipt&) const = default;
};

struct ApplyResult {
    ContractState state;
    Hash256 state_root;
    std::vector<CallReceipt> receipts;
};

// Executes one transaction against `state`. Contract calls dispatch on
// method name:
//   grc.register            {public_key}
//   grc.add_machine         {mname, mac, status, available_time, m_rate}
//   grc.set_machine_status  {mac, status}
//   grc.buy_hours           {seller, mac, hours}
//   prc.open                {counterparty, terms[, external_pointer]}
//   prc.close               {rel_id, outcome}
//   app.bid                 {data}
// Machine data transactions are appended to the service provider's history.
CallReceipt apply_transaction(ContractState& state, const chain::Transaction& tx, std::uint64_t height);

// Applies every transaction in block order starting from `parent_state`.
ApplyResult apply_block_to_state(const ContractState& parent_state, const chain::Block& block);

// "state-root" when the computed root differs from the header.
Verdict check_state_root(const chain::Block& block, const ApplyResult& result);

}  // namespace fabrec::contracts
