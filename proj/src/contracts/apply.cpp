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

#include <fabrec/contracts/apply.hpp>

#include <set>

namespace fabrec::contracts {

namespace {

    using chain::Value;

    void expect_args(const Value& args, std::initializer_list<std::string_view> required,
                     std::initializer_list<std::string_view> optional = {}) {
        std::set<std::string_view> allowed(required);
        allowed.insert(optional.begin(), optional.end());
        for (const auto& [key, _] : args.items()) {
            if (!allowed.contains(key)) throw ContractError("bad args: unknown field " + key);
        }
        for (auto k : required) {
            if (!args.contains(k)) throw ContractError("bad args: missing " + std::string(k));
        }
    }

    std::string text_arg(const Value& args, const char* key) {
        const auto& v = args.at(key);
        if (!v.is_string()) throw ContractError(std::string("bad args: ") + key + " must be text");
        return v.get<std::string>();
    }

    std::uint64_t count_arg(const Value& args, const char* key) {
        const auto& v = args.at(key);
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            throw ContractError(std::string("bad args: ") + key + " must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool bool_arg(const Value& args, const char* key) {
        const auto& v = args.at(key);
        if (!v.is_boolean()) throw ContractError(std::string("bad args: ") + key + " must be a boolean");
        return v.get<bool>();
    }

    Address address_arg(const Value& args, const char* key) {
        try {
            return Address::from_hex(text_arg(args, key));
        } catch (const SerializationError&) {
            throw ContractError(std::string("bad args: ") + key + " must be an address");
        }
    }

    void dispatch_call(ContractState& state, const CallContext& ctx, const chain::ContractCall& call) {
        const Value& a = call.args;
        if (call.method == "grc.register") {
            expect_args(a, {"public_key"});
            chain::PublicKey key;
            try {
                key = chain::public_key_from_hex(text_arg(a, "public_key"));
            } catch (const SerializationError&) {
                throw ContractError("bad args: public_key");
            }
            state.grc_register_participant(ctx, key);
        } else if (call.method == "grc.add_machine") {
            expect_args(a, {"mname", "mac", "status", "available_time", "m_rate"});
            state.grc_add_machine(ctx, MachineRecord{text_arg(a, "mname"), text_arg(a, "mac"), bool_arg(a, "status"),
                                                     count_arg(a, "available_time"), count_arg(a, "m_rate")});
        } else if (call.method == "grc.set_machine_status") {
            expect_args(a, {"mac", "status"});
            state.grc_set_machine_status(ctx, text_arg(a, "mac"), bool_arg(a, "status"));
        } else if (call.method == "grc.buy_hours") {
            expect_args(a, {"seller", "mac", "hours"});
            state.grc_buy_hours(ctx, address_arg(a, "seller"), text_arg(a, "mac"), count_arg(a, "hours"));
        } else if (call.method == "prc.open") {
            expect_args(a, {"counterparty", "terms"}, {"external_pointer"});
            std::optional<std::string> pointer;
            if (a.contains("external_pointer")) pointer = text_arg(a, "external_pointer");
            state.prc_open(ctx, address_arg(a, "counterparty"), text_arg(a, "terms"), std::move(pointer));
        } else if (call.method == "prc.close") {
            expect_args(a, {"rel_id", "outcome"});
            Hash256 rel_id;
            try {
                rel_id = Hash256::from_hex(text_arg(a, "rel_id"));
            } catch (const SerializationError&) {
                throw ContractError("bad args: rel_id");
            }
            state.prc_close(ctx, rel_id, relationship_status_from_string(text_arg(a, "outcome")));
        } else if (call.method == "app.bid") {
            // Bids carry opaque data for off-chain oracles; the contract only
            // checks that the bidder is a registered participant.
            expect_args(a, {"data"});
            (void)text_arg(a, "data");
            if (!state.is_registered(ctx.caller)) throw ContractError("not registered");
        } else {
            throw ContractError("unknown method " + call.method);
        }
    }

}  // namespace

Value CallReceipt::to_value() const { return {{"tx_id", tx_id.hex()}, {"ok", ok}, {"note", note}}; }

CallReceipt apply_transaction(ContractState& state, const chain::Transaction& tx, std::uint64_t height) {
    const CallContext ctx{tx.service_provider, tx.id, height, tx.timestamp};
    CallReceipt receipt{tx.id, true, {}};
    try {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, chain::ContractCall>) {
                    dispatch_call(state, ctx, p);
                } else if constexpr (std::is_same_v<T, chain::MachineUtilization>) {
                    state.phec_record_utilization(ctx, tx.machine, p);
                } else if constexpr (std::is_same_v<T, chain::MachineCapability>) {
                    state.phec_record_capability(ctx, tx.machine, p);
                } else {
                    state.phec_record_asset(ctx, tx.machine, p);
                }
            },
            tx.payload);
    } catch (const ContractError& e) {
        receipt.ok = false;
        receipt.note = e.what();
    } catch (const Value::exception& e) {
        receipt.ok = false;
        receipt.note = std::string("bad args: ") + e.what();
    }
    return receipt;
}

ApplyResult apply_block_to_state(const ContractState& parent_state, const chain::Block& block) {
    ApplyResult result{parent_state, {}, {}};
    result.receipts.reserve(block.transactions.size());
    for (const auto& tx : block.transactions) {
        result.receipts.push_back(apply_transaction(result.state, tx, block.header.height));
    }
    result.state_root = result.state.root();
    return result;
}

Verdict check_state_root(const chain::Block& block, const ApplyResult& result) {
    if (block.header.state_root != result.state_root) {
        return Verdict::fail("state-root");
    }
    return Verdict::pass();
}

}  // namespace fabrec::contracts
