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

#include <fabrec/contracts/state.hpp>

#include <algorithm>

namespace fabrec::contracts {

namespace {

    constexpr std::string_view kEventKinds[] = {
        "Registered",         "MachineAdded",       "HoursPurchased",     "UtilizationReported",
        "CapabilityAttested", "RelationshipOpened", "RelationshipClosed", "AssetRecorded",
    };
    constexpr std::string_view kStatuses[] = {"current", "voided", "completed"};

    chain::Value machine_value(const MachineRecord& m) {
        return {{"mname", m.mname},
                {"mac", m.mac},
                {"status", m.status},
                {"available_time", m.available_time},
                {"m_rate", m.m_rate}};
    }

}  // namespace

std::string_view to_string(EventKind kind) noexcept { return kEventKinds[static_cast<int>(kind)]; }
std::string_view to_string(RelationshipStatus s) noexcept { return kStatuses[static_cast<int>(s)]; }

RelationshipStatus relationship_status_from_string(std::string_view s) {
    for (int i = 0; i < 3; ++i) {
        if (kStatuses[i] == s) return static_cast<RelationshipStatus>(i);
    }
    throw ContractError("invalid outcome");
}

bool relationship_transition_allowed(RelationshipStatus from, RelationshipStatus to) noexcept {
    return from == RelationshipStatus::current && to != RelationshipStatus::current;
}

chain::Value HistoricalEvent::to_value() const {
    chain::Value v{{"seq", seq}, {"at_block", at_block}, {"tx_id", tx_id.hex()}, {"kind", to_string(kind)},
                   {"summary", summary}};
    if (counterparty) v["counterparty"] = counterparty->hex();
    return v;
}

chain::Value Relationship::to_value() const {
    chain::Value v{{"rel_id", rel_id.hex()}, {"party_a", party_a.hex()}, {"party_b", party_b.hex()},
                   {"terms", terms},         {"status", to_string(status)}};
    if (external_pointer) v["external_pointer"] = *external_pointer;
    return v;
}

Hash256 relationship_id(const Address& a, const Address& b, std::string_view terms, const Hash256& opening_tx) {
    const chain::Value v{{"party_a", a.hex()}, {"party_b", b.hex()}, {"terms", terms}, {"tx", opening_tx.hex()}};
    return chain::sha256(chain::canonical_serialize(v));
}

void ContractState::admit(const Address& who, const chain::PublicKey& key) {
    if (Address::from_public_key(key) != who) {
        throw ContractError("key does not match address");
    }
    if (auto it = keys_.find(who); it != keys_.end() && it->second != key) {
        throw ContractError("address already bound to another key");
    }
    keys_[who] = key;
}

std::optional<chain::PublicKey> ContractState::public_key_of(const Address& who) const {
    if (auto it = keys_.find(who); it != keys_.end()) return it->second;
    return std::nullopt;
}

bool ContractState::is_registered(const Address& who) const {
    auto it = vendors_.find(who);
    return it != vendors_.end() && it->second.is_exists;
}

const VendorRecord& ContractState::vendor(const Address& who) const {
    auto it = vendors_.find(who);
    if (it == vendors_.end() || !it->second.is_exists) {
        throw ContractError("not a vendor");
    }
    return it->second;
}

void ContractState::require_registered(const Address& who) const {
    if (!is_registered(who)) {
        throw ContractError("not registered");
    }
}

void ContractState::append_event(const Address& who, const CallContext& ctx, EventKind kind,
                                 std::optional<Address> counterparty, std::string summary) {
    auto& stream = histories_[who];
    HistoricalEvent e;
    e.seq = stream.empty() ? 1 : stream.back().seq + 1;
    e.at_block = ctx.height;
    e.tx_id = ctx.tx_id;
    e.kind = kind;
    e.counterparty = counterparty;
    e.summary = std::move(summary);
    stream.push_back(std::move(e));
}

void ContractState::grc_register_participant(const CallContext& ctx, const chain::PublicKey& key) {
    if (is_registered(ctx.caller)) {
        throw ContractError("already registered");
    }
    admit(ctx.caller, key);
    VendorRecord& v = vendors_[ctx.caller];
    v.owner = ctx.caller;
    v.is_exists = true;
    v.nom = 0;
    append_event(ctx.caller, ctx, EventKind::Registered, std::nullopt, "registered " + ctx.caller.hex());
}

void ContractState::grc_add_machine(const CallContext& ctx, MachineRecord machine) {
    auto it = vendors_.find(ctx.caller);
    if (it == vendors_.end() || !it->second.is_exists) {
        throw ContractError("not a vendor");
    }
    auto& machines = it->second.machines;
    if (std::any_of(machines.begin(), machines.end(), [&](const auto& m) { return m.mac == machine.mac; })) {
        throw ContractError("duplicate machine");
    }
    std::string summary = chain::canonical_serialize(machine_value(machine));
    machines.push_back(std::move(machine));
    it->second.nom = machines.size();
    append_event(ctx.caller, ctx, EventKind::MachineAdded, std::nullopt, std::move(summary));
}

void ContractState::grc_set_machine_status(const CallContext& ctx, std::string_view mac, bool status) {
    auto it = vendors_.find(ctx.caller);
    if (it == vendors_.end() || !it->second.is_exists) {
        throw ContractError("not a vendor");
    }
    auto& machines = it->second.machines;
    auto m = std::find_if(machines.begin(), machines.end(), [&](const auto& r) { return r.mac == mac; });
    if (m == machines.end()) {
        throw ContractError("no such machine");
    }
    m->status = status;
    chain::Value summary{{"mac", mac}, {"status", status}};
    append_event(ctx.caller, ctx, EventKind::AssetRecorded, std::nullopt, chain::canonical_serialize(summary));
}

Hash256 ContractState::grc_buy_hours(const CallContext& ctx, const Address& seller, std::string_view mac,
                                     std::uint64_t hours) {
    auto sit = vendors_.find(seller);
    if (sit == vendors_.end() || !sit->second.is_exists) {
        throw ContractError("checkSeller failed");
    }
    require_registered(ctx.caller);
    if (ctx.caller == seller) {
        throw ContractError("self purchase");
    }
    if (hours == 0) {
        throw ContractError("hours must be positive");
    }
    auto& machines = sit->second.machines;
    auto m = std::find_if(machines.begin(), machines.end(), [&](const auto& r) { return r.mac == mac; });
    if (m == machines.end()) {
        throw ContractError("no such machine");
    }
    if (!m->status) {
        throw ContractError("machine inactive");
    }
    if (hours > m->available_time / 60) {
        throw ContractError("insufficient availability");
    }
    std::string terms = "buy_hours mac=" + std::string(mac) + " hours=" + std::to_string(hours);
    const Hash256 rel_id = relationship_id(ctx.caller, seller, terms, ctx.tx_id);
    if (relationships_.contains(rel_id)) {
        throw ContractError("duplicate relationship");
    }

    m->available_time -= hours * 60;
    const chain::Value summary{{"mac", mac}, {"hours", hours}, {"rel_id", rel_id.hex()}};
    const std::string text = chain::canonical_serialize(summary);
    append_event(ctx.caller, ctx, EventKind::HoursPurchased, seller, text);
    append_event(seller, ctx, EventKind::HoursPurchased, ctx.caller, text);
    relationships_[rel_id] = Relationship{rel_id, ctx.caller, seller, std::move(terms), RelationshipStatus::current,
                                          std::nullopt};
    return rel_id;
}

MachineInfo ContractState::grc_get_machine_info(const Address& vendor_address, std::uint64_t index) const {
    const VendorRecord& v = vendor(vendor_address);
    if (index >= v.machines.size()) {
        throw ContractError("no such machine");
    }
    const MachineRecord& m = v.machines[index];
    return {m.mname, m.status, m.m_rate, m.mac};
}

std::uint64_t ContractState::grc_get_number_of_machines(const Address& vendor_address) const {
    return vendor(vendor_address).nom;
}

std::vector<HistoricalEvent> ContractState::phec_get_history(const Address& participant, std::uint64_t from_seq,
                                                             std::size_t limit) const {
    require_registered(participant);
    std::vector<HistoricalEvent> out;
    auto it = histories_.find(participant);
    if (it == histories_.end()) return out;
    for (const auto& e : it->second) {
        if (e.seq < from_seq) continue;
        if (limit != 0 && out.size() == limit) break;
        out.push_back(e);
    }
    return out;
}

void ContractState::phec_record_utilization(const CallContext& ctx, const Address& machine,
                                            const chain::MachineUtilization& u) {
    require_registered(ctx.caller);
    std::optional<Address> counterparty;
    if (machine != ctx.caller && !machine.is_zero()) counterparty = machine;
    auto record = [&](std::int64_t at, chain::MachineState state, std::uint64_t minutes) {
        const chain::Value s{{"at", at}, {"state", chain::to_string(state)}, {"duration_minutes", minutes}};
        append_event(ctx.caller, ctx, EventKind::UtilizationReported, counterparty, chain::canonical_serialize(s));
    };
    if (u.events.empty()) {
        record(ctx.timestamp, u.state, u.duration_minutes);
        return;
    }
    for (const auto& e : u.events) {
        record(e.at, e.state, e.duration_minutes);
    }
}

void ContractState::phec_record_capability(const CallContext& ctx, const Address& machine,
                                           const chain::MachineCapability& c) {
    require_registered(ctx.caller);
    std::optional<Address> counterparty;
    if (machine != ctx.caller && !machine.is_zero()) counterparty = machine;
    append_event(ctx.caller, ctx, EventKind::CapabilityAttested, counterparty,
                 chain::canonical_serialize(chain::payload_to_value(c)));
}

void ContractState::phec_record_asset(const CallContext& ctx, const Address& machine, const chain::MachineAsset& a) {
    require_registered(ctx.caller);
    std::optional<Address> counterparty;
    if (machine != ctx.caller && !machine.is_zero()) counterparty = machine;
    append_event(ctx.caller, ctx, EventKind::AssetRecorded, counterparty,
                 chain::canonical_serialize(chain::payload_to_value(a)));
}

Hash256 ContractState::prc_open(const CallContext& ctx, const Address& counterparty, std::string terms,
                                std::optional<std::string> external_pointer) {
    if (counterparty == ctx.caller) {
        throw ContractError("self relationship");
    }
    require_registered(ctx.caller);
    require_registered(counterparty);
    const Hash256 rel_id = relationship_id(ctx.caller, counterparty, terms, ctx.tx_id);
    if (relationships_.contains(rel_id)) {
        throw ContractError("duplicate relationship");
    }
    const std::string summary = chain::canonical_serialize(chain::Value{{"rel_id", rel_id.hex()}, {"terms", terms}});
    relationships_[rel_id] = Relationship{rel_id, ctx.caller, counterparty, std::move(terms),
                                          RelationshipStatus::current, std::move(external_pointer)};
    append_event(ctx.caller, ctx, EventKind::RelationshipOpened, counterparty, summary);
    append_event(counterparty, ctx, EventKind::RelationshipOpened, ctx.caller, summary);
    return rel_id;
}

void ContractState::prc_close(const CallContext& ctx, const Hash256& rel_id, RelationshipStatus outcome) {
    auto it = relationships_.find(rel_id);
    if (it == relationships_.end()) {
        throw ContractError("no such relationship");
    }
    Relationship& rel = it->second;
    if (ctx.caller != rel.party_a && ctx.caller != rel.party_b) {
        throw ContractError("not a party");
    }
    if (rel.status != RelationshipStatus::current) {
        throw ContractError("already closed");
    }
    if (!relationship_transition_allowed(rel.status, outcome)) {
        throw ContractError("invalid outcome");
    }
    rel.status = outcome;
    const std::string summary =
        chain::canonical_serialize(chain::Value{{"rel_id", rel_id.hex()}, {"status", to_string(outcome)}});
    append_event(rel.party_a, ctx, EventKind::RelationshipClosed, rel.party_b, summary);
    append_event(rel.party_b, ctx, EventKind::RelationshipClosed, rel.party_a, summary);
}

const Relationship& ContractState::relationship(const Hash256& rel_id) const {
    auto it = relationships_.find(rel_id);
    if (it == relationships_.end()) {
        throw ContractError("no such relationship");
    }
    return it->second;
}

chain::Value ContractState::to_value() const {
    chain::Value keys = chain::Value::object();
    for (const auto& [addr, key] : keys_) {
        keys[addr.hex()] = chain::key_hex(key);
    }
    chain::Value vendors = chain::Value::object();
    for (const auto& [addr, v] : vendors_) {
        chain::Value machines = chain::Value::array();
        for (const auto& m : v.machines) machines.push_back(machine_value(m));
        vendors[addr.hex()] = {{"owner", v.owner.hex()}, {"machines", std::move(machines)}, {"is_exists", v.is_exists},
                               {"nom", v.nom}};
    }
    chain::Value histories = chain::Value::object();
    for (const auto& [addr, events] : histories_) {
        chain::Value list = chain::Value::array();
        for (const auto& e : events) list.push_back(e.to_value());
        histories[addr.hex()] = std::move(list);
    }
    chain::Value relationships = chain::Value::object();
    for (const auto& [id, rel] : relationships_) {
        relationships[id.hex()] = rel.to_value();
    }
    return {{"keys", std::move(keys)},
            {"vendors", std::move(vendors)},
            {"histories", std::move(histories)},
            {"relationships", std::move(relationships)}};
}

Hash256 ContractState::root() const { return chain::sha256(chain::canonical_serialize(to_value())); }

bool may_read(const ContractState& state, const Address& reader, const Address& subject,
              std::span<const Address> regulators) {
    if (reader == subject) return true;
    if (std::find(regulators.begin(), regulators.end(), reader) != regulators.end()) return true;
    for (const auto& [id, rel] : state.relationships()) {
        if (rel.status != RelationshipStatus::current) continue;
        if ((rel.party_a == reader && rel.party_b == subject) || (rel.party_a == subject && rel.party_b == reader)) {
            return true;
        }
    }
    return false;
}

}  // namespace fabrec::contracts
