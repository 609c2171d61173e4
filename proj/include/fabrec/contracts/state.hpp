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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fabrec/chain/canonical.hpp>
#include <fabrec/chain/crypto.hpp>
#include <fabrec/chain/hash.hpp>
#include <fabrec/chain/payload.hpp>
#include <fabrec/common/error.hpp>

namespace fabrec::contracts {

using chain::Address;
using chain::Hash256;

// Rejected contract call. The message is the failure note recorded in the
// block receipt ("not a vendor", "checkSeller failed", ...).
class ContractError : public Error {
  public:
    using Error::Error;
};

struct MachineRecord {
    std::string mname;
    std::string mac;
    bool status{true};
    std::uint64_t available_time{0};  // minutes
    std::uint64_t m_rate{0};          // cost per hour

    bool operator==(const MachineRecord&) const = default;
};

struct VendorRecord {
    Address owner;
    std::vector<MachineRecord> machines;
    bool is_exists{false};
    std::uint64_t nom{0};

    bool operator==(const VendorRecord&) const = default;
};

// Reply of getMachineInfo: (string, bool, uint, string).
struct MachineInfo {
    std::string mname;
    bool status{false};
    std::uint64_t m_rate{0};
    std::string mac;

    bool operator==(const MachineInfo&) const = default;
};

enum class EventKind {
    Registered,
    MachineAdded,
    HoursPurchased,
    UtilizationReported,
    CapabilityAttested,
    RelationshipOpened,
    RelationshipClosed,
    AssetRecorded,
};

std::string_view to_string(EventKind kind) noexcept;

struct HistoricalEvent {
    std::uint64_t seq{0};
    std::uint64_t at_block{0};
    Hash256 tx_id;
    EventKind kind{EventKind::Registered};
    std::optional<Address> counterparty;
    std::string summary;

    chain::Value to_value() const;
    bool operator==(const HistoricalEvent&) const = default;
};

enum class RelationshipStatus { current, voided, completed };

std::string_view to_string(RelationshipStatus s) noexcept;
RelationshipStatus relationship_status_from_string(std::string_view s);

// The only legal moves are current -> voided and current -> completed.
bool relationship_transition_allowed(RelationshipStatus from, RelationshipStatus to) noexcept;

struct Relationship {
    Hash256 rel_id;
    Address party_a;
    Address party_b;
    std::string terms;
    RelationshipStatus status{RelationshipStatus::current};
    std::optional<std::string> external_pointer;

    chain::Value to_value() const;
    bool operator==(const Relationship&) const = default;
};

// Who is calling, from which transaction, at which height.
struct CallContext {
    Address caller;
    Hash256 tx_id;
    std::uint64_t height{0};
    std::int64_t timestamp{0};
};

// Replicated state of the registrar (GRC), per-participant histories (PHEC),
// and relationships (PRC). Every mutator either succeeds or throws
// ContractError leaving the state untouched.
class ContractState {
  public:
    // Network admission: binds an address to its verification key. The key
    // must hash to the address.
    void admit(const Address& who, const chain::PublicKey& key);
    std::optional<chain::PublicKey> public_key_of(const Address& who) const;

    // GRC
    void grc_register_participant(const CallContext& ctx, const chain::PublicKey& key);
    void grc_add_machine(const CallContext& ctx, MachineRecord machine);
    void grc_set_machine_status(const CallContext& ctx, std::string_view mac, bool status);
    // Returns the id of the relationship opened between buyer and seller.
    Hash256 grc_buy_hours(const CallContext& ctx, const Address& seller, std::string_view mac, std::uint64_t hours);
    MachineInfo grc_get_machine_info(const Address& vendor, std::uint64_t index) const;
    std::uint64_t grc_get_number_of_machines(const Address& vendor) const;
    bool is_registered(const Address& who) const;
    const VendorRecord& vendor(const Address& who) const;
    const std::map<Address, VendorRecord>& vendors() const noexcept { return vendors_; }

    // PHEC
    // Events with seq >= from_seq, at most `limit` of them (0 = no limit).
    std::vector<HistoricalEvent> phec_get_history(const Address& participant, std::uint64_t from_seq,
                                                  std::size_t limit) const;
    void phec_record_utilization(const CallContext& ctx, const Address& machine, const chain::MachineUtilization& u);
    void phec_record_capability(const CallContext& ctx, const Address& machine, const chain::MachineCapability& c);
    void phec_record_asset(const CallContext& ctx, const Address& machine, const chain::MachineAsset& a);

    // PRC
    Hash256 prc_open(const CallContext& ctx, const Address& counterparty, std::string terms,
                     std::optional<std::string> external_pointer);
    void prc_close(const CallContext& ctx, const Hash256& rel_id, RelationshipStatus outcome);
    const Relationship& relationship(const Hash256& rel_id) const;
    const std::map<Hash256, Relationship>& relationships() const noexcept { return relationships_; }

    chain::Value to_value() const;
    // SHA-256 of the canonical serialization of the full state.
    Hash256 root() const;

    bool operator==(const ContractState&) const = default;

  private:
    void append_event(const Address& who, const CallContext& ctx, EventKind kind, std::optional<Address> counterparty,
                      std::string summary);
    void require_registered(const Address& who) const;

    std::map<Address, chain::PublicKey> keys_;
    std::map<Address, VendorRecord> vendors_;
    std::map<Address, std::vector<HistoricalEvent>> histories_;
    std::map<Hash256, Relationship> relationships_;
};

// rel_id = SHA-256 over (party_a, party_b, terms, opening tx id).
Hash256 relationship_id(const Address& a, const Address& b, std::string_view terms, const Hash256& opening_tx);

// Read-time policy: a participant may read another's history or
// relationships only through an open relationship, or as a regulator.
bool may_read(const ContractState& state, const Address& reader, const Address& subject,
              std::span<const Address> regulators);

}  // namespace fabrec::contracts
