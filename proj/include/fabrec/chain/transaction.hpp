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
#include <functional>
#include <optional>

#include <fabrec/chain/canonical.hpp>
#include <fabrec/chain/crypto.hpp>
#include <fabrec/chain/hash.hpp>
#include <fabrec/chain/payload.hpp>
#include <fabrec/common/error.hpp>

namespace fabrec::chain {

inline constexpr std::uint32_t kTransactionVersion = 1;

// Signed manufacturing event record. Encoded as
//   {"id", "version", "transaction": {"service_provider", "machine",
//    "operation", "timestamp", "data": {"hash", "payload"}}, "signature"}
struct Transaction {
    Hash256 id;
    std::uint32_t version{kTransactionVersion};
    Address service_provider;
    Address machine;
    Operation operation{Operation::Create};
    std::int64_t timestamp{0};
    Hash256 data_hash;
    Payload payload;
    Signature signature{};

    // Everything except id and signature.
    Value unsigned_value() const;
    Value to_value() const;
    // Throws SerializationError, also when `v` is not the canonical encoding
    // (e.g. upper-case hex).
    static Transaction from_value(const Value& v);

    Hash256 compute_id() const;
    Hash256 compute_data_hash() const;

    bool operator==(const Transaction&) const = default;
};

// Resolves a participant address to its registered verification key.
using KeyLookup = std::function<std::optional<PublicKey>(const Address&)>;

// Throws PayloadError when payload does not match `operation`, and
// AuthorizationError when the signer is not the service provider.
Transaction make_transaction(const KeyPair& signer, const Address& service_provider, const Address& machine,
                             Operation operation, Payload payload, std::int64_t timestamp);

// Operation inferred from the payload alternative.
Transaction make_transaction(const KeyPair& signer, const Address& machine, Payload payload, std::int64_t timestamp);

// Reasons: "data-hash", "id", "unregistered signer", "signature".
Verdict verify_transaction(const Transaction& tx, const KeyLookup& registry);

}  // namespace fabrec::chain
