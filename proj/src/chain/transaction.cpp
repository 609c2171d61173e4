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

#include <fabrec/chain/transaction.hpp>

namespace fabrec::chain {

Value Transaction::unsigned_value() const {
    return {{"version", version},
            {"transaction",
             {{"service_provider", service_provider.hex()},
              {"machine", machine.hex()},
              {"operation", to_string(operation)},
              {"timestamp", timestamp},
              {"data", {{"hash", data_hash.hex()}, {"payload", payload_to_value(payload)}}}}}};
}

Value Transaction::to_value() const {
    Value v = unsigned_value();
    v["id"] = id.hex();
    v["signature"] = signature_hex(signature);
    return v;
}

Transaction Transaction::from_value(const Value& v) {
    try {
        if (!v.is_object() || v.size() != 4) {
            throw SerializationError("transaction must have exactly id, version, transaction, signature");
        }
        const Value& body = v.at("transaction");
        if (!body.is_object() || body.size() != 5) {
            throw SerializationError("malformed transaction body");
        }
        const Value& data = body.at("data");
        if (!data.is_object() || data.size() != 2) {
            throw SerializationError("malformed transaction data");
        }
        Transaction tx;
        tx.id = Hash256::from_hex(v.at("id").get<std::string>());
        tx.version = v.at("version").get<std::uint32_t>();
        tx.signature = signature_from_hex(v.at("signature").get<std::string>());
        tx.service_provider = Address::from_hex(body.at("service_provider").get<std::string>());
        tx.machine = Address::from_hex(body.at("machine").get<std::string>());
        tx.operation = operation_from_string(body.at("operation").get<std::string>());
        if (!body.at("timestamp").is_number_integer()) {
            throw SerializationError("timestamp must be an integer");
        }
        tx.timestamp = body.at("timestamp").get<std::int64_t>();
        tx.data_hash = Hash256::from_hex(data.at("hash").get<std::string>());
        tx.payload = payload_from_value(tx.operation, data.at("payload"));
        if (tx.to_value() != v) {
            throw SerializationError("transaction is not in canonical form");
        }
        return tx;
    } catch (const Value::exception& e) {
        throw SerializationError(std::string("transaction: ") + e.what());
    } catch (const PayloadError& e) {
        throw SerializationError(std::string("transaction payload: ") + e.what());
    }
}

Hash256 Transaction::compute_id() const { return sha256(canonical_serialize(unsigned_value())); }

Hash256 Transaction::compute_data_hash() const { return sha256(canonical_serialize(payload_to_value(payload))); }

Transaction make_transaction(const KeyPair& signer, const Address& service_provider, const Address& machine,
                             Operation operation, Payload payload, std::int64_t timestamp) {
    if (operation_of(payload) != operation) {
        throw PayloadError("payload kind does not match operation " + std::string(to_string(operation)));
    }
    validate_payload(payload);
    if (signer.address() != service_provider) {
        throw AuthorizationError("signer key does not belong to " + service_provider.hex());
    }
    Transaction tx;
    tx.service_provider = service_provider;
    tx.machine = machine;
    tx.operation = operation;
    tx.timestamp = timestamp;
    tx.payload = std::move(payload);
    tx.data_hash = tx.compute_data_hash();
    tx.id = tx.compute_id();
    tx.signature = signer.sign(tx.id.bytes);
    return tx;
}

Transaction make_transaction(const KeyPair& signer, const Address& machine, Payload payload, std::int64_t timestamp) {
    const Operation op = operation_of(payload);
    return make_transaction(signer, signer.address(), machine, op, std::move(payload), timestamp);
}

Verdict verify_transaction(const Transaction& tx, const KeyLookup& registry) {
    if (tx.version != kTransactionVersion) {
        return Verdict::fail("version");
    }
    if (operation_of(tx.payload) != tx.operation) {
        return Verdict::fail("payload");
    }
    if (tx.compute_data_hash() != tx.data_hash) {
        return Verdict::fail("data-hash");
    }
    if (tx.compute_id() != tx.id) {
        return Verdict::fail("id");
    }
    const std::optional<PublicKey> key = registry ? registry(tx.service_provider) : std::nullopt;
    if (!key) {
        return Verdict::fail("unregistered signer");
    }
    if (!verify_signature(*key, tx.id.bytes, tx.signature)) {
        return Verdict::fail("signature");
    }
    return Verdict::pass();
}

}  // namespace fabrec::chain
