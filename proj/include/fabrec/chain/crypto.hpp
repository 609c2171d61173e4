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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fabrec::chain {

using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;
using KeySeed = std::array<std::uint8_t, 32>;

// Participant identity: the last 20 bytes of SHA-256(public key).
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    // "0x" followed by 40 lowercase hex characters.
    std::string hex() const;
    static Address from_hex(std::string_view text);
    static Address from_public_key(const PublicKey& key);

    bool is_zero() const noexcept;

    auto operator<=>(const Address&) const = default;
};

// Ed25519 key pair. Signing is deterministic.
class KeyPair {
  public:
    static KeyPair from_seed(const KeySeed& seed);
    // Seed = SHA-256(passphrase). Convenient for reproducible scenarios.
    static KeyPair from_passphrase(std::string_view passphrase);
    static KeyPair generate();

    const PublicKey& public_key() const noexcept { return public_key_; }
    const KeySeed& seed() const noexcept { return seed_; }
    Address address() const { return Address::from_public_key(public_key_); }

    Signature sign(std::span<const std::uint8_t> message) const;

  private:
    KeyPair() = default;

    KeySeed seed_{};
    PublicKey public_key_{};
    std::array<std::uint8_t, 64> secret_key_{};
};

bool verify_signature(const PublicKey& key, std::span<const std::uint8_t> message, const Signature& sig);

std::string key_hex(const PublicKey& key);
PublicKey public_key_from_hex(std::string_view text);
std::string signature_hex(const Signature& sig);
Signature signature_from_hex(std::string_view text);

}  // namespace fabrec::chain
