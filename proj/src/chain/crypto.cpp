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

#include <fabrec/chain/crypto.hpp>

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include <sodium.h>

#include <fabrec/chain/hash.hpp>
#include <fabrec/common/error.hpp>
#include <fabrec/common/hex.hpp>

namespace fabrec::chain {

namespace {

    void ensure_sodium() {
        static const bool ready = [] { return sodium_init() >= 0; }();
        if (!ready) {
            throw Error("libsodium initialization failed");
        }
    }

    template <std::size_t N>
    std::array<std::uint8_t, N> fixed_from_hex(std::string_view text, const char* what) {
        Bytes raw = from_hex(text);
        if (raw.size() != N) {
            throw SerializationError(std::string(what) + " has wrong length");
        }
        std::array<std::uint8_t, N> out{};
        std::copy(raw.begin(), raw.end(), out.begin());
        return out;
    }

}  // namespace

std::string Address::hex() const { return "0x" + to_hex(bytes); }

Address Address::from_hex(std::string_view text) {
    if (!text.starts_with("0x")) {
        throw SerializationError("address must start with 0x");
    }
    Address a;
    a.bytes = fixed_from_hex<20>(text, "address");
    return a;
}

Address Address::from_public_key(const PublicKey& key) {
    const Hash256 h = sha256(std::span<const std::uint8_t>(key));
    Address a;
    std::copy(h.bytes.end() - 20, h.bytes.end(), a.bytes.begin());
    return a;
}

bool Address::is_zero() const noexcept {
    return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
}

KeyPair KeyPair::from_seed(const KeySeed& seed) {
    ensure_sodium();
    KeyPair kp;
    kp.seed_ = seed;
    crypto_sign_seed_keypair(kp.public_key_.data(), kp.secret_key_.data(), seed.data());
    return kp;
}

KeyPair KeyPair::from_passphrase(std::string_view passphrase) {
    return from_seed(sha256(passphrase).bytes);
}

KeyPair KeyPair::generate() {
    ensure_sodium();
    KeySeed seed;
    randombytes_buf(seed.data(), seed.size());
    return from_seed(seed);
}

Signature KeyPair::sign(std::span<const std::uint8_t> message) const {
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key_.data());
    return sig;
}

bool verify_signature(const PublicKey& key, std::span<const std::uint8_t> message, const Signature& sig) {
    ensure_sodium();
    return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), key.data()) == 0;
}

std::string key_hex(const PublicKey& key) { return to_hex(key); }
PublicKey public_key_from_hex(std::string_view text) { return fixed_from_hex<32>(text, "public key"); }
std::string signature_hex(const Signature& sig) { return to_hex(sig); }
Signature signature_from_hex(std::string_view text) { return fixed_from_hex<64>(text, "signature"); }

}  // namespace fabrec::chain
