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

#include <fabrec/chain/hash.hpp>

#include <bit>
#include <cstring>

#include <sodium.h>

#include <fabrec/common/error.hpp>
#include <fabrec/common/hex.hpp>

namespace fabrec::chain {

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

std::string Hash256::hex() const { return to_hex(bytes); }

Hash256 Hash256::from_hex(std::string_view text) {
    Bytes raw = fabrec::from_hex(text);
    if (raw.size() != 32) {
        throw SerializationError("hash must be 32 bytes");
    }
    Hash256 h;
    std::memcpy(h.bytes.data(), raw.data(), 32);
    return h;
}

bool Hash256::is_zero() const noexcept {
    for (auto b : bytes) {
        if (b != 0) return false;
    }
    return true;
}

Hash256 sha256(std::span<const std::uint8_t> data) {
    Hash256 h;
    crypto_hash_sha256(h.bytes.data(), data.data(), data.size());
    return h;
}

Hash256 sha256(std::string_view data) { return sha256(as_bytes(data)); }

std::string hash_bytes(std::span<const std::uint8_t> data) { return sha256(data).hex(); }

unsigned leading_zero_bits(const Hash256& h) noexcept {
    unsigned bits = 0;
    for (auto b : h.bytes) {
        if (b == 0) {
            bits += 8;
            continue;
        }
        bits += static_cast<unsigned>(std::countl_zero(b));
        break;
    }
    return bits;
}

Sha256Stream::Sha256Stream() {
    crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()));
}

Sha256Stream& Sha256Stream::update(std::span<const std::uint8_t> data) {
    crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()), data.data(),
                              data.size());
    return *this;
}

Sha256Stream& Sha256Stream::update(std::string_view data) { return update(as_bytes(data)); }

Hash256 Sha256Stream::finish() {
    Hash256 h;
    crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()), h.bytes.data());
    return h;
}

}  // namespace fabrec::chain
