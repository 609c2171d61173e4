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
#include <span>
#include <string>
#include <string_view>

namespace fabrec::chain {

// 32-byte SHA-256 digest. Rendered as 64 lowercase hex characters.
struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const;
    static Hash256 from_hex(std::string_view text);

    bool is_zero() const noexcept;

    auto operator<=>(const Hash256&) const = default;
};

Hash256 sha256(std::span<const std::uint8_t> data);
Hash256 sha256(std::string_view data);

// Lowercase hex of the SHA-256 digest of `data`.
std::string hash_bytes(std::span<const std::uint8_t> data);

// Number of leading zero bits when the digest is read as a 256-bit
// big-endian integer.
unsigned leading_zero_bits(const Hash256& h) noexcept;

// Incremental SHA-256, used where a common prefix is hashed many times.
class Sha256Stream {
  public:
    Sha256Stream();
    Sha256Stream& update(std::span<const std::uint8_t> data);
    Sha256Stream& update(std::string_view data);
    Hash256 finish();

  private:
    alignas(64) std::array<unsigned char, 128> state_{};
};

}  // namespace fabrec::chain
