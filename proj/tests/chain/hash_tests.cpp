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

#include <catch_amalgamated.hpp>

#include <openssl/sha.h>

#include <random>

#include <fabrec/chain/hash.hpp>
#include <fabrec/common/error.hpp>
#include <fabrec/common/hex.hpp>

using namespace fabrec;
using chain::Hash256;

namespace {

Hash256 openssl_sha256(std::span<const std::uint8_t> data) {
    Hash256 h;
    SHA256(data.data(), data.size(), h.bytes.data());
    return h;
}

unsigned count_leading_zeros(const Hash256& h) {
    unsigned n = 0;
    for (std::size_t i = 0; i < 256; ++i) {
        const bool bit = (h.bytes[i / 8] >> (7 - i % 8)) & 1;
        if (bit) break;
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("sha256 known vectors") {
    CHECK(chain::sha256(std::string_view("")).hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(chain::sha256(std::string_view("abc")).hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(chain::sha256(std::string_view("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")).hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 agrees with OpenSSL on random inputs") {
    std::mt19937_64 gen(20260101);
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::uint8_t> data(gen() % 2049);
        for (auto& b : data) b = static_cast<std::uint8_t>(gen());
        const auto expected = openssl_sha256(data);
        REQUIRE(chain::sha256(data) == expected);
        REQUIRE(chain::hash_bytes(data) == expected.hex());

        chain::Sha256Stream stream;
        const std::size_t cut = data.empty() ? 0 : gen() % data.size();
        stream.update(std::span(data).first(cut)).update(std::span(data).subspan(cut));
        REQUIRE(stream.finish() == expected);
    }
}

TEST_CASE("hash hex round trip") {
    const auto h = chain::sha256(std::string_view("round trip"));
    CHECK(Hash256::from_hex(h.hex()) == h);
    CHECK(h.hex().size() == 64);
    CHECK_THROWS(Hash256::from_hex("abcd"));
    CHECK_THROWS(Hash256::from_hex(std::string(64, 'g')));
    CHECK(Hash256{}.is_zero());
    CHECK_FALSE(h.is_zero());
}

TEST_CASE("leading zero bits match a bit-by-bit count") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 2000; ++i) {
        Hash256 h;
        for (auto& b : h.bytes) b = static_cast<std::uint8_t>(gen());
        const unsigned zero_bytes = static_cast<unsigned>(gen() % 5);
        for (unsigned j = 0; j < zero_bytes; ++j) h.bytes[j] = 0;
        if (gen() % 2) h.bytes[zero_bytes] >>= gen() % 8;
        REQUIRE(chain::leading_zero_bits(h) == count_leading_zeros(h));
    }
    CHECK(chain::leading_zero_bits(Hash256{}) == 256);
}

TEST_CASE("hex helpers") {
    const Bytes raw{0x00, 0x0f, 0xa0, 0xff};
    CHECK(to_hex(raw) == "000fa0ff");
    CHECK(from_hex("000fa0ff") == raw);
    CHECK(from_hex("0x000FA0FF") == raw);
    CHECK_THROWS_AS(from_hex("abc"), SerializationError);
    CHECK_THROWS_AS(from_hex("zz"), SerializationError);
}
