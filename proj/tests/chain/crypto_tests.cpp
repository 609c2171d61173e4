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

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <random>

#include <fabrec/chain/crypto.hpp>
#include <fabrec/chain/hash.hpp>

using namespace fabrec;

namespace {

bool openssl_verify(const chain::PublicKey& key, std::span<const std::uint8_t> msg, const chain::Signature& sig) {
    EVP_PKEY* pkey = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.data(), key.size());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    bool ok = EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pkey) == 1 &&
              EVP_DigestVerify(ctx, sig.data(), sig.size(), msg.data(), msg.size()) == 1;
    EVP_MD_CTX_free(ctx);
    EVP_PKEY_free(pkey);
    return ok;
}

chain::PublicKey openssl_public_key(const chain::KeySeed& seed) {
    EVP_PKEY* pkey = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size());
    chain::PublicKey out{};
    std::size_t len = out.size();
    EVP_PKEY_get_raw_public_key(pkey, out.data(), &len);
    EVP_PKEY_free(pkey);
    return out;
}

std::vector<std::uint8_t> random_bytes(std::mt19937_64& gen, std::size_t max) {
    std::vector<std::uint8_t> out(gen() % (max + 1));
    for (auto& b : out) b = static_cast<std::uint8_t>(gen());
    return out;
}

}  // namespace

TEST_CASE("sign and verify across 100 random keys and messages") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 100; ++i) {
        chain::KeySeed seed;
        for (auto& b : seed) b = static_cast<std::uint8_t>(gen());
        const auto kp = chain::KeyPair::from_seed(seed);
        REQUIRE(kp.public_key() == openssl_public_key(seed));

        const auto msg = random_bytes(gen, 300);
        const auto sig = kp.sign(msg);
        REQUIRE(chain::verify_signature(kp.public_key(), msg, sig));
        REQUIRE(openssl_verify(kp.public_key(), msg, sig));
        REQUIRE(kp.sign(msg) == sig);

        auto bad_sig = sig;
        bad_sig[gen() % bad_sig.size()] ^= static_cast<std::uint8_t>(1u << (gen() % 8));
        REQUIRE_FALSE(chain::verify_signature(kp.public_key(), msg, bad_sig));

        if (!msg.empty()) {
            auto bad_msg = msg;
            bad_msg[gen() % bad_msg.size()] ^= 0x01;
            REQUIRE_FALSE(chain::verify_signature(kp.public_key(), bad_msg, sig));
        }

        const auto other = chain::KeyPair::from_passphrase("other-" + std::to_string(i));
        REQUIRE_FALSE(chain::verify_signature(other.public_key(), msg, sig));
    }
}

TEST_CASE("address is the last 20 bytes of SHA-256 of the public key") {
    for (const char* phrase : {"alpha", "bravo", "charlie", ""}) {
        const auto kp = chain::KeyPair::from_passphrase(phrase);
        std::array<std::uint8_t, 32> digest{};
        SHA256(kp.public_key().data(), kp.public_key().size(), digest.data());
        const auto addr = kp.address();
        REQUIRE(std::equal(addr.bytes.begin(), addr.bytes.end(), digest.end() - 20));
        CHECK(addr.hex().size() == 42);
        CHECK(addr.hex().starts_with("0x"));
        CHECK(chain::Address::from_hex(addr.hex()) == addr);
    }
}

TEST_CASE("passphrase keys derive their seed from SHA-256 of the phrase") {
    const auto kp = chain::KeyPair::from_passphrase("fabrec");
    std::array<std::uint8_t, 32> digest{};
    const std::string phrase = "fabrec";
    SHA256(reinterpret_cast<const unsigned char*>(phrase.data()), phrase.size(), digest.data());
    CHECK(std::equal(digest.begin(), digest.end(), kp.seed().begin()));
    CHECK(chain::KeyPair::from_passphrase("fabrec").public_key() == kp.public_key());
}

TEST_CASE("generated keys are distinct") {
    const auto a = chain::KeyPair::generate();
    const auto b = chain::KeyPair::generate();
    CHECK(a.public_key() != b.public_key());
    CHECK(chain::KeyPair::from_seed(a.seed()).public_key() == a.public_key());
}

TEST_CASE("key and signature hex encodings round trip") {
    const auto kp = chain::KeyPair::from_passphrase("hex");
    const std::vector<std::uint8_t> msg{1, 2, 3};
    const auto sig = kp.sign(msg);
    CHECK(chain::public_key_from_hex(chain::key_hex(kp.public_key())) == kp.public_key());
    CHECK(chain::signature_from_hex(chain::signature_hex(sig)) == sig);
    CHECK_THROWS(chain::public_key_from_hex("00"));
    CHECK_THROWS(chain::signature_from_hex(chain::key_hex(kp.public_key())));
    CHECK_THROWS(chain::Address::from_hex("0x1234"));
}
