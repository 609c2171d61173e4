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

#include <fabrec/consensus/pow.hpp>

#include <charconv>
#include <string>

namespace fabrec::consensus {

void PowConfig::validate() const {
    if (difficulty_bits > kMaxDifficultyBits) {
        throw ConfigError("difficulty_bits must lie in [0, 40]");
    }
    if (max_nonce_attempts == 0) {
        throw ConfigError("max_nonce_attempts must be positive");
    }
}

bool meets_target(const chain::Hash256& id, unsigned bits) noexcept { return chain::leading_zero_bits(id) >= bits; }

MineOutcome pow_mine(const chain::BlockHeader& header, const PowConfig& cfg, std::uint64_t rng_seed,
                     const std::atomic<bool>* cancel) {
    cfg.validate();
    if (header.difficulty != cfg.difficulty_bits) {
        throw ConfigError("header difficulty does not match the PoW configuration");
    }

    // The canonical header text differs between nonces only in the digits
    // after "nonce":, so the rest is hashed once.
    chain::BlockHeader templ = header;
    templ.nonce = 0;
    const std::string text = chain::canonical_serialize(templ.to_value());
    static constexpr std::string_view kKey = "\"nonce\":0";
    const auto pos = text.find(kKey);
    const std::string_view prefix(text.data(), pos + kKey.size() - 1);
    const std::string_view suffix(text.data() + pos + kKey.size(), text.size() - pos - kKey.size());

    chain::Sha256Stream prefix_state;
    prefix_state.update(prefix);

    MineOutcome out;
    std::uint64_t nonce = rng_seed;
    char digits[24];
    while (out.attempts < cfg.max_nonce_attempts) {
        if (cancel != nullptr && cancel->load(std::memory_order_relaxed)) {
            break;
        }
        auto [end, ec] = std::to_chars(digits, digits + sizeof digits, nonce);
        chain::Sha256Stream stream = prefix_state;
        stream.update(std::string_view(digits, static_cast<std::size_t>(end - digits)));
        stream.update(suffix);
        const chain::Hash256 id = stream.finish();
        ++out.attempts;
        if (meets_target(id, cfg.difficulty_bits)) {
            out.found = true;
            out.nonce = nonce;
            out.id = id;
            return out;
        }
        ++nonce;
    }
    return out;
}

Verdict pow_validate(const chain::Block& block, const PowConfig& cfg) {
    if (!meets_target(block.id, block.header.difficulty)) {
        return Verdict::fail("target");
    }
    if (block.header.difficulty != cfg.difficulty_bits) {
        return Verdict::fail("difficulty");
    }
    if (!block.votes.empty()) {
        return Verdict::fail("votes");
    }
    return Verdict::pass();
}

}  // namespace fabrec::consensus
