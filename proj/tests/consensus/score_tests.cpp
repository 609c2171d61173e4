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

#include <fabrec/chain/hash.hpp>
#include <fabrec/consensus/score.hpp>

using namespace fabrec;
using consensus::ConsensusMode;

namespace {

std::vector<chain::Block> chain_of(const std::vector<std::uint32_t>& difficulties) {
    std::vector<chain::Block> out{chain::make_genesis(0, chain::sha256(std::string_view("g")))};
    for (auto d : difficulties) {
        chain::Block b;
        b.header.height = out.size();
        b.header.difficulty = d;
        out.push_back(b);
    }
    return out;
}

chain::Hash256 id(std::uint8_t first) {
    chain::Hash256 h;
    h.bytes[0] = first;
    return h;
}

}  // namespace

TEST_CASE("mode names round trip") {
    CHECK(consensus::to_string(ConsensusMode::PoA) == "PoA");
    CHECK(consensus::consensus_mode_from_string("PoW") == ConsensusMode::PoW);
    CHECK_THROWS(consensus::consensus_mode_from_string("pos"));
}

TEST_CASE("PoA score sums in-turn and out-of-turn weights") {
    const auto in_turn = chain_of({2, 2, 2, 2, 2});
    const auto mixed = chain_of({2, 1, 2, 1, 2});
    CHECK(consensus::chain_score(in_turn, ConsensusMode::PoA).total_weight == 10);
    CHECK(consensus::chain_score(mixed, ConsensusMode::PoA).total_weight == 8);
    CHECK(consensus::chain_score(in_turn, ConsensusMode::PoA).height == 5);
}

TEST_CASE("PoW score is the sum of 2^difficulty") {
    const auto one_hard = chain_of({12});
    const auto three_easy = chain_of({10, 10, 10});
    CHECK(consensus::chain_score(one_hard, ConsensusMode::PoW).total_weight == 4096);
    CHECK(consensus::chain_score(three_easy, ConsensusMode::PoW).total_weight == 3072);
    const auto a = consensus::chain_score(chain_of({12, 10}), ConsensusMode::PoW);
    const auto b = consensus::chain_score(chain_of({10, 10, 10, 10}), ConsensusMode::PoW);
    CHECK(a.total_weight == 5120);
    CHECK(b.total_weight == 4096);
    CHECK(consensus::prefer_tip(a, id(9), b, id(1)));
    CHECK(consensus::chain_score(chain_of({}), ConsensusMode::PoW).total_weight == 0);
}

TEST_CASE("fork choice tie breaks") {
    const consensus::ChainScore heavy{10, 5};
    const consensus::ChainScore light{8, 6};
    const consensus::ChainScore tall{10, 6};
    CHECK(consensus::prefer_tip(heavy, id(9), light, id(1)));
    CHECK_FALSE(consensus::prefer_tip(light, id(1), heavy, id(9)));
    CHECK(consensus::prefer_tip(tall, id(9), heavy, id(1)));
    CHECK(consensus::prefer_tip(heavy, id(1), heavy, id(2)));
    CHECK_FALSE(consensus::prefer_tip(heavy, id(2), heavy, id(1)));
    CHECK_FALSE(consensus::prefer_tip(heavy, id(1), heavy, id(1)));
}
