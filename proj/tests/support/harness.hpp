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

#include <string>
#include <vector>

#include <fabrec/chain/transaction.hpp>
#include <fabrec/net/genesis.hpp>
#include <fabrec/net/simulator.hpp>

namespace fabrec::test {

inline chain::KeyPair key(const std::string& name) { return chain::KeyPair::from_passphrase("fabrec-test/" + name); }

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline net::GenesisConfig genesis_config(const std::vector<std::string>& participants) {
    net::GenesisConfig cfg;
    for (const auto& name : participants) cfg.participants.push_back({name, key(name).public_key(), true});
    return cfg;
}

inline net::Genesis poa_genesis(const std::vector<std::string>& authorities, const std::vector<std::string>& participants,
                                std::int64_t period_ms = 1000) {
    auto cfg = genesis_config(participants);
    cfg.mode = consensus::ConsensusMode::PoA;
    std::vector<chain::Address> auths;
    for (const auto& a : authorities) auths.push_back(key(a).address());
    cfg.poa = consensus::PoaConfig::make(std::move(auths), period_ms);
    return net::build_genesis(std::move(cfg));
}

inline net::Genesis pow_genesis(unsigned bits, const std::vector<std::string>& participants) {
    auto cfg = genesis_config(participants);
    cfg.mode = consensus::ConsensusMode::PoW;
    cfg.pow.difficulty_bits = bits;
    return net::build_genesis(std::move(cfg));
}

inline net::NodeConfig node_config(const std::string& name, net::NodeRole role, std::uint64_t seed = 0) {
    net::NodeConfig cfg(name, key(name), role);
    cfg.seed = seed;
    return cfg;
}

// A bid call signed by `signer`; `n` keeps ids distinct.
inline chain::Transaction bid(const std::string& signer, std::uint64_t n, std::int64_t timestamp = 0) {
    const auto k = key(signer);
    chain::ContractCall call{"app.bid", {{"data", "bid-" + std::to_string(n)}}};
    return chain::make_transaction(k, k.address(), call, timestamp + static_cast<std::int64_t>(n));
}

}  // namespace fabrec::test
