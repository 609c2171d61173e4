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

#include <fabrec/net/genesis.hpp>

#include <set>

namespace fabrec::net {

chain::Value GenesisConfig::to_value() const {
    chain::Value parts = chain::Value::array();
    for (const auto& p : participants) {
        parts.push_back({{"name", p.name},
                         {"public_key", chain::key_hex(p.key)},
                         {"address", chain::Address::from_public_key(p.key).hex()},
                         {"registered", p.registered}});
    }
    chain::Value regs = chain::Value::array();
    for (const auto& r : regulators) regs.push_back(r.hex());
    chain::Value cons{{"mode", consensus::to_string(mode)}};
    if (mode == consensus::ConsensusMode::PoW) {
        cons["difficulty_bits"] = pow.difficulty_bits;
        cons["max_nonce_attempts"] = pow.max_nonce_attempts;
    } else {
        chain::Value auths = chain::Value::array();
        for (const auto& a : poa.authorities) auths.push_back(a.hex());
        cons["authorities"] = std::move(auths);
        cons["block_period_ms"] = poa.block_period_ms;
    }
    return {{"consensus", std::move(cons)},
            {"participants", std::move(parts)},
            {"regulators", std::move(regs)},
            {"timestamp", timestamp}};
}

GenesisConfig GenesisConfig::from_value(const chain::Value& v) {
    GenesisConfig cfg;
    try {
        const auto& cons = v.at("consensus");
        cfg.mode = consensus::consensus_mode_from_string(cons.at("mode").get<std::string>());
        if (cfg.mode == consensus::ConsensusMode::PoW) {
            cfg.pow.difficulty_bits = cons.at("difficulty_bits").get<unsigned>();
            cfg.pow.max_nonce_attempts = cons.value("max_nonce_attempts", cfg.pow.max_nonce_attempts);
            cfg.pow.validate();
        } else {
            std::vector<chain::Address> auths;
            for (const auto& a : cons.at("authorities")) auths.push_back(chain::Address::from_hex(a.get<std::string>()));
            cfg.poa = consensus::PoaConfig::make(std::move(auths), cons.at("block_period_ms").get<std::int64_t>());
        }
        for (const auto& p : v.at("participants")) {
            GenesisParticipant gp;
            gp.name = p.at("name").get<std::string>();
            gp.key = chain::public_key_from_hex(p.at("public_key").get<std::string>());
            gp.registered = p.value("registered", true);
            if (p.contains("address") &&
                chain::Address::from_hex(p.at("address").get<std::string>()) != chain::Address::from_public_key(gp.key)) {
                throw ConfigError("participant " + gp.name + ": address does not match public key");
            }
            cfg.participants.push_back(std::move(gp));
        }
        for (const auto& r : v.value("regulators", chain::Value::array())) {
            cfg.regulators.push_back(chain::Address::from_hex(r.get<std::string>()));
        }
        cfg.timestamp = v.value("timestamp", std::int64_t{0});
    } catch (const chain::Value::exception& e) {
        throw ConfigError(std::string("genesis: ") + e.what());
    } catch (const SerializationError& e) {
        throw ConfigError(std::string("genesis: ") + e.what());
    }
    return cfg;
}

Genesis build_genesis(GenesisConfig config) {
    Genesis g;
    std::set<chain::Address> seen;
    for (const auto& p : config.participants) {
        const auto addr = chain::Address::from_public_key(p.key);
        if (!seen.insert(addr).second) {
            throw ConfigError("duplicate participant address " + addr.hex());
        }
        g.state.admit(addr, p.key);
        if (p.registered) {
            g.state.grc_register_participant({addr, chain::Hash256{}, 0, config.timestamp}, p.key);
        }
    }
    g.block = chain::make_genesis(config.timestamp, g.state.root());
    g.config = std::move(config);
    return g;
}

}  // namespace fabrec::net
