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

#include <fabrec/sim/inspect.hpp>

#include <fstream>
#include <sstream>

#include <fabrec/chain/canonical.hpp>
#include <fabrec/net/validate.hpp>

namespace fabrec::sim {

namespace {

    chain::Value block_summary(const net::BlockEntry& e) {
        return {{"id", e.block.id.hex()},
                {"height", e.block.header.height},
                {"timestamp", e.block.header.timestamp},
                {"sealer", e.block.sealer().hex()},
                {"difficulty", e.block.header.difficulty},
                {"transactions", e.block.transactions.size()},
                {"votes", e.block.votes.size()},
                {"state_root", e.state_root.hex()}};
    }

    std::string pad(std::string s, std::size_t width) {
        if (s.size() < width) s.append(width - s.size(), ' ');
        return s;
    }

    std::string str(const chain::Value& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

TraceArchive TraceArchive::parse(std::istream& in) {
    TraceArchive a;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        chain::Value rec;
        try {
            rec = chain::parse_value(line);
        } catch (const SerializationError& e) {
            throw SerializationError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
        ++a.records_;
        const std::string type = rec.value("type", "");
        if (type == "scenario") {
            if (a.view_) throw ConfigError("trace line " + std::to_string(line_no) + ": second scenario header");
            a.header_ = rec;
            a.genesis_ = net::GenesisConfig::from_value(rec.at("genesis").at("config"));
            net::Genesis g = net::build_genesis(a.genesis_);
            if (g.block.id.hex() != rec.at("genesis").at("block").at("id").get<std::string>()) {
                throw ConfigError("trace genesis does not rebuild to the recorded block");
            }
            a.view_ = std::make_unique<net::ChainView>(g.block, std::move(g.state), a.genesis_.mode);
            const chain::Value parts = rec.value("participants", chain::Value::object());
            for (const auto& [name, addr] : parts.items()) {
                a.names_.emplace(name, chain::Address::from_hex(addr.get<std::string>()));
            }
            const chain::Value nodes = rec.value("nodes", chain::Value::array());
            for (const auto& n : nodes) {
                a.names_.emplace(n.at("name").get<std::string>(),
                                 chain::Address::from_hex(n.at("address").get<std::string>()));
            }
        } else if (type == "sealed") {
            if (!a.view_) throw ConfigError("trace line " + std::to_string(line_no) + ": block before header");
            const chain::Block block = chain::Block::from_value(rec.at("block"));
            if (a.view_->contains(block.id)) continue;
            contracts::ApplyResult applied;
            const Verdict v = net::validate_block(*a.view_, a.genesis_, block, false, &applied);
            if (!v.ok) {
                a.rejected_.push_back(block.id.hex() + ": " + v.reason);
                continue;
            }
            a.view_->insert(block, std::move(applied));
        } else if (type == "summary") {
            a.summary_ = rec;
        }
    }
    if (!a.view_) throw ConfigError("trace has no scenario header");
    return a;
}

TraceArchive TraceArchive::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace " + path);
    return parse(in);
}

const net::BlockEntry& TraceArchive::head() const {
    if (summary_ && summary_->contains("tip")) {
        const auto* e = view_->find(chain::Hash256::from_hex(summary_->at("tip").get<std::string>()));
        if (e != nullptr) return *e;
    }
    return view_->tip();
}

std::vector<chain::Hash256> TraceArchive::head_chain() const {
    std::vector<chain::Hash256> out;
    for (const auto* e = &head();; e = &view_->entry(e->block.header.prev_block)) {
        out.push_back(e->block.id);
        if (e->block.is_genesis()) break;
    }
    return {out.rbegin(), out.rend()};
}

chain::Address TraceArchive::resolve(std::string_view who) const {
    if (who.starts_with("0x")) {
        try {
            return chain::Address::from_hex(who);
        } catch (const Error&) {
            throw InspectError("not found");
        }
    }
    if (who.starts_with('@')) who.remove_prefix(1);
    auto it = names_.find(std::string(who));
    if (it == names_.end()) throw InspectError("not found");
    return it->second;
}

const net::BlockEntry& TraceArchive::block(std::string_view id) const {
    if (id.size() == 64) {
        try {
            if (const auto* e = view_->find(chain::Hash256::from_hex(id))) return *e;
        } catch (const Error&) {
        }
        throw InspectError("not found");
    }
    if (id.size() < 8) throw InspectError("not found");
    const net::BlockEntry* match = nullptr;
    for (const auto& hash : head_chain()) {
        if (hash.hex().starts_with(id)) {
            if (match != nullptr) throw InspectError("not found");
            match = &view_->entry(hash);
        }
    }
    if (match == nullptr) throw InspectError("not found");
    return *match;
}

chain::Value inspect_chain(const TraceArchive& archive) {
    const auto& view = archive.view();
    const auto& head = archive.head();
    chain::Value blocks = chain::Value::array();
    for (const auto& id : archive.head_chain()) blocks.push_back(block_summary(view.entry(id)));
    chain::Value heads = chain::Value::array();
    for (const auto& t : view.tips()) {
        const auto& e = view.entry(t);
        heads.push_back({{"id", t.hex()}, {"height", e.block.header.height}, {"canonical", t == head.block.id}});
    }
    chain::Value rejected = chain::Value::array();
    for (const auto& r : archive.rejected()) rejected.push_back(r);
    return {{"mode", consensus::to_string(archive.genesis_config().mode)},
            {"tip", head.block.id.hex()},
            {"height", head.block.header.height},
            {"state_root", head.state_root.hex()},
            {"known_blocks", view.size()},
            {"heads", std::move(heads)},
            {"rejected", std::move(rejected)},
            {"blocks", std::move(blocks)}};
}

chain::Value inspect_block(const TraceArchive& archive, std::string_view id) {
    const auto& e = archive.block(id);
    chain::Value receipts = chain::Value::array();
    for (const auto& r : e.receipts) receipts.push_back(r.to_value());
    const auto chain = archive.head_chain();
    const bool canonical = e.block.header.height < chain.size() && chain[e.block.header.height] == e.block.id;
    chain::Value votes = chain::Value::array();
    for (const auto& v : e.block.votes) votes.push_back(chain::Address::from_public_key(v.voter).hex());
    return {{"block", e.block.to_value()},
            {"sealer", e.block.sealer().hex()},
            {"voters", std::move(votes)},
            {"state_root", e.state_root.hex()},
            {"canonical", canonical},
            {"receipts", std::move(receipts)}};
}

chain::Value inspect_history(const TraceArchive& archive, std::string_view who) {
    const chain::Address addr = archive.resolve(who);
    const auto& state = *archive.head().state;
    if (!state.is_registered(addr)) throw InspectError("not found");
    chain::Value events = chain::Value::array();
    for (const auto& e : state.phec_get_history(addr, 0, 0)) events.push_back(e.to_value());
    return {{"participant", addr.hex()}, {"events", std::move(events)}};
}

chain::Value inspect_machines(const TraceArchive& archive, std::string_view who) {
    const chain::Address addr = archive.resolve(who);
    const auto& state = *archive.head().state;
    const contracts::VendorRecord* vendor = nullptr;
    try {
        vendor = &state.vendor(addr);
    } catch (const contracts::ContractError&) {
        throw InspectError("not a vendor");
    }
    chain::Value machines = chain::Value::array();
    for (const auto& m : vendor->machines) {
        machines.push_back({{"mname", m.mname},
                            {"mac", m.mac},
                            {"status", m.status},
                            {"available_time", m.available_time},
                            {"m_rate", m.m_rate}});
    }
    return {{"vendor", addr.hex()}, {"nom", state.grc_get_number_of_machines(addr)}, {"machines", std::move(machines)}};
}

chain::Value inspect_relationships(const TraceArchive& archive) {
    chain::Value rels = chain::Value::array();
    for (const auto& [id, rel] : archive.head().state->relationships()) rels.push_back(rel.to_value());
    return {{"relationships", std::move(rels)}};
}

std::string render_report(std::string_view query, const chain::Value& r) {
    std::ostringstream out;
    if (query == "chain") {
        out << "mode " << str(r["mode"]) << ", height " << r["height"] << ", " << r["known_blocks"]
            << " blocks known\n";
        out << "tip        " << str(r["tip"]) << "\nstate root " << str(r["state_root"]) << "\n";
        out << "heads:\n";
        for (const auto& h : r["heads"]) {
            out << "  " << str(h["id"]) << " height " << h["height"] << (h["canonical"].get<bool>() ? " *" : "")
                << "\n";
        }
        for (const auto& x : r["rejected"]) out << "rejected: " << str(x) << "\n";
        out << "\n" << pad("height", 8) << pad("id", 18) << pad("sealer", 44) << pad("txs", 5) << "votes\n";
        for (const auto& b : r["blocks"]) {
            out << pad(b["height"].dump(), 8) << pad(str(b["id"]).substr(0, 16), 18) << pad(str(b["sealer"]), 44)
                << pad(b["transactions"].dump(), 5) << b["votes"] << "\n";
        }
    } else if (query == "block") {
        const auto& b = r["block"];
        const auto& h = b["header"];
        out << "block  " << str(b["id"]) << (r["canonical"].get<bool>() ? " (canonical)" : " (side branch)") << "\n";
        out << "height " << h["height"] << "  timestamp " << h["timestamp"] << "  difficulty " << h["difficulty"]
            << "  nonce " << h["nonce"] << "\n";
        out << "parent " << str(h["prev_block"]) << "\n";
        out << "sealer " << str(r["sealer"]) << "\nstate  " << str(r["state_root"]) << "\n";
        out << "votes (" << r["voters"].size() << "):\n";
        for (const auto& v : r["voters"]) out << "  " << str(v) << "\n";
        out << "transactions (" << b["transactions"].size() << "):\n";
        for (std::size_t i = 0; i < b["transactions"].size(); ++i) {
            const auto& tx = b["transactions"][i];
            const auto& rc = r["receipts"][i];
            out << "  " << str(tx["id"]) << " " << str(tx["transaction"]["operation"]) << " from "
                << str(tx["transaction"]["service_provider"]) << " "
                << (rc["ok"].get<bool>() ? std::string("ok") : "failed: " + str(rc["note"])) << "\n";
        }
    } else if (query == "history") {
        out << "history of " << str(r["participant"]) << " (" << r["events"].size() << " events)\n";
        for (const auto& e : r["events"]) {
            out << pad("#" + e["seq"].dump(), 6) << pad("block " + e["at_block"].dump(), 11)
                << pad(str(e["kind"]), 21);
            if (e.contains("counterparty")) out << "with " << str(e["counterparty"]) << " ";
            out << str(e["summary"]) << "\n";
        }
    } else if (query == "machines") {
        out << "vendor " << str(r["vendor"]) << ", " << r["nom"] << " machine(s)\n";
        out << pad("index", 7) << pad("name", 20) << pad("mac", 20) << pad("status", 8) << pad("avail_min", 11)
            << "rate\n";
        std::size_t i = 0;
        for (const auto& m : r["machines"]) {
            out << pad(std::to_string(i++), 7) << pad(str(m["mname"]), 20) << pad(str(m["mac"]), 20)
                << pad(m["status"].get<bool>() ? "on" : "off", 8) << pad(m["available_time"].dump(), 11)
                << m["m_rate"] << "\n";
        }
    } else if (query == "relationships") {
        out << r["relationships"].size() << " relationship(s)\n";
        for (const auto& x : r["relationships"]) {
            out << str(x["rel_id"]) << " [" << str(x["status"]) << "]\n  " << str(x["party_a"]) << " <-> "
                << str(x["party_b"]) << "\n  terms: " << str(x["terms"]) << "\n";
            if (x.contains("external_pointer")) out << "  data: " << str(x["external_pointer"]) << "\n";
        }
    } else {
        out << r.dump(2) << "\n";
    }
    return out.str();
}

}  // namespace fabrec::sim
