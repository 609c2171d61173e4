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

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fabrec/common/error.hpp>
#include <fabrec/net/chain_view.hpp>
#include <fabrec/net/genesis.hpp>

namespace fabrec::sim {

// Query target missing: "not found", "not a vendor".
class InspectError : public Error {
  public:
    using Error::Error;
};

// Read-only chain rebuilt from a run trace. Every sealed block is
// re-validated against the genesis recorded in the trace header before it
// is added; failures are collected in `rejected`.
class TraceArchive {
  public:
    // Throws SerializationError on malformed lines, ConfigError when the
    // header is missing or its genesis does not rebuild to the same block.
    static TraceArchive parse(std::istream& in);
    static TraceArchive load(const std::string& path);

    const chain::Value& header() const noexcept { return header_; }
    const std::optional<chain::Value>& summary() const noexcept { return summary_; }
    const net::GenesisConfig& genesis_config() const noexcept { return genesis_; }
    const net::ChainView& view() const { return *view_; }
    const std::map<std::string, chain::Address>& names() const noexcept { return names_; }
    const std::vector<std::string>& rejected() const noexcept { return rejected_; }
    std::size_t records() const noexcept { return records_; }

    // The tip reported by the run summary when present, else fork choice.
    const net::BlockEntry& head() const;
    std::vector<chain::Hash256> head_chain() const;

    // "0x..." address, or a participant or node name with optional "@".
    chain::Address resolve(std::string_view who) const;
    // Full id or a unique prefix of at least 8 hex characters.
    const net::BlockEntry& block(std::string_view id) const;

  private:
    TraceArchive() = default;

    chain::Value header_;
    std::optional<chain::Value> summary_;
    net::GenesisConfig genesis_;
    std::unique_ptr<net::ChainView> view_;
    std::map<std::string, chain::Address> names_;
    std::vector<std::string> rejected_;
    std::size_t records_{0};
};

chain::Value inspect_chain(const TraceArchive& archive);
chain::Value inspect_block(const TraceArchive& archive, std::string_view id);
chain::Value inspect_history(const TraceArchive& archive, std::string_view who);
chain::Value inspect_machines(const TraceArchive& archive, std::string_view who);
chain::Value inspect_relationships(const TraceArchive& archive);

// Plain-text rendering of an inspect_* report; `query` names the report.
std::string render_report(std::string_view query, const chain::Value& report);

}  // namespace fabrec::sim
