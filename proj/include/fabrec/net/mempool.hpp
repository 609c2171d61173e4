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

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <fabrec/chain/transaction.hpp>

namespace fabrec::net {

// Pending transactions keyed by id, drained in arrival order (ties by id).
class Mempool {
  public:
    // False when the id is already pending.
    bool add(const chain::Transaction& tx, std::uint64_t arrival);
    bool erase(const chain::Hash256& id);
    bool contains(const chain::Hash256& id) const { return by_id_.contains(id); }
    const chain::Transaction* find(const chain::Hash256& id) const;
    std::size_t size() const noexcept { return by_id_.size(); }
    bool empty() const noexcept { return by_id_.empty(); }

    std::vector<chain::Transaction> take(std::size_t max) const;
    std::vector<chain::Hash256> ids() const;

  private:
    struct Entry {
        chain::Transaction tx;
        std::uint64_t arrival{0};
    };
    std::map<chain::Hash256, Entry> by_id_;
    std::set<std::pair<std::uint64_t, chain::Hash256>> order_;
};

}  // namespace fabrec::net
