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

#include <fabrec/net/mempool.hpp>

namespace fabrec::net {

bool Mempool::add(const chain::Transaction& tx, std::uint64_t arrival) {
    auto [it, inserted] = by_id_.try_emplace(tx.id, Entry{tx, arrival});
    if (!inserted) return false;
    order_.emplace(arrival, tx.id);
    return true;
}

bool Mempool::erase(const chain::Hash256& id) {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return false;
    order_.erase({it->second.arrival, id});
    by_id_.erase(it);
    return true;
}

const chain::Transaction* Mempool::find(const chain::Hash256& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &it->second.tx;
}

std::vector<chain::Transaction> Mempool::take(std::size_t max) const {
    std::vector<chain::Transaction> out;
    for (const auto& [arrival, id] : order_) {
        if (out.size() == max) break;
        out.push_back(by_id_.at(id).tx);
    }
    return out;
}

std::vector<chain::Hash256> Mempool::ids() const {
    std::vector<chain::Hash256> out;
    out.reserve(order_.size());
    for (const auto& [arrival, id] : order_) out.push_back(id);
    return out;
}

}  // namespace fabrec::net
