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

#include <fabrec/net/message.hpp>

#include <fabrec/common/error.hpp>

namespace fabrec::net {

namespace {
    constexpr std::string_view kTypes[] = {"hello", "tx", "block", "request_block", "vote_request", "vote"};
}

std::string_view to_string(MessageType t) noexcept { return kTypes[static_cast<int>(t)]; }

MessageType message_type_from_string(std::string_view s) {
    for (int i = 0; i < 6; ++i) {
        if (kTypes[i] == s) return static_cast<MessageType>(i);
    }
    throw SerializationError("unknown message type '" + std::string(s) + "'");
}

chain::Value Envelope::to_value() const {
    return {{"type", to_string(type)}, {"body", body}, {"sender", sender.hex()}};
}

Envelope Envelope::from_value(const chain::Value& v) {
    if (!v.is_object() || v.size() != 3) {
        throw SerializationError("envelope must have exactly type, body, sender");
    }
    try {
        Envelope e;
        e.type = message_type_from_string(v.at("type").get<std::string>());
        e.body = v.at("body");
        e.sender = chain::Address::from_hex(v.at("sender").get<std::string>());
        return e;
    } catch (const chain::Value::exception& ex) {
        throw SerializationError(std::string("envelope: ") + ex.what());
    }
}

std::string Envelope::to_line() const { return chain::canonical_serialize(to_value()) + '\n'; }

Envelope Envelope::from_line(std::string_view line) {
    if (line.ends_with('\n')) line.remove_suffix(1);
    return from_value(chain::parse_value(line));
}

bool LineBuffer::next_line(std::string& out) {
    const auto pos = pending_.find('\n');
    if (pos == std::string::npos) return false;
    out.assign(pending_, 0, pos);
    pending_.erase(0, pos + 1);
    return true;
}

}  // namespace fabrec::net
