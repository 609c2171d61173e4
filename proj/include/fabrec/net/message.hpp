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
#include <string_view>

#include <fabrec/chain/canonical.hpp>
#include <fabrec/chain/crypto.hpp>

namespace fabrec::net {

enum class MessageType { hello, tx, block, request_block, vote_request, vote };

std::string_view to_string(MessageType t) noexcept;
MessageType message_type_from_string(std::string_view s);

// Wire envelope {type, body, sender}. On a byte stream each envelope is its
// canonical serialization followed by '\n'.
struct Envelope {
    MessageType type{MessageType::hello};
    chain::Value body = chain::Value::object();
    chain::Address sender;

    chain::Value to_value() const;
    static Envelope from_value(const chain::Value& v);

    std::string to_line() const;
    // Throws SerializationError. A trailing '\n' is accepted.
    static Envelope from_line(std::string_view line);
};

// Splits a byte stream into complete lines, buffering partial input.
class LineBuffer {
  public:
    void append(std::string_view bytes) { pending_.append(bytes); }
    // Pops the next complete line without its terminator.
    bool next_line(std::string& out);

  private:
    std::string pending_;
};

}  // namespace fabrec::net
