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

#include <fabrec/chain/canonical.hpp>

#include <cmath>

#include <fabrec/common/error.hpp>

namespace fabrec::chain {

namespace {

    void check_encodable(const Value& v) {
        switch (v.type()) {
            case Value::value_t::object:
                for (const auto& [key, child] : v.items()) {
                    check_encodable(child);
                }
                break;
            case Value::value_t::array:
                for (const auto& child : v) {
                    check_encodable(child);
                }
                break;
            case Value::value_t::number_float:
                if (!std::isfinite(v.get<double>())) {
                    throw SerializationError("non-finite number");
                }
                break;
            case Value::value_t::binary:
                throw SerializationError("binary values are not encodable");
            case Value::value_t::discarded:
                throw SerializationError("discarded value");
            default:
                break;
        }
    }

}  // namespace

std::string canonical_serialize(const Value& value) {
    check_encodable(value);
    try {
        return value.dump(-1, ' ', false, Value::error_handler_t::strict);
    } catch (const Value::exception& e) {
        throw SerializationError(e.what());
    }
}

Value parse_value(std::string_view text) {
    try {
        return Value::parse(text);
    } catch (const Value::exception& e) {
        throw SerializationError(e.what());
    }
}

}  // namespace fabrec::chain
