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

#include <json.hpp>

namespace fabrec::chain {

// Structured value shared by hashing, the wire format, and all file formats.
using Value = nlohmann::json;

// Deterministic encoding: object keys sorted by code point, no insignificant
// whitespace, integers in shortest decimal form, decimals in shortest
// round-trip form. Throws SerializationError on non-finite numbers, binary
// values, or invalid UTF-8.
std::string canonical_serialize(const Value& value);

// Parses text produced by canonical_serialize (or any JSON text).
// Throws SerializationError.
Value parse_value(std::string_view text);

}  // namespace fabrec::chain
