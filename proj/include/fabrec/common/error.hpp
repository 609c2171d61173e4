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

#include <stdexcept>
#include <string>

namespace fabrec {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed scenario, genesis, or benchmark configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

class SerializationError : public Error {
  public:
    using Error::Error;
};

class PayloadError : public Error {
  public:
    using Error::Error;
};

class AuthorizationError : public Error {
  public:
    using Error::Error;
};

class LinkageError : public Error {
  public:
    using Error::Error;
};

// Outcome of a validation step. `reason` is a short machine-readable code
// ("linkage", "tx_root", "recent-signer", ...) and empty when ok.
struct Verdict {
    bool ok{true};
    std::string reason;

    static Verdict pass() { return {}; }
    static Verdict fail(std::string why) { return {false, std::move(why)}; }

    explicit operator bool() const noexcept { return ok; }
};

}  // namespace fabrec
