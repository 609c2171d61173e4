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

#include <cstddef>
#include <optional>
#include <span>

namespace fabrec::bench {

struct SampleStats {
    std::size_t n{0};
    double mean{0.0};
    // Sample standard deviation (n - 1 denominator); needs two samples.
    std::optional<double> stddev;
};

// Throws std::invalid_argument on an empty sample.
SampleStats stats(std::span<const double> samples);

}  // namespace fabrec::bench
