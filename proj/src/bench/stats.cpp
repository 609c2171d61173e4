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

#include <fabrec/bench/stats.hpp>

#include <cmath>
#include <stdexcept>

namespace fabrec::bench {

SampleStats stats(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("stats of an empty sample");
    SampleStats s;
    s.n = samples.size();
    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double sq = 0.0;
        for (double x : samples) sq += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(s.n - 1));
    }
    return s;
}

}  // namespace fabrec::bench
