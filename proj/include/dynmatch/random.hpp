// Copyright 2026 The dynmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DYNMATCH_RANDOM_HPP_
#define DYNMATCH_RANDOM_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>

// Draw helpers with a fixed, library-independent mapping from generator output
// to values, so traces and runs reproduce bit for bit everywhere.
namespace dynmatch::rnd {

/// Uniform integer in [0, bound) by rejection.
template <class Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Rng>
double unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
bool bernoulli(Rng& rng, double p) {
    return unit(rng) < p;
}

}  // namespace dynmatch::rnd

#endif  // DYNMATCH_RANDOM_HPP_
