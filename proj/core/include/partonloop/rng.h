// Copyright 2026 The partonloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARTONLOOP_RNG_H
#define PARTONLOOP_RNG_H

#include <cstdint>
#include <limits>

namespace partonloop {

inline constexpr const char *kRngFamily = "splitmix64-counter";

inline uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output n is a keyed hash of n, so any stream is
/// addressable by (seed, trajectory, purpose) without shared state.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
   public:
    using result_type = uint64_t;

    CounterRng() = default;
    explicit CounterRng(uint64_t key) : key_(key) {
    }

    /// Independent stream for (seed, trajectory, purpose).
    static CounterRng stream(uint64_t seed, uint64_t trajectory, uint64_t purpose) {
        uint64_t k = splitmix64_mix(seed ^ 0x6A09E667F3BCC909ULL);
        k = splitmix64_mix(k ^ splitmix64_mix(trajectory + 0x9E3779B97F4A7C15ULL));
        k = splitmix64_mix(k ^ splitmix64_mix(purpose + 0xBB67AE8584CAA73BULL));
        return CounterRng(k);
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    result_type operator()() {
        counter_++;
        return splitmix64_mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return (double)((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform sign.
    int coin() {
        return ((*this)() >> 63) ? -1 : +1;
    }

    uint64_t counter() const {
        return counter_;
    }

   private:
    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

/// Stream purposes, kept distinct so that sampling bases never shifts outcomes.
enum StreamPurpose : uint64_t {
    kBasisStream = 1,
    kOutcomeStream = 2,
    kAxisStream = 3,
};

}  // namespace partonloop

#endif
