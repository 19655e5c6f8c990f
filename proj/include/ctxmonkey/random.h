/*
 * Copyright (C) 2026 The ctxmonkey Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ctxmonkey {

/**
 * Platform-independent pseudorandom streams. The standard library distributions are
 * implementation-defined, so everything that must reproduce from a seed goes through
 * these instead.
 *
 *  - SplitMix64 (Steele, Lea, Flood 2014) expands a 64-bit seed into generator state.
 *  - Xoshiro256** (Blackman, Vigna 2018) produces the stream.
 *  - Bounded draws use rejection sampling on the full 64-bit output, so the result
 *    depends only on the raw stream.
 */
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t Next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

class Xoshiro256 {
  public:
    explicit constexpr Xoshiro256(std::uint64_t seed) {
        SplitMix64 init(seed);
        for (auto& word : s_) word = init.Next();
    }

    constexpr std::uint64_t Next() {
        const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = Rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [lo, hi]; requires lo <= hi.
    constexpr std::uint64_t UniformInt(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo;
        if (span == ~0ull) return Next();
        const std::uint64_t bound = span + 1;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = Next();
            if (r >= threshold) return lo + r % bound;
        }
    }

  private:
    static constexpr std::uint64_t Rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

// Mixes a stream label into a seed so independent streams never share state.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t label) {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ull * (label + 1)));
    return mix.Next();
}

// FNV-1a, 64-bit.
constexpr std::uint64_t Fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001B3ull;
    }
    return hash;
}

}  // namespace ctxmonkey
