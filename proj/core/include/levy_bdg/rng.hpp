/*
   Copyright 2026 The levy_bdg Authors

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

#include <cstdint>
#include <limits>

namespace levy_bdg {

/// The splitmix64 finalizer (Steele, Lea, Flood). Bijective on 64 bits.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Value-derived random stream.
///
/// A stream is identified by (seed, index, substream). Its starting state is
///
///     state0 = mix(mix(seed ^ C0) + (index + 1) * G) ^ mix(substream * G + C1)
///
/// with mix = splitmix64_mix and G the 64-bit golden ratio. Each draw advances
/// state by G and returns mix(state). Streams never share state, so any set of
/// paths yields the same numbers regardless of thread count or visit order.
///
/// Satisfies UniformRandomBitGenerator, so it can drive <random>
/// distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit constexpr Stream(std::uint64_t state) noexcept : state_(state) {}

  static Stream for_path(std::uint64_t seed, std::uint64_t index,
                         std::uint64_t substream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += kGolden;
    return splitmix64_mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace levy_bdg
