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

#include "levy_bdg/rng.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "levy_bdg/parallel.hpp"

namespace levy_bdg {

Stream Stream::for_path(std::uint64_t seed, std::uint64_t index,
                        std::uint64_t substream) noexcept {
  const std::uint64_t base = splitmix64_mix(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t path = splitmix64_mix(base + (index + 1) * kGolden);
  const std::uint64_t sub = splitmix64_mix(substream * kGolden + 0xbb67ae8584caa73bULL);
  return Stream(path ^ sub);
}

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested) return *requested == 0 ? 1u : *requested;
  if (const char* env = std::getenv("LEVY_BDG_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("LEVY_BDG_THREADS must be a positive integer, got '") +
                                env + "'");
  }
  return 1;
}

}  // namespace levy_bdg
