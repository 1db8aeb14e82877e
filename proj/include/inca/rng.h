//
// Copyright 2026 The inca-lab Authors
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
//

#ifndef INCA_RNG_H_
#define INCA_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace inca {

// Stream tags keep the random streams of different concerns apart.
enum class Stream : uint64_t {
  kSchedule = 0x5c4ed,
  kDistinct = 0xd157,
  kDropout = 0xd20b,
  kView = 0x71e3,
  kCorrupt = 0xc022,
  kNoise = 0x9015e,
  kInput = 0x1a907,
  kTrial = 0x7a1a,
  kGopa = 0x609a,
};

uint64_t Mix64(uint64_t x);

// Hashes a base seed together with a path of stream identifiers.
uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> path);
uint64_t DeriveSeed(uint64_t base, Stream stream,
                    std::initializer_list<uint64_t> path = {});

// SplitMix64. Cheap to construct, so every party and iteration can own a
// stream addressed by a counter instead of sharing one sequential engine.
class SplitMix64 {
 public:
  using result_type = uint64_t;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform double in [0, 1).
  double Uniform();
  // Uniform integer in [0, bound).
  uint64_t Below(uint64_t bound);

 private:
  uint64_t state_;
};

}  // namespace inca

#endif  // INCA_RNG_H_
