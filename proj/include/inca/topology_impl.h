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

#ifndef INCA_TOPOLOGY_IMPL_H_
#define INCA_TOPOLOGY_IMPL_H_

#include <unordered_map>
#include <vector>

namespace inca {

template <typename Rng>
std::vector<int> SampleWithoutReplacement(int range, int count, Rng& rng) {
  std::vector<int> out;
  out.reserve(count);
  std::unordered_map<int, int> moved;
  auto at = [&moved](int p) {
    auto it = moved.find(p);
    return it == moved.end() ? p : it->second;
  };
  for (int pos = 0; pos < count; ++pos) {
    int j = pos + static_cast<int>(rng.Below(range - pos));
    int vj = at(j);
    moved[j] = at(pos);
    out.push_back(vj);
  }
  return out;
}

}  // namespace inca

#endif  // INCA_TOPOLOGY_IMPL_H_
