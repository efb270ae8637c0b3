//
// Copyright 2026 The ODDA Authors
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

#ifndef ODDA_RNG_H_
#define ODDA_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace odda {

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t Mix64(std::uint64_t x);

// 64-bit FNV-1a over the bytes of `s`.
std::uint64_t Fnv1a64(std::string_view s);

// Derives an independent stream seed from a root seed, a purpose tag and up
// to two integer keys (example id, step, mask index, ...).
std::uint64_t DeriveSeed(std::uint64_t root, std::string_view tag,
                         std::uint64_t a = 0, std::uint64_t b = 0);

// Maps a 64-bit word to a double in [0, 1) using its top 53 bits.
inline double ToUnit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Seeded random stream. All draws are derived from std::mt19937_64 words
// with library-independent mappings, so sequences do not depend on the
// standard library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  SeededRng(std::uint64_t root, std::string_view tag, std::uint64_t a = 0,
            std::uint64_t b = 0)
      : engine_(DeriveSeed(root, tag, a, b)) {}

  std::uint64_t NextU64() { return engine_(); }
  double Uniform() { return ToUnit(engine_()); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n). Requires n > 0.
  std::size_t UniformIndex(std::size_t n);
  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace odda

#endif  // ODDA_RNG_H_
