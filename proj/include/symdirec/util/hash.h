// Copyright 2026 The symdirec Authors
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

#ifndef SYMDIREC_UTIL_HASH_H_
#define SYMDIREC_UTIL_HASH_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace symdirec {

// 64-bit FNV-1a. Byte-oriented, so identical on every platform.
constexpr std::uint64_t Fnv1a64(std::string_view bytes,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Lower-case 16-digit hex rendering of Fnv1a64.
std::string Fingerprint(std::string_view bytes);

// Seeded generator whose derived distributions do not depend on the standard
// library implementation (std::normal_distribution and std::shuffle do).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t Below(std::uint64_t n) { return Next() % n; }
  bool Coin() { return (Next() >> 63) != 0; }
  double Gaussian();

  template <typename T>
  void Shuffle(T& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = Below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace symdirec

#endif  // SYMDIREC_UTIL_HASH_H_
