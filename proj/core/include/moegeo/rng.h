// Copyright 2026 The moegeo Authors
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

#ifndef MOEGEO_RNG_H_
#define MOEGEO_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace moegeo {

// Counter-based generator: output n of a stream with key K is
// Mix64(K + n * 0x9E3779B97F4A7C15), with n starting at 1 and Mix64 the
// SplitMix64 finalizer. A stream is therefore fully described by its key, and
// child streams are derived without touching the parent's counter:
//
//   Derive(K, id) = Mix64(K ^ Mix64(id + 0xA0761D6478BD642F))
//
// Derived draws (doubles, normals, bounded integers) are specified in rng.cc
// and the README so other implementations can reproduce every experiment.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  // Stream for a path of ids under a master seed, e.g. (seed, {grid, trial}).
  static Rng Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  Rng Child(std::uint64_t id) const;

  std::uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Standard normal via the cosine branch of Box-Muller (two draws each).
  double Normal();
  // Uniform integer in [0, n), n > 0. Lemire multiply-shift with rejection.
  std::uint64_t Index(std::uint64_t n);
  // +1 or -1 with equal probability (top bit of one draw).
  double Sign();

  // Fisher-Yates from the back: for i = n-1..1 swap(i, Index(i + 1)).
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Uniform k-subset of [0, n), returned ascending.
  std::vector<int> Subset(int n, int k);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t Mix64(std::uint64_t x);

}  // namespace moegeo

#endif  // MOEGEO_RNG_H_
