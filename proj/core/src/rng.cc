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
#include "moegeo/rng.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace moegeo {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kDeriveSalt = 0xA0761D6478BD642FULL;

// Full 64x64 -> 128 product split into high and low words.
std::uint64_t MulHigh(std::uint64_t a, std::uint64_t b, std::uint64_t* low) {
  const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
  const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
  const std::uint64_t ll = a_lo * b_lo;
  const std::uint64_t lh = a_lo * b_hi;
  const std::uint64_t hl = a_hi * b_lo;
  const std::uint64_t hh = a_hi * b_hi;
  const std::uint64_t mid = (ll >> 32) + (lh & 0xFFFFFFFFULL) + (hl & 0xFFFFFFFFULL);
  *low = (mid << 32) | (ll & 0xFFFFFFFFULL);
  return hh + (lh >> 32) + (hl >> 32) + (mid >> 32);
}

}  // namespace

std::uint64_t Mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::Stream(std::uint64_t seed,
                std::initializer_list<std::uint64_t> path) {
  Rng rng(Mix64(seed));
  for (std::uint64_t id : path) rng = rng.Child(id);
  return rng;
}

Rng Rng::Child(std::uint64_t id) const {
  return Rng(Mix64(key_ ^ Mix64(id + kDeriveSalt)));
}

std::uint64_t Rng::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGamma);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::Index(std::uint64_t n) {
  // Lemire: take the high word of x * n, rejecting the biased low range.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    std::uint64_t low = 0;
    const std::uint64_t high = MulHigh(NextU64(), n, &low);
    if (low >= threshold) return high;
  }
}

double Rng::Sign() { return (NextU64() >> 63) ? -1.0 : 1.0; }

std::vector<int> Rng::Subset(int n, int k) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  // Partial forward Fisher-Yates: position i takes a uniform pick of [i, n).
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(Index(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace moegeo
