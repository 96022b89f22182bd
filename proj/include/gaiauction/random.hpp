// Copyright 2026 The gaiauction Authors.
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

#ifndef GAIAUCTION_RANDOM_HPP
#define GAIAUCTION_RANDOM_HPP

/// \file random.hpp
///
/// Seeded random streams.  The engine is std::mt19937_64; the conversions to
/// doubles and bounded integers are done here rather than through the
/// standard distributions, whose outputs differ between standard libraries.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace gaiauction {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (seed, a, b), e.g. (scenario seed, trial,
/// role).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed) ^ a) + b);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., n-1} by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard exponential.
  double exponential() { return -std::log1p(-uniform()); }

  /// Uniform point on the (k-1)-simplex (Dirichlet with all concentrations 1).
  std::vector<double> simplex(std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (double& x : w) total += (x = exponential());
    if (total <= 0.0) {
      for (double& x : w) x = 1.0 / static_cast<double>(k);
      return w;
    }
    for (double& x : w) x /= total;
    return w;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gaiauction

#endif  // GAIAUCTION_RANDOM_HPP
