// Copyright 2026 the fogplan authors
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

#ifndef FOGPLAN_RNG_HPP
#define FOGPLAN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fogplan {

// Counter-based pseudo-random stream built on the splitmix64 finalizer.
//
// Substreams are derived from the base seed only, never from the draw
// position, so split() gives the same child stream no matter how many values
// the parent has already produced. This is what lets concurrent evaluations
// own independent, reproducible streams.
//
// std::random distributions are implementation-defined, so every sampler
// needed by the simulator is implemented here to keep outputs identical
// across toolchains.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : base_(seed), counter_(0) {}

  // Child stream for a named lane. Independent of this stream's position.
  RngStream split(std::uint64_t key) const {
    return RngStream(mix(base_ ^ (0x9e3779b97f4a7c15ull + mix(key + 0x6a09e667f3bcc909ull))));
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix(base_ + counter_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound)) >> 64);
  }

  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  // Poisson sample by Knuth's product method, chunked so the running product
  // never underflows for large means.
  std::int64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::int64_t count = 0;
    while (mean > 16.0) {
      count += poisson_knuth(16.0);
      mean -= 16.0;
    }
    return count + poisson_knuth(mean);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::int64_t poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t base_;
  std::uint64_t counter_;
};

}  // namespace fogplan

#endif  // FOGPLAN_RNG_HPP
