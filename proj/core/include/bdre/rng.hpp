// Copyright 2026 The bdre Authors.
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

#ifndef BDRE_RNG_HPP_
#define BDRE_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace bdre {

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Sub-stream tags. A replica owns one stream per tag; families spawned inside
// a replica (excursions, BPRE offspring) use kFamily with their own index.
enum class StreamTag : std::uint32_t {
  kEnvironment = 1,
  kBranching = 2,
  kImmigration = 3,
  kFamily = 4,
  kAuxiliary = 5,
};

// Identity of a stream: (seed, replica, tag, index). Two handles with equal
// identity produce bit-identical sequences, independent of thread layout.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  StreamTag tag = StreamTag::kEnvironment;
  std::uint32_t index = 0;

  StreamId with(StreamTag t, std::uint32_t i = 0) const {
    return StreamId{seed, replica, t, i};
  }
};

// Counter-based random stream. Satisfies UniformRandomBitGenerator, so it
// can drive <random> distributions.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream() : RandomStream(StreamId{}) {}
  explicit RandomStream(const StreamId& id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (pos_ == 4) refill();
    return block_[pos_++];
  }

  // Uniform on (0, 1), 53 random bits.
  double uniform();

  double normal() { return normal_(*this); }

  // Exponential with unit mean.
  double exponential();

  // Poisson(mean); mean >= 0 and finite.
  std::int64_t poisson(double mean);

  // Gamma(shape, 1) for shape > 0.
  double gamma(double shape);

  const StreamId& id() const { return id_; }

 private:
  void refill();

  StreamId id_;
  std::array<std::uint32_t, 2> key_{};
  std::uint32_t index_word_ = 0;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  std::normal_distribution<double> normal_;
};

}  // namespace bdre

#endif  // BDRE_RNG_HPP_
