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

#include "bdre/rng.hpp"

#include <cmath>

#include "bdre/errors.hpp"

namespace bdre {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomStream::RandomStream(const StreamId& id) : id_(id) {
  key_ = {static_cast<std::uint32_t>(id.seed),
          static_cast<std::uint32_t>(id.seed >> 32)};
  if (id.index >= (1u << 28)) {
    throw DomainError("stream index exceeds 2^28");
  }
  index_word_ = (static_cast<std::uint32_t>(id.tag) << 28) | id.index;
}

void RandomStream::refill() {
  if (block_counter_ > std::numeric_limits<std::uint32_t>::max()) {
    throw AccuracyError("random stream exhausted (2^34 draws)");
  }
  block_ = philox4x32({static_cast<std::uint32_t>(block_counter_), index_word_,
                       static_cast<std::uint32_t>(id_.replica),
                       static_cast<std::uint32_t>(id_.replica >> 32)},
                      key_);
  ++block_counter_;
  pos_ = 0;
}

double RandomStream::uniform() {
  const std::uint64_t hi = (*this)() >> 5;  // 27 bits
  const std::uint64_t lo = (*this)() >> 6;  // 26 bits
  // (k + 0.5) / 2^53 keeps the result strictly inside (0, 1).
  return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() { return -std::log(uniform()); }

std::int64_t RandomStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(*this);
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma: shape must be > 0");
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(*this);
}

}  // namespace bdre
