// Copyright 2026 The lcmc Authors
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

#include "lcmc/rng.hpp"

namespace lcmc {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t key) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

void Philox4x32::refill() noexcept {
  buffer_ = block(counter_, key_);
  // 128-bit counter increment
  for (auto& word : counter_) {
    if (++word != 0) break;
  }
  index_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
  if (index_ >= 4) refill();
  const std::uint64_t lo = buffer_[index_];
  const std::uint64_t hi = buffer_[index_ + 1];
  index_ += 2;
  return (hi << 32) | lo;
}

std::uint64_t derive_key(std::uint64_t master, std::initializer_list<std::uint64_t> tuple) noexcept {
  std::uint64_t h = splitmix64(master ^ 0x6C636D63ull);
  for (std::uint64_t v : tuple) {
    h = splitmix64(h ^ splitmix64(v + 0x1234567ull));
  }
  return h;
}

RngStream RngStream::derive(std::uint64_t master, Purpose purpose,
                            std::initializer_list<std::uint64_t> tuple) {
  std::uint64_t h = derive_key(master, {static_cast<std::uint64_t>(purpose)});
  for (std::uint64_t v : tuple) h = derive_key(h, {v});
  return RngStream(h);
}

double RngStream::uniform() {
  // 53 random bits mapped to the open interval (0, 1)
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

Eigen::VectorXd RngStream::normal_vector(Eigen::Index p) {
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v[i] = normal();
  return v;
}

Eigen::MatrixXd RngStream::normal_matrix(Eigen::Index p, Eigen::Index cols) {
  Eigen::MatrixXd m(p, cols);
  double* data = m.data();
  for (Eigen::Index i = 0; i < p * cols; ++i) data[i] = normal();
  return m;
}

}  // namespace lcmc
