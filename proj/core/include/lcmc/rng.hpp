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

#ifndef LCMC_RNG_HPP
#define LCMC_RNG_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

#include <Eigen/Core>

/**
 * \file
 * \brief Counter-based random streams.
 *
 * Every random quantity in the library is drawn from an `RngStream` whose key
 * is derived from a single master seed and a tuple of integers naming the
 * consumer (replicate, chain, purpose, ...). Two streams with different tuples
 * are statistically independent, and a stream's output depends only on its
 * key, so replicated experiments are reproducible regardless of the order or
 * thread on which the replicates run.
 */

namespace lcmc {

/// Philox4x32-10 counter-based generator producing 64-bit words.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  explicit Philox4x32(std::uint64_t key = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  int index_ = 4;
};

/// Names the consumer of a derived stream; part of the derivation tuple.
enum class Purpose : std::uint64_t {
  data = 1,
  chain = 2,
  initial = 3,
  reference = 4,
  floor = 5,
  redraw = 6,
  estimator = 7,
  check = 8,
  demo = 9,
};

/// Mixes a master seed and an arbitrary tuple into a 64-bit stream key.
std::uint64_t derive_key(std::uint64_t master, std::initializer_list<std::uint64_t> tuple) noexcept;

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) noexcept : engine_(key) {}

  /// Stream for `(purpose, tuple...)` under `master`.
  static RngStream derive(std::uint64_t master, Purpose purpose,
                          std::initializer_list<std::uint64_t> tuple = {});

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal() { return normal_(engine_); }
  Eigen::VectorXd normal_vector(Eigen::Index p);
  /// p x cols matrix of independent standard normals.
  Eigen::MatrixXd normal_matrix(Eigen::Index p, Eigen::Index cols);

  Philox4x32& engine() noexcept { return engine_; }

 private:
  Philox4x32 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace lcmc

#endif  // LCMC_RNG_HPP
