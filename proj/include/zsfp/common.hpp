// Copyright 2026 The zsfp Authors.
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

#ifndef ZSFP_COMMON_HPP
#define ZSFP_COMMON_HPP

#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zsfp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Probability vectors (transition rows, initial distribution, strategies)
// must sum to one within this bound.
inline constexpr double kProbabilityTolerance = 1e-12;
// Two expected payoffs closer than this are treated as a tie.
inline constexpr double kTieTolerance = 1e-12;
// Simplex membership for LP outputs.
inline constexpr double kSimplexTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Rejected configuration (schedules, run settings, generator arguments).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

enum class Player : int { kOne = 0, kTwo = 1 };

constexpr int index_of(Player p) { return static_cast<int>(p); }
constexpr Player other(Player p) {
  return p == Player::kOne ? Player::kTwo : Player::kOne;
}
inline constexpr Player kPlayers[] = {Player::kOne, Player::kTwo};

// Independent random streams derived from one user seed. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; all
// conversions to doubles and bounded integers are done here so results do
// not depend on the standard library's distribution implementations.
enum class Stream : std::uint64_t {
  kGenerator = 1,
  kKernel = 2,
  kExploration = 3,
  kTieBreak = 4,
  kMonteCarlo = 5,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream) {
  return mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream) : engine_(derive_seed(seed, stream)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n-1}; rejection sampling keeps it unbiased.
  int index(int n) {
    const auto bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return static_cast<int>(draw % bound);
  }

 private:
  std::mt19937_64 engine_;
};

// 17 significant digits; reads back as the same double.
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace zsfp

#endif  // ZSFP_COMMON_HPP
