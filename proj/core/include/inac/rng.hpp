#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace inac {

/// Seed used by every command when neither --seed nor INAC_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Deterministic random stream. Streams are derived from a master seed and a
/// path of integer tags (trial index, candidate index, ...), so the same
/// path always yields the same sequence no matter which thread draws it.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {});

  RngStream child(std::uint64_t tag) const;

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal(double mean = 0.0, double stddev = 1.0);
  double gamma(double shape, double scale);
  std::size_t index(std::size_t count);

  std::mt19937_64& engine() { return engine_; }
  std::uint64_t key() const { return key_; }

 private:
  RngStream(std::uint64_t key, int);

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; exposed for hashing seeds and spec parameters.
std::uint64_t mix64(std::uint64_t x);

}  // namespace inac
