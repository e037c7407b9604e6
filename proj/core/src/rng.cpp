#include "inac/rng.hpp"

#include "inac/errors.hpp"

namespace inac {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t derive(std::uint64_t key, std::uint64_t tag) { return mix64(key ^ mix64(tag + 0x632be59bd9b4e019ULL)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) : RngStream(mix64(seed), 0) {
  for (std::uint64_t tag : path) key_ = derive(key_, tag);
  engine_.seed(key_);
}

RngStream::RngStream(std::uint64_t key, int) : key_(key), engine_(key) {}

RngStream RngStream::child(std::uint64_t tag) const { return RngStream(derive(key_, tag), 0); }

double RngStream::normal(double mean, double stddev) {
  return std::normal_distribution<double>(mean, stddev)(engine_);
}

double RngStream::gamma(double shape, double scale) {
  return std::gamma_distribution<double>(shape, scale)(engine_);
}

std::size_t RngStream::index(std::size_t count) {
  if (count == 0) throw ValidationError("cannot draw an index from an empty range");
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(engine_);
}

}  // namespace inac
