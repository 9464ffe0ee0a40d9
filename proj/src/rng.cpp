#include "h22/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace h22 {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix64(seed ^ mix64(stream + 0x51ed2701ULL))) {}

std::uint64_t RngStream::raw() { return engine_(); }

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() { return 1.0 - uniform(); }

double RngStream::normal() {
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double t = 6.283185307179586476925286766559 * uniform();
  return r * std::cos(t);
}

int RngStream::uniform_int(int bound) {
  if (bound < 1) throw std::invalid_argument("uniform_int: bound must be >= 1");
  // rejection to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<int>(x % static_cast<std::uint64_t>(bound));
}

}  // namespace h22
