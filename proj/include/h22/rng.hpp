#pragma once

#include <cstdint>
#include <random>

namespace h22 {

// Seedable stream with hand-rolled variate transforms so that draws are
// bit-identical across standard libraries (std distributions are not portable).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t raw();
  double uniform();                 // [0, 1)
  double uniform_open();            // (0, 1]
  double normal();                  // Box-Muller, uncached
  int uniform_int(int bound);       // uniform on {0, ..., bound-1}, bound >= 1

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 step; used to decorrelate (seed, stream) pairs.
std::uint64_t mix64(std::uint64_t x);

}  // namespace h22
