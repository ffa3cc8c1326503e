#pragma once

#include <cstdint>
#include <random>

namespace pbprop {

// Seeded generator whose draws are identical on every platform: the
// engine is fully specified by the standard, and the range reduction is
// done here because std distributions are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do
      x = engine_();
    while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  long between(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace pbprop
