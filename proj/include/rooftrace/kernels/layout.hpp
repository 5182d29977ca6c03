#pragma once

#include <cstdint>

namespace rooftrace::kernels {

// Hands out simulated base addresses for the arrays a kernel touches. Arrays
// start on page boundaries and are staggered by a few cache lines so that
// equal-sized arrays do not alias into the same sets element by element.
class AddressSpace {
 public:
  static constexpr std::uint64_t kPage = 4096;
  static constexpr std::uint64_t kStagger = 3 * 64;

  explicit AddressSpace(std::uint64_t base = 1ull << 30) : next_(base) {}

  std::uint64_t allocate(std::uint64_t bytes) {
    const std::uint64_t base = next_ + (count_++ % 16) * kStagger;
    next_ = round_up(base + bytes, kPage) + kPage;
    return base;
  }

 private:
  static std::uint64_t round_up(std::uint64_t v, std::uint64_t a) { return (v + a - 1) / a * a; }
  std::uint64_t next_;
  std::uint64_t count_ = 0;
};

}  // namespace rooftrace::kernels
