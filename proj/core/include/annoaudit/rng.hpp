#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace annoaudit {

/// Counter-based 64-bit random stream.
///
/// The n-th output (n = 0, 1, ...) is `mix(key + (n + 1) * 0x9E3779B97F4A7C15)`,
/// where `mix` is the SplitMix64 finalizer. Because the output depends only on
/// (key, n), a stream can be reproduced bit-for-bit in any language, and
/// independent streams are obtained by deriving distinct keys with `derive_key`.
///
/// `uniform_below(n)` maps one output `x` to `floor(x * n / 2^64)`; it consumes
/// exactly one draw (the bias is below n / 2^64).
/// `uniform01()` uses the top 53 bits: `(x >> 11) * 2^-53`.
/// `normal()` is Box-Muller on two consecutive `uniform01()` draws
/// (`u1` replaced by `1 - u1` to avoid log(0)).
class Stream {
 public:
  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next() noexcept;
  std::uint64_t uniform_below(std::uint64_t n) noexcept;
  double uniform01() noexcept;
  double normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  /// Number of draws consumed so far.
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a stream key from a parent seed, a purpose tag and optional integer ids.
/// The tag is folded in with 64-bit FNV-1a; each id is folded with `mix64`.
std::uint64_t derive_key(std::uint64_t parent, std::string_view purpose,
                         std::initializer_list<std::uint64_t> ids = {}) noexcept;

}  // namespace annoaudit
