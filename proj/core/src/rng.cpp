#include "annoaudit/rng.hpp"

#include <cmath>
#include <numbers>

namespace annoaudit {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;
}  // namespace

std::uint64_t Stream::next() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::uint64_t Stream::uniform_below(std::uint64_t n) noexcept {
  // High 64 bits of the 128-bit product next() * n.
  const std::uint64_t x = next();
  const std::uint64_t x_lo = x & 0xFFFFFFFFu, x_hi = x >> 32;
  const std::uint64_t n_lo = n & 0xFFFFFFFFu, n_hi = n >> 32;
  const std::uint64_t lo_lo = x_lo * n_lo;
  const std::uint64_t hi_lo = x_hi * n_lo;
  const std::uint64_t lo_hi = x_lo * n_hi;
  const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFu) + lo_hi;
  return x_hi * n_hi + (hi_lo >> 32) + (cross >> 32);
}

double Stream::uniform01() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Stream::normal() noexcept {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_key(std::uint64_t parent, std::string_view purpose,
                         std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t tag = kFnvOffset;
  for (const char c : purpose) {
    tag ^= static_cast<unsigned char>(c);
    tag *= kFnvPrime;
  }
  std::uint64_t key = mix64(parent ^ mix64(tag));
  for (const std::uint64_t id : ids) key = mix64(key + kGamma + mix64(id));
  return key;
}

}  // namespace annoaudit
