#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlbox {

/// A single binary value. Always 0 or 1.
using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

enum class Party : std::uint8_t { Alice = 0, Bob = 1 };

inline constexpr Party other(Party p) noexcept {
  return p == Party::Alice ? Party::Bob : Party::Alice;
}

std::string_view to_string(Party p) noexcept;

/// Raised when a party deviates from a primitive's usage rules
/// (e.g. entering a second input into the same box).
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a request exceeds a configured computational cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent 64-bit key for substream `stream` of `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream ^ 0xD1B54A32D192ED03ULL));
}

/// Inner product modulo 2 of two equal-length strings.
Bit inner_product(std::span<const Bit> x, std::span<const Bit> y);

/// XOR of all bits.
Bit parity(std::span<const Bit> bits) noexcept;

/// "0110"-style rendering, index 0 first.
std::string to_string(std::span<const Bit> bits);

/// Parses a string of '0'/'1' characters. Throws std::invalid_argument
/// on any other character.
BitString bits_from_string(std::string_view text);

}  // namespace nlbox
