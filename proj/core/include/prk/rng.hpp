#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace prk {

/// Philox4x32 with 10 rounds (Salmon et al., Random123). Pure function of
/// (counter, key); exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/**
 * Counter-based splittable random stream.
 *
 * The 64-bit seed is the Philox key. The 128-bit counter is split into a
 * 64-bit block index (low words) and the 64-bit stream index (high words), so
 * every (seed, stream) pair addresses its own 2^64-block sequence and
 * parallel trials never share draws.
 *
 * Uniform doubles take the top 53 bits of a 64-bit draw. Standard normals use
 * the Box-Muller transform on two uniforms in (0, 1), caching the sine branch;
 * this fixes the exact byte stream of every reproducible run.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  double normal() noexcept;
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept;

  /// Fresh generator on the same seed whose stream is a hash of
  /// (this stream, child). Does not advance this generator.
  Rng derive(std::uint64_t child) const noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::optional<double> cached_normal_;
};

/// SplitMix64 finalizer, used to hash stream indices.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace prk
