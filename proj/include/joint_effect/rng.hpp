#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace joint_effect {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by a master seed and a path of 64-bit ids
/// (experiment, grid point, replication, ...). The seed is the Philox key, a
/// hash of the path fills the upper half of the counter, and the lower half
/// counts blocks. Output depends only on (seed, path, position), so streams can
/// be created in any order on any thread and still reproduce bit for bit.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t master_seed,
                     std::span<const std::uint64_t> path = {});
  RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
      : RngStream(master_seed, std::span(path.begin(), path.size())) {}

  /// Stream whose path is this stream's path with `id` appended.
  RngStream child(std::uint64_t id) const;

  std::uint64_t master_seed() const noexcept { return seed_; }
  const std::vector<std::uint64_t>& path() const noexcept { return path_; }

  std::uint64_t next_u64();
  /// Uniform double on the open interval (0, 1) with 53 random bits.
  double next_uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound);

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::uint64_t path_hash_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

/// SplitMix64 finalizer; used to fold stream paths into a counter word.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace joint_effect
