#pragma once

#include <cstdint>
#include <initializer_list>

namespace smdp {

/// Counter-based generator: the n-th output is a pure function of
/// (seed, stream, n). Streams are derived by hashing a key sequence, so a
/// stream for (s, a, draw) can be recreated without replaying anything else.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Stream derived from the master seed and an arbitrary key tuple.
  static SeededRng derive(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> key) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept { return next_u64(); }
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_below() noexcept;
  /// Standard normal via Box-Muller; consumes two raw draws.
  double normal() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }
  void set_counter(std::uint64_t c) noexcept { counter_ = c; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace smdp
