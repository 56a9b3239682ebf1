#pragma once

#include <cstdint>

namespace ascent {

// Deterministic counter-based random stream.
//
// A stream is keyed by (seed, stream_id) and produces output as
// mix64(key + k * GOLDEN) for counter k, so streams never share state and
// adding a stream (e.g. one more agent) cannot perturb existing ones.
// Streams are cheap to copy; copies replay the same tail.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double uniform01();

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal();

  // Uniform over {0, ..., n-1} via 128-bit multiply-shift.
  std::uint32_t uniform_below(std::uint32_t n);

  // True with probability p.
  bool bernoulli(double p);

  static std::uint64_t mix64(std::uint64_t x);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Stream ids used by the harness seed fan-out. Agent s draws from
// stream_id = kAgentStreamBase + s.
inline constexpr std::uint64_t kLandmarkStream = 0x4c414e444d41524bULL;
inline constexpr std::uint64_t kDropoutStream = 0x44524f504f555421ULL;
inline constexpr std::uint64_t kAgentStreamBase = 0x4147454e54000000ULL;

}  // namespace ascent
