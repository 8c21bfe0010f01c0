#pragma once

#include <array>
#include <cstdint>

namespace mifade::random {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., Random123).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Identifies an independent substream: one per (link, band, draw index).
struct StreamId {
  std::uint32_t link = 0;
  std::uint32_t band = 0;  // kAllBands when one draw is shared by every band
  std::uint64_t draw = 0;
};

inline constexpr std::uint32_t kAllBands = 0xFFFFu;

/// Sequential view of one Philox substream. Cheap to construct, so Monte Carlo
/// code builds one per sample and never shares state between threads.
class Stream {
 public:
  Stream(std::uint64_t seed, StreamId id);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int position_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mifade::random
