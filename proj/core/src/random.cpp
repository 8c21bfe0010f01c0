#include "mifade/random.hpp"

#include <cmath>
#include <numbers>

#include "mifade/error.hpp"

namespace mifade::random {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Stream::Stream(std::uint64_t seed, StreamId id)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, static_cast<std::uint32_t>(id.draw), static_cast<std::uint32_t>(id.draw >> 32),
               (id.link << 16) | (id.band & 0xFFFFu)} {
  if (id.link > 0xFFFFu || id.band > 0xFFFFu) {
    throw DomainError("random stream ids are limited to 16 bits for link and band");
  }
}

void Stream::refill() {
  buffer_ = philox4x32_10(counter_, key_);
  ++counter_[0];
  position_ = 0;
}

std::uint64_t Stream::next_u64() {
  if (position_ > 2) refill();
  const std::uint64_t hi = buffer_[static_cast<std::size_t>(position_)];
  const std::uint64_t lo = buffer_[static_cast<std::size_t>(position_ + 1)];
  position_ += 2;
  return (hi << 32) | lo;
}

double Stream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace mifade::random
