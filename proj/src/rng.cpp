#include "hirsch/rng.hpp"

#include <cmath>
#include <numbers>

namespace hirsch {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> round_once(
    const std::array<std::uint32_t, 4>& c,
    const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t(hi) << 32) | lo;
  return static_cast<double>((bits >> 11) + 1) * 0x1p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    if (r != 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round_once(counter, key);
  }
  return counter;
}

std::array<std::uint32_t, 4> PhiloxRng::next_block() {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32), path_, stream_};
  ++block_;
  return philox4x32(counter, key_);
}

double PhiloxRng::uniform01() {
  const auto w = next_block();
  return to_unit(w[0], w[1]);
}

std::pair<double, double> PhiloxRng::uniform_pair() {
  const auto w = next_block();
  return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
}

std::pair<double, double> PhiloxRng::normal_pair() {
  const auto [u1, u2] = uniform_pair();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi_v<double> * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace hirsch
