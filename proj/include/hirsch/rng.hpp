#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace hirsch {

// Philox 4x32 block cipher with 10 rounds. Maps a 128-bit counter and a
// 64-bit key to four 32-bit words. Counter-based generation lets any block
// be produced without stepping through its predecessors, so per-path
// results do not depend on thread scheduling.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Stream identifiers keep independent consumers of the same seed from
// overlapping.
inline constexpr std::uint32_t kStreamWalk = 0;
inline constexpr std::uint32_t kStreamInitialSample = 1;
inline constexpr std::uint32_t kStreamBootstrap = 2;
inline constexpr std::uint32_t kStreamGeneric = 3;

// Deterministic per-path generator: the counter is (block, path, stream)
// and the key is the seed. Each draw advances the block index only.
class PhiloxRng {
 public:
  PhiloxRng(std::uint64_t seed, std::uint32_t stream, std::uint32_t path)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        path_(path) {}

  // One uniform double in (0, 1].
  double uniform01();

  // Two independent uniforms in (0, 1] from a single block.
  std::pair<double, double> uniform_pair();

  // A standard normal pair via the Box-Muller transform, one block.
  std::pair<double, double> normal_pair();

  std::uint64_t blocks_used() const { return block_; }

 private:
  std::array<std::uint32_t, 4> next_block();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint32_t path_;
  std::uint64_t block_ = 0;
};

}  // namespace hirsch
