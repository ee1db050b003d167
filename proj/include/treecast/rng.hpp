#pragma once

#include <array>
#include <cstdint>

namespace treecast {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Every draw is a pure function of (key, counter), so per-node draws do not
/// depend on traversal order or on how samples are split across streams.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr const char* kName = "philox4x32-10";
  static constexpr int kVersion = 1;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Draw purposes, stored in the second counter word.
enum class DrawPurpose : std::uint32_t { Transition = 0, Observation = 1, Root = 2 };

/// Uniform double in [0, 1) with 53 random bits.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t node, DrawPurpose purpose) noexcept;

/// Identifier written into output headers, e.g. "philox4x32-10/v1".
const char* rng_identifier() noexcept;

}  // namespace treecast
