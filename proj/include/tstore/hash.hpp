#pragma once

#include <cstdint>
#include <string_view>

namespace tstore {

inline constexpr std::uint32_t kFnv1aOffsetBasis = 0x811c9dc5u;
inline constexpr std::uint32_t kFnv1aPrime = 0x01000193u;

/// 32-bit FNV-1a over raw bytes. Seedless and byte-order independent, so
/// hashes written into device files agree across platforms.
constexpr std::uint32_t hash_bytes(std::string_view data) noexcept {
  std::uint32_t h = kFnv1aOffsetBasis;
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnv1aPrime;
  }
  return h;
}

}  // namespace tstore
