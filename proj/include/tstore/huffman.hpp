#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tstore {

inline constexpr std::size_t kAlphabetSize = 128;

/// Occurrence counts indexed by ASCII code.
using SymbolFrequencies = std::array<std::uint64_t, kAlphabetSize>;

/// Counts the symbols of `text` into `freqs`. Non-ASCII bytes are ignored.
void accumulate_frequencies(SymbolFrequencies& freqs, std::string_view text);

/// Result of encoding one element. Bits are packed MSB-first; pad bits in the
/// last byte are zero.
struct EncodedElement {
  std::uint32_t bit_length = 0;
  std::vector<std::uint8_t> bits;

  friend bool operator==(const EncodedElement&, const EncodedElement&) = default;
};

/// Self-delimiting byte form of an encoded element, used wherever encoded
/// elements are stored as plain byte strings (dictionaries, containers).
///
/// Layout: code bits MSB-first, then p zero bits, then a 3-bit trailer holding
/// p, padding the total to a whole number of bytes. The empty element
/// packs to the empty string. Elements sharing a plain-text prefix share a
/// packed byte prefix.
std::string pack(const EncodedElement& enc);
EncodedElement unpack(std::string_view packed);

struct HuffmanCode {
  std::uint8_t length = 0;  // 0 = symbol not in the tree
  std::uint64_t bits = 0;   // right-aligned, most significant bit first
};

/// Canonical prefix code over 7-bit ASCII. Immutable once built; encode and
/// decode are safe to call concurrently.
class HuffmanTree {
 public:
  /// Builds an optimal code for `freqs` after raising zero counts to one, so
  /// every ASCII symbol stays encodable. Needs at least two nonzero counts.
  static HuffmanTree build(const SymbolFrequencies& freqs);

  /// Builds the canonical tree for the given code lengths (0 = symbol absent).
  /// The lengths must describe a full binary tree with at least two leaves.
  static HuffmanTree from_code_lengths(std::span<const std::uint8_t, kAlphabetSize> lengths);

  /// Reads the succinct form written by serialize_succinct().
  static HuffmanTree deserialize(std::span<const std::uint8_t> bytes);

  /// Header (9 bytes) + balanced-parentheses structure (2 bits per node)
  /// + one byte per leaf symbol in left-to-right leaf order.
  std::vector<std::uint8_t> serialize_succinct() const;

  EncodedElement encode(std::string_view plain) const;
  std::string decode(const EncodedElement& enc) const;

  /// encode() followed by pack(), and the inverse.
  std::string encode_packed(std::string_view plain) const;
  std::string decode_packed(std::string_view packed) const;

  /// 8 * |plain| minus the encoded bit length; negative when the element is
  /// made of rare symbols.
  std::int64_t saved_bits(std::string_view plain) const;

  const HuffmanCode& code(std::uint8_t symbol) const { return codes_.at(symbol); }
  const std::array<std::uint8_t, kAlphabetSize>& code_lengths() const { return lengths_; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  /// Symbols in left-to-right leaf order.
  const std::vector<std::uint8_t>& leaves() const noexcept { return leaves_; }
  std::size_t max_code_length() const noexcept;

  /// Sum over symbols of count * code length.
  std::uint64_t weighted_length(const SymbolFrequencies& freqs) const;

  friend bool operator==(const HuffmanTree& a, const HuffmanTree& b) {
    return a.lengths_ == b.lengths_;
  }

 private:
  HuffmanTree() = default;
  void assign_canonical_codes();

  std::array<std::uint8_t, kAlphabetSize> lengths_{};
  std::array<HuffmanCode, kAlphabetSize> codes_{};
  std::vector<std::uint8_t> leaves_;
  // Decoding trie: child[bit] >= 0 is an inner node index, < 0 is ~symbol.
  std::vector<std::array<std::int32_t, 2>> nodes_;
};

/// Magic bytes and version of the succinct tree format.
inline constexpr std::array<std::uint8_t, 4> kTreeMagic = {'T', 'S', 'H', 'T'};
inline constexpr std::uint8_t kTreeFormatVersion = 1;
inline constexpr std::size_t kTreeHeaderBytes = 9;

/// Frequency table bundled with the library, counted over the synthetic
/// corpus in data/ (see tools/).
const SymbolFrequencies& default_frequencies();

/// Tree built from default_frequencies(); constructed once.
const HuffmanTree& default_tree();

}  // namespace tstore
