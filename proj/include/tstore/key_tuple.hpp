#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tstore/dictionary.hpp"
#include "tstore/element.hpp"

namespace tstore {

/// A stored column value: a dictionary key for managed columns, the
/// (possibly codec-encoded) element bytes for inline columns.
using KeyCell = std::variant<DictKey, std::string>;

/// Column kinds of the tuples a container holds, plus the bound on inline
/// element size used to size fixed records.
struct KeyTupleLayout {
  static constexpr std::size_t kDefaultMaxInline = 256;

  ColumnMask mask;
  std::size_t max_inline = kDefaultMaxInline;

  std::size_t arity() const { return mask.size(); }
  /// Largest encoded record: 4 bytes per key column, 2 + max_inline per
  /// inline column.
  std::size_t max_record_bytes() const;
};

class KeyTupleView;

/// Tuple of keys and inline bytes, shaped by a ColumnMask.
///
/// Encoded form: per column, a managed key as 4 big-endian bytes or an
/// inline value as a 2-byte big-endian length followed by the bytes.
class KeyTuple {
 public:
  KeyTuple() = default;
  explicit KeyTuple(std::vector<KeyCell> cells) : cells_(std::move(cells)) {}

  std::size_t size() const noexcept { return cells_.size(); }
  const KeyCell& operator[](std::size_t i) const { return cells_[i]; }
  KeyCell& operator[](std::size_t i) { return cells_[i]; }
  void push_back(KeyCell c) { cells_.push_back(std::move(c)); }

  std::size_t encoded_size() const;
  /// Writes the encoded form into `out`, which must hold encoded_size() bytes.
  void encode_to(std::span<std::uint8_t> out) const;
  std::string encode() const;

  bool conforms_to(const ColumnMask& mask) const;
  bool operator==(const KeyTupleView& view) const;
  friend bool operator==(const KeyTuple&, const KeyTuple&) = default;
  friend auto operator<=>(const KeyTuple& a, const KeyTuple& b) { return a.encode() <=> b.encode(); }

 private:
  std::vector<KeyCell> cells_;
};

/// Non-owning view over an encoded key tuple.
class KeyTupleView {
 public:
  KeyTupleView() = default;
  KeyTupleView(std::string_view bytes, const ColumnMask* mask) : bytes_(bytes), mask_(mask) {}

  std::size_t size() const { return mask_->size(); }
  bool is_key(std::size_t i) const { return mask_->managed(i); }
  DictKey key(std::size_t i) const;
  std::string_view inline_bytes(std::size_t i) const;
  std::string_view bytes() const { return bytes_; }

  KeyTuple to_owned() const;
  /// Throws FormatError when the bytes do not parse under the mask.
  static KeyTupleView checked(std::string_view bytes, const ColumnMask* mask);

 private:
  std::size_t offset_of(std::size_t column) const;

  std::string_view bytes_;
  const ColumnMask* mask_ = nullptr;
};

}  // namespace tstore
