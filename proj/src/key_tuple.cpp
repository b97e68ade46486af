#include "tstore/key_tuple.hpp"

#include <cstring>

#include "tstore/detail/byte_order.hpp"
#include "tstore/error.hpp"

namespace tstore {

std::size_t KeyTupleLayout::max_record_bytes() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) n += mask.managed(i) ? 4 : 2 + max_inline;
  return n;
}

std::size_t KeyTuple::encoded_size() const {
  std::size_t n = 0;
  for (const auto& c : cells_) {
    n += std::holds_alternative<DictKey>(c) ? 4 : 2 + std::get<std::string>(c).size();
  }
  return n;
}

void KeyTuple::encode_to(std::span<std::uint8_t> out) const {
  std::size_t pos = 0;
  for (const auto& c : cells_) {
    if (const auto* k = std::get_if<DictKey>(&c)) {
      detail::store_be32(out.data() + pos, k->value);
      pos += 4;
    } else {
      const auto& s = std::get<std::string>(c);
      out[pos] = static_cast<std::uint8_t>(s.size() >> 8);
      out[pos + 1] = static_cast<std::uint8_t>(s.size() & 0xFF);
      if (!s.empty()) std::memcpy(out.data() + pos + 2, s.data(), s.size());
      pos += 2 + s.size();
    }
  }
}

std::string KeyTuple::encode() const {
  std::string out(encoded_size(), '\0');
  encode_to(std::span(reinterpret_cast<std::uint8_t*>(out.data()), out.size()));
  return out;
}

bool KeyTuple::conforms_to(const ColumnMask& mask) const {
  if (cells_.size() != mask.size()) return false;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (std::holds_alternative<DictKey>(cells_[i]) != mask.managed(i)) return false;
  }
  return true;
}

bool KeyTuple::operator==(const KeyTupleView& view) const {
  if (cells_.size() != view.size()) return false;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (const auto* k = std::get_if<DictKey>(&cells_[i])) {
      if (!view.is_key(i) || view.key(i) != *k) return false;
    } else {
      if (view.is_key(i) || view.inline_bytes(i) != std::get<std::string>(cells_[i])) return false;
    }
  }
  return true;
}

std::size_t KeyTupleView::offset_of(std::size_t column) const {
  std::size_t pos = 0;
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes_.data());
  for (std::size_t i = 0; i < column; ++i) {
    pos += mask_->managed(i) ? 4 : 2 + ((std::size_t{p[pos]} << 8) | p[pos + 1]);
  }
  return pos;
}

DictKey KeyTupleView::key(std::size_t i) const {
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes_.data());
  return DictKey{detail::load_be32(p + offset_of(i))};
}

std::string_view KeyTupleView::inline_bytes(std::size_t i) const {
  const std::size_t off = offset_of(i);
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes_.data());
  const std::size_t len = (std::size_t{p[off]} << 8) | p[off + 1];
  return bytes_.substr(off + 2, len);
}

KeyTuple KeyTupleView::to_owned() const {
  std::vector<KeyCell> cells;
  cells.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (is_key(i)) {
      cells.emplace_back(key(i));
    } else {
      cells.emplace_back(std::string(inline_bytes(i)));
    }
  }
  return KeyTuple(std::move(cells));
}

KeyTupleView KeyTupleView::checked(std::string_view bytes, const ColumnMask* mask) {
  std::size_t pos = 0;
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data());
  for (std::size_t i = 0; i < mask->size(); ++i) {
    if (mask->managed(i)) {
      pos += 4;
    } else {
      if (pos + 2 > bytes.size()) throw FormatError("truncated key tuple");
      pos += 2 + ((std::size_t{p[pos]} << 8) | p[pos + 1]);
    }
    if (pos > bytes.size()) throw FormatError("truncated key tuple");
  }
  if (pos != bytes.size()) throw FormatError("trailing bytes after key tuple");
  return KeyTupleView(bytes, mask);
}

}  // namespace tstore
