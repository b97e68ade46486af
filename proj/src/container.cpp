#include "tstore/container.hpp"

#include <cstring>

#include "tstore/error.hpp"

namespace tstore {

void TupleContainer::check_shape(const KeyTuple& kt) const {
  if (!kt.conforms_to(layout_.mask)) {
    throw UsageError("key tuple does not match the container's column mask " + layout_.mask.to_string());
  }
}

// --- static vector ----------------------------------------------------------

StaticVectorContainer::StaticVectorContainer(KeyTupleLayout layout, std::size_t capacity)
    : TupleContainer(std::move(layout)), capacity_(capacity), record_bytes_(this->layout().max_record_bytes()) {
  if (capacity_ == 0) throw UsageError("static vector capacity must be positive");
  slots_.assign(capacity_ * (2 + record_bytes_), 0);
}

std::string_view StaticVectorContainer::record(std::size_t i) const {
  const std::uint8_t* p = slots_.data() + i * (2 + record_bytes_);
  const std::size_t len = (std::size_t{p[0]} << 8) | p[1];
  return {reinterpret_cast<const char*>(p + 2), len};
}

std::ptrdiff_t StaticVectorContainer::index_of(const KeyTuple& kt) const {
  for (std::size_t i = 0; i < size_; ++i) {
    count_comparisons();
    if (kt == KeyTupleView(record(i), &layout().mask)) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

bool StaticVectorContainer::insert(const KeyTuple& kt) {
  check_shape(kt);
  if (index_of(kt) >= 0) return false;
  if (size_ == capacity_) {
    throw CapacityError("static vector full (" + std::to_string(capacity_) + " tuples)");
  }
  const std::size_t n = kt.encoded_size();
  if (n > record_bytes_) {
    throw CapacityError("key tuple of " + std::to_string(n) + " bytes exceeds the " +
                        std::to_string(record_bytes_) + "-byte record size");
  }
  std::uint8_t* p = slots_.data() + size_ * (2 + record_bytes_);
  p[0] = static_cast<std::uint8_t>(n >> 8);
  p[1] = static_cast<std::uint8_t>(n & 0xFF);
  kt.encode_to(std::span(p + 2, n));
  ++size_;
  bump_version();
  return true;
}

bool StaticVectorContainer::erase(const KeyTuple& kt) {
  check_shape(kt);
  const auto i = index_of(kt);
  if (i < 0) return false;
  const std::size_t stride = 2 + record_bytes_;
  --size_;
  if (static_cast<std::size_t>(i) != size_) {
    std::memcpy(slots_.data() + i * stride, slots_.data() + size_ * stride, stride);
  }
  bump_version();
  return true;
}

bool StaticVectorContainer::contains(const KeyTuple& kt) const {
  check_shape(kt);
  return index_of(kt) >= 0;
}

class StaticVectorCursor final : public ContainerCursor {
 public:
  explicit StaticVectorCursor(const StaticVectorContainer& c) : c_(c), version_(c.version()) {}

  bool next(KeyTupleView& out) override {
    if (c_.version() != version_) throw IterationInvalidatedError("static vector mutated during iteration");
    if (i_ >= c_.size_) return false;
    out = KeyTupleView(c_.record(i_++), &c_.layout().mask);
    return true;
  }

 private:
  const StaticVectorContainer& c_;
  std::uint64_t version_;
  std::size_t i_ = 0;
};

std::unique_ptr<ContainerCursor> StaticVectorContainer::cursor() const {
  return std::make_unique<StaticVectorCursor>(*this);
}

// --- list --------------------------------------------------------------------

std::list<std::string>::const_iterator ListContainer::locate(const KeyTuple& kt) const {
  for (auto it = items_.begin(); it != items_.end(); ++it) {
    count_comparisons();
    if (kt == KeyTupleView(*it, &layout().mask)) return it;
  }
  return items_.end();
}

bool ListContainer::insert(const KeyTuple& kt) {
  check_shape(kt);
  if (locate(kt) != items_.end()) return false;
  items_.push_back(kt.encode());
  bump_version();
  return true;
}

bool ListContainer::erase(const KeyTuple& kt) {
  check_shape(kt);
  const auto it = locate(kt);
  if (it == items_.end()) return false;
  items_.erase(it);
  bump_version();
  return true;
}

bool ListContainer::contains(const KeyTuple& kt) const {
  check_shape(kt);
  return locate(kt) != items_.end();
}

class ListCursor final : public ContainerCursor {
 public:
  explicit ListCursor(const ListContainer& c) : c_(c), version_(c.version()), it_(c.items_.begin()) {}

  bool next(KeyTupleView& out) override {
    if (c_.version() != version_) throw IterationInvalidatedError("list mutated during iteration");
    if (it_ == c_.items_.end()) return false;
    out = KeyTupleView(*it_++, &c_.layout().mask);
    return true;
  }

 private:
  const ListContainer& c_;
  std::uint64_t version_;
  std::list<std::string>::const_iterator it_;
};

std::unique_ptr<ContainerCursor> ListContainer::cursor() const { return std::make_unique<ListCursor>(*this); }

}  // namespace tstore
