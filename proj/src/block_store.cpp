#include "tstore/block_store.hpp"

namespace tstore {

DictKey BlockDictionary::insert(std::string_view elem) {
  count_comparisons();
  return DictKey{set_.insert(elem, true).address};
}

std::optional<DictKey> BlockDictionary::find(std::string_view elem) const {
  count_comparisons();
  if (auto a = set_.find(elem)) return DictKey{*a};
  return std::nullopt;
}

std::string BlockDictionary::get(DictKey key) const { return set_.read(key.value); }

std::uint32_t BlockDictionary::erase(DictKey key) {
  const std::uint32_t rc = set_.refcount(key.value);
  if (rc > 1) {
    set_.set_refcount(key.value, rc - 1);
    return rc - 1;
  }
  set_.erase(key.value);
  return 0;
}

std::uint32_t BlockDictionary::refcount(DictKey key) const { return set_.refcount(key.value); }

void BlockDictionary::for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const {
  set_.for_each([&](RecordAddress a, std::string_view v, std::uint32_t rc) { fn(DictKey{a}, v, rc); });
}

bool BlockContainer::insert(const KeyTuple& kt) {
  check_shape(kt);
  count_comparisons();
  const bool inserted = set_.insert(kt.encode()).inserted;
  if (inserted) bump_version();
  return inserted;
}

bool BlockContainer::erase(const KeyTuple& kt) {
  check_shape(kt);
  count_comparisons();
  const auto a = set_.find(kt.encode());
  if (!a) return false;
  set_.erase(*a);
  bump_version();
  return true;
}

bool BlockContainer::contains(const KeyTuple& kt) const {
  check_shape(kt);
  count_comparisons();
  return set_.find(kt.encode()).has_value();
}

namespace {

class BlockCursor final : public ContainerCursor {
 public:
  BlockCursor(const BPlusHashSet& set, const ColumnMask& mask) : cursor_(set.cursor()), mask_(mask) {}

  bool next(KeyTupleView& out) override {
    RecordAddress a;
    if (!cursor_.next(a, value_)) return false;
    out = KeyTupleView::checked(value_, &mask_);
    return true;
  }

 private:
  BPlusHashSet::Cursor cursor_;
  const ColumnMask& mask_;
  std::string value_;
};

}  // namespace

std::unique_ptr<ContainerCursor> BlockContainer::cursor() const {
  return std::make_unique<BlockCursor>(set_, layout().mask);
}

}  // namespace tstore
