#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "tstore/bplus_hash_set.hpp"
#include "tstore/container.hpp"
#include "tstore/dictionary.hpp"

namespace tstore {

/// Root slots used by a block-backed store.
inline constexpr std::size_t kDictionarySlot = 0;
inline constexpr std::size_t kContainerSlot = 1;
inline constexpr std::size_t kConfigSlot = 2;

/// Persistent dictionary: a BPlusHashSet whose record addresses are the keys
/// and whose record reference counts are the dictionary counts.
/// comparisons() counts hash-set probes.
class BlockDictionary final : public Dictionary {
 public:
  explicit BlockDictionary(BlockDevice& device, std::size_t slot = kDictionarySlot) : set_(device, slot) {}

  DictKey insert(std::string_view elem) override;
  std::optional<DictKey> find(std::string_view elem) const override;
  std::string get(DictKey key) const override;
  std::uint32_t erase(DictKey key) override;
  std::uint32_t refcount(DictKey key) const override;

  std::size_t size() const override { return set_.size(); }
  std::uint64_t stored_bytes() const override { return set_.stored_bytes(); }
  /// Payload plus one record header per value.
  std::uint64_t resident_bytes() const override {
    return set_.stored_bytes() + BPlusHashSet::kRecordHeader * set_.size();
  }
  void for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const override;
  std::string_view name() const override { return "block"; }

  const BPlusHashSet& set() const noexcept { return set_; }

 private:
  BPlusHashSet set_;
};

/// Persistent tuple container: encoded key tuples as values of a BPlusHashSet.
class BlockContainer final : public TupleContainer {
 public:
  BlockContainer(KeyTupleLayout layout, BlockDevice& device, std::size_t slot = kContainerSlot)
      : TupleContainer(std::move(layout)), set_(device, slot) {}

  bool insert(const KeyTuple& kt) override;
  bool erase(const KeyTuple& kt) override;
  bool contains(const KeyTuple& kt) const override;
  std::size_t size() const override { return set_.size(); }
  std::unique_ptr<ContainerCursor> cursor() const override;
  std::string_view name() const override { return "block"; }

  const BPlusHashSet& set() const noexcept { return set_; }

 private:
  BPlusHashSet set_;
};

}  // namespace tstore
