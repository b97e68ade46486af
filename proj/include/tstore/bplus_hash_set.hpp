#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tstore/block_device.hpp"

namespace tstore {

/// (block index << 9) | byte offset of a value record.
using RecordAddress = std::uint32_t;

constexpr RecordAddress make_record_address(BlockId block, std::uint32_t offset) {
  return (block << 9) | offset;
}
constexpr BlockId record_block(RecordAddress a) { return a >> 9; }
constexpr std::uint32_t record_offset(RecordAddress a) { return a & 0x1FFu; }

/// Set of byte strings on a block device: a B+ tree keyed by the 32-bit
/// hash_bytes() of each value, whose leaf entries point at a linked chain of
/// the value records sharing that hash.
///
/// Tree nodes are single blocks with a fan-out of 63 (entries per leaf,
/// children per inner node); every non-root node holds at least 32. Value
/// records are packed into record pages; the part of a value beyond what
/// fits in its page spills into a chain of overflow blocks. Each record
/// carries a reference count for dictionary use. Layout details:
/// docs/device-format.md.
///
/// The set's metadata lives in one of the device's root slots.
class BPlusHashSet {
 public:
  static constexpr std::size_t kFanout = 63;
  static constexpr std::size_t kMinOccupancy = (kFanout + 1) / 2;
  static constexpr std::size_t kNodeHeader = 8;
  static constexpr std::size_t kPageHeader = 8;
  static constexpr std::size_t kRecordHeader = 18;
  static constexpr std::size_t kMaxInline = kBlockSize - kPageHeader - kRecordHeader;
  static constexpr std::size_t kOverflowPayload = kBlockSize - 8;

  /// Attaches to root slot `slot`, creating an empty tree if the slot is unused.
  BPlusHashSet(BlockDevice& device, std::size_t slot);

  struct InsertResult {
    RecordAddress address;
    bool inserted;
    std::uint32_t refcount;
  };

  /// Stores `value` unless a byte-equal value exists. With `add_reference`
  /// an existing record's reference count is incremented. Throws
  /// StorageFullError (leaving the set unchanged) when the device lacks the
  /// blocks the insert could need.
  InsertResult insert(std::string_view value, bool add_reference = false);
  std::optional<RecordAddress> find(std::string_view value) const;
  /// Unlinks and frees the record. Throws InvalidKeyError for dead addresses.
  void erase(RecordAddress address);

  std::string read(RecordAddress address) const;
  std::uint32_t refcount(RecordAddress address) const;
  void set_refcount(RecordAddress address, std::uint32_t refcount);

  std::size_t size() const { return device_->root_slot(slot_).count; }
  std::uint64_t stored_bytes() const { return device_->root_slot(slot_).bytes; }
  /// Tree height in levels; an empty set is a single leaf of height 1.
  std::uint32_t height() const { return device_->root_slot(slot_).height; }
  std::uint64_t version() const noexcept { return version_; }
  BlockDevice& device() const { return *device_; }

  /// Record addresses on the chain for `hash`, head first.
  std::vector<RecordAddress> chain(std::uint32_t hash) const;

  /// Forward iteration over all values in hash order.
  class Cursor {
   public:
    /// Returns false at the end; throws IterationInvalidatedError after a
    /// mutation of the set.
    bool next(RecordAddress& address, std::string& value);

   private:
    friend class BPlusHashSet;
    explicit Cursor(const BPlusHashSet& set);

    const BPlusHashSet* set_;
    std::uint64_t version_;
    BlockId leaf_ = 0;
    std::vector<RecordAddress> heads_;
    BlockId next_leaf_ = 0;
    std::size_t entry_ = 0;
    RecordAddress record_ = 0;
  };
  Cursor cursor() const { return Cursor(*this); }

  void for_each(const std::function<void(RecordAddress, std::string_view, std::uint32_t)>& fn) const;

  /// Walks the whole structure: key order and separator ranges, occupancy
  /// bounds, equal leaf depth, leaf chaining, chain hashes and tallies.
  bool check_invariants(std::string* why = nullptr) const;

 private:
  struct Node {
    bool leaf = true;
    BlockId next = 0;
    std::vector<std::uint32_t> keys;
    std::vector<std::uint32_t> vals;  // leaf: chain heads; inner: children
  };
  struct Step {
    BlockId block;
    Node node;
    std::size_t child;  // index followed (inner) or entry position (leaf)
  };
  struct Record {
    bool live = false;
    RecordAddress next = 0;
    std::uint32_t refcount = 0;
    std::uint16_t total_len = 0;
    std::uint16_t inline_len = 0;
    BlockId overflow = 0;
    std::string inline_bytes;
  };

  Node load(BlockId b) const;
  void store(BlockId b, const Node& n) const;
  std::vector<Step> descend(std::uint32_t hash) const;
  Record load_record(RecordAddress a, bool checked) const;
  void store_record_header(RecordAddress a, const Record& r) const;
  std::string record_value(const Record& r) const;
  bool record_equals(const Record& r, std::string_view value) const;
  RecordAddress write_record(std::string_view value, RecordAddress next);
  void free_record(RecordAddress a, const Record& r);
  void split_upwards(std::vector<Step>& path);
  void rebalance(std::vector<Step>& path, std::size_t level);
  RootSlot& meta() const { return device_->root_slot(slot_); }

  BlockDevice* device_;
  std::size_t slot_;
  std::uint64_t version_ = 0;
};

}  // namespace tstore
