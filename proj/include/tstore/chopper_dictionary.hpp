#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tstore/dictionary.hpp"

namespace tstore {

/// Dictionary over a table of fixed-size chunks that is allocated once, at
/// construction; no operation other than get() touches the heap afterwards.
///
/// Every chunk is one header byte followed by `payload` bytes. The header's
/// top bit flags a meta chunk, the low seven bits give the number of payload
/// bytes in use; 0xFF marks a free chunk. An element of L bytes occupies
/// max(1, ceil(L / payload)) data chunks. If it needs more than one, a meta
/// chunk lists the data chunk indices as big-endian 16-bit values; when one
/// meta chunk cannot hold them all, its last index names a continuation meta
/// chunk. The root chunk (single data chunk or first meta chunk) is the key.
///
/// Reference counts live in a per-slot counter array allocated with the
/// table; a nonzero count marks a root chunk.
///
/// comparisons() counts root chunks compared against a probe.
class ChopperDictionary final : public Dictionary {
 public:
  static constexpr std::size_t kDefaultSlots = 100;
  static constexpr std::size_t kDefaultPayload = 15;
  static constexpr std::uint8_t kFreeHeader = 0xFF;
  static constexpr std::uint8_t kMetaFlag = 0x80;

  explicit ChopperDictionary(std::size_t slot_count = kDefaultSlots, std::size_t payload = kDefaultPayload);

  DictKey insert(std::string_view elem) override;
  std::optional<DictKey> find(std::string_view elem) const override;
  std::string get(DictKey key) const override;
  std::uint32_t erase(DictKey key) override;
  std::uint32_t refcount(DictKey key) const override;

  std::size_t size() const override { return size_; }
  std::uint64_t stored_bytes() const override { return occupied() * (payload_ + 1); }
  std::uint64_t resident_bytes() const override {
    return slot_count_ * (payload_ + 1 + sizeof(std::uint32_t));
  }
  void for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const override;
  std::string_view name() const override { return "chopper"; }

  std::size_t slot_count() const noexcept { return slot_count_; }
  std::size_t payload() const noexcept { return payload_; }
  std::size_t free_slots() const noexcept { return free_; }
  std::size_t occupied() const noexcept { return slot_count_ - free_; }

  /// Byte length of a live element.
  std::size_t length(DictKey key) const;
  /// Copies a live element into `out` (which must hold length(key) bytes)
  /// without allocating; returns the number of bytes written.
  std::size_t copy_to(DictKey key, std::span<char> out) const;

  static std::size_t data_chunks(std::size_t length, std::size_t payload);
  static std::size_t meta_chunks(std::size_t length, std::size_t payload);
  /// Total chunks an element of `length` bytes occupies.
  static std::size_t chunks_needed(std::size_t length, std::size_t payload) {
    return data_chunks(length, payload) + meta_chunks(length, payload);
  }

  /// Verifies header validity, that every occupied chunk belongs to exactly
  /// one live element, and that occupied + free equals the slot count.
  bool check_invariants(std::string* why = nullptr) const;

 private:
  std::uint8_t* chunk(std::size_t i) { return table_.data() + i * (payload_ + 1); }
  const std::uint8_t* chunk(std::size_t i) const { return table_.data() + i * (payload_ + 1); }
  std::size_t indices_per_meta() const { return payload_ / 2; }
  void check_live(DictKey key) const;
  std::uint16_t take_free_slot(std::size_t& cursor);
  void release(std::size_t i);

  /// Visits data chunk payloads of the element rooted at `root` in order;
  /// stops early when `fn` returns false.
  template <typename Fn>
  void for_each_data(std::size_t root, Fn&& fn) const;
  /// Visits every chunk index (meta and data) of the element rooted at `root`.
  template <typename Fn>
  void for_each_chunk(std::size_t root, Fn&& fn) const;
  bool equals(std::size_t root, std::string_view elem) const;

  std::size_t slot_count_;
  std::size_t payload_;
  std::vector<std::uint8_t> table_;
  std::vector<std::uint32_t> refcounts_;
  std::size_t free_;
  std::size_t size_ = 0;
};

}  // namespace tstore
