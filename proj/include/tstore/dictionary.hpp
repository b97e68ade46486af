#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace tstore {

/// Opaque handle to a dictionary entry. Valid from the insert that creates
/// the entry until the erase that drops its reference count to zero; handles
/// of dead entries may be reused.
struct DictKey {
  std::uint32_t value = 0;

  friend auto operator<=>(const DictKey&, const DictKey&) = default;
};

/// Reference-counting element dictionary. One writer at a time; concurrent
/// readers only while no writer is active.
class Dictionary {
 public:
  virtual ~Dictionary() = default;

  /// Adds one reference to `elem`, creating the entry if needed.
  virtual DictKey insert(std::string_view elem) = 0;
  virtual std::optional<DictKey> find(std::string_view elem) const = 0;
  /// Throws InvalidKeyError for dead or out-of-range keys.
  virtual std::string get(DictKey key) const = 0;
  /// Drops one reference and returns the remaining count; at zero the entry
  /// is removed and its storage reclaimed.
  virtual std::uint32_t erase(DictKey key) = 0;
  virtual std::uint32_t refcount(DictKey key) const = 0;

  /// Number of distinct live elements.
  virtual std::size_t size() const = 0;
  /// Payload bytes held, in the implementation's own representation.
  virtual std::uint64_t stored_bytes() const = 0;
  /// stored_bytes() plus the fixed per-node or per-slot bookkeeping of the
  /// implementation's layout. Used by compression reports.
  virtual std::uint64_t resident_bytes() const = 0;

  virtual void for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const = 0;

  virtual std::string_view name() const = 0;

  /// Cumulative element comparisons (implementation-defined unit, see each
  /// implementation) since construction.
  std::uint64_t comparisons() const noexcept { return comparisons_.load(std::memory_order_relaxed); }

 protected:
  void count_comparisons(std::uint64_t n = 1) const noexcept {
    comparisons_.fetch_add(n, std::memory_order_relaxed);
  }

 private:
  mutable std::atomic<std::uint64_t> comparisons_{0};
};

}  // namespace tstore
