#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <list>
#include <memory>
#include <string>
#include <vector>

#include "tstore/key_tuple.hpp"

namespace tstore {

/// Forward cursor over a container. next() throws IterationInvalidatedError
/// once the container has been mutated after the cursor was created.
class ContainerCursor {
 public:
  virtual ~ContainerCursor() = default;
  /// Stores the next tuple in `out` and returns true, or returns false at
  /// the end. `out` stays valid until the next call.
  virtual bool next(KeyTupleView& out) = 0;
};

/// Set of key tuples. Insertion order is not observable.
class TupleContainer {
 public:
  explicit TupleContainer(KeyTupleLayout layout) : layout_(std::move(layout)) {}
  virtual ~TupleContainer() = default;

  /// Returns false if an equal tuple is already stored.
  virtual bool insert(const KeyTuple& kt) = 0;
  /// Returns whether a tuple was removed.
  virtual bool erase(const KeyTuple& kt) = 0;
  virtual bool contains(const KeyTuple& kt) const = 0;
  virtual std::size_t size() const = 0;
  virtual std::unique_ptr<ContainerCursor> cursor() const = 0;
  virtual std::string_view name() const = 0;

  const KeyTupleLayout& layout() const noexcept { return layout_; }
  /// Incremented by every successful mutation.
  std::uint64_t version() const noexcept { return version_; }
  /// Cumulative key-tuple comparisons.
  std::uint64_t comparisons() const noexcept { return comparisons_.load(std::memory_order_relaxed); }

 protected:
  void bump_version() noexcept { ++version_; }
  void count_comparisons(std::uint64_t n = 1) const noexcept {
    comparisons_.fetch_add(n, std::memory_order_relaxed);
  }
  void check_shape(const KeyTuple& kt) const;

 private:
  KeyTupleLayout layout_;
  std::uint64_t version_ = 0;
  mutable std::atomic<std::uint64_t> comparisons_{0};
};

/// Fixed-capacity array of fixed-size records, allocated at construction.
/// Insert, erase and contains never touch the heap.
class StaticVectorContainer final : public TupleContainer {
 public:
  static constexpr std::size_t kDefaultCapacity = 76;

  explicit StaticVectorContainer(KeyTupleLayout layout, std::size_t capacity = kDefaultCapacity);

  bool insert(const KeyTuple& kt) override;
  bool erase(const KeyTuple& kt) override;
  bool contains(const KeyTuple& kt) const override;
  std::size_t size() const override { return size_; }
  std::unique_ptr<ContainerCursor> cursor() const override;
  std::string_view name() const override { return "static"; }

  std::size_t capacity() const noexcept { return capacity_; }

 private:
  friend class StaticVectorCursor;
  std::string_view record(std::size_t i) const;
  std::ptrdiff_t index_of(const KeyTuple& kt) const;

  std::size_t capacity_;
  std::size_t record_bytes_;
  std::size_t size_ = 0;
  std::vector<std::uint8_t> slots_;  // per slot: 2-byte length + record
};

/// Growable doubly linked list of encoded tuples.
class ListContainer final : public TupleContainer {
 public:
  explicit ListContainer(KeyTupleLayout layout) : TupleContainer(std::move(layout)) {}

  bool insert(const KeyTuple& kt) override;
  bool erase(const KeyTuple& kt) override;
  bool contains(const KeyTuple& kt) const override;
  std::size_t size() const override { return items_.size(); }
  std::unique_ptr<ContainerCursor> cursor() const override;
  std::string_view name() const override { return "list"; }

 private:
  friend class ListCursor;
  std::list<std::string>::const_iterator locate(const KeyTuple& kt) const;

  std::list<std::string> items_;
};

}  // namespace tstore
