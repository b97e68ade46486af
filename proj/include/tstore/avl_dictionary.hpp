#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tstore/dictionary.hpp"

namespace tstore {

/// AVL tree of whole elements with reference counts. Keys are node slot
/// indices and get() is a direct slot access. Rebalancing relinks nodes and
/// never moves values between slots; keys stay stable.
///
/// comparisons() counts three-way element comparisons.
class AvlDictionary final : public Dictionary {
 public:
  /// Fixed fields of one node in the resident size model: two 32-bit child
  /// handles, a 32-bit refcount, a 16-bit length and an 8-bit balance.
  static constexpr std::uint64_t kNodeOverhead = 4 + 4 + 4 + 2 + 1;

  DictKey insert(std::string_view elem) override;
  std::optional<DictKey> find(std::string_view elem) const override;
  std::string get(DictKey key) const override;
  std::uint32_t erase(DictKey key) override;
  std::uint32_t refcount(DictKey key) const override;

  std::size_t size() const override { return size_; }
  std::uint64_t stored_bytes() const override { return bytes_; }
  std::uint64_t resident_bytes() const override { return bytes_ + kNodeOverhead * size_; }
  void for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const override;
  std::string_view name() const override { return "avl"; }

  /// Height of the tree in nodes (0 when empty).
  int height() const { return height_of(root_); }

  /// Verifies ordering, stored heights, balance factors in {-1,0,1} and the
  /// size/byte tallies. Returns false and fills `why` on the first violation.
  bool check_invariants(std::string* why = nullptr) const;

 private:
  struct Node {
    std::string value;
    std::uint32_t refcount = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int8_t height = 1;
    bool live = false;
  };

  int height_of(std::int32_t n) const { return n < 0 ? 0 : nodes_[n].height; }
  int compare(std::string_view a, std::string_view b) const;
  void update(std::int32_t n);
  std::int32_t rotate_left(std::int32_t n);
  std::int32_t rotate_right(std::int32_t n);
  std::int32_t rebalance(std::int32_t n);
  std::int32_t insert_at(std::int32_t n, std::string_view elem, std::int32_t& out);
  std::int32_t remove_at(std::int32_t n, std::int32_t target);
  std::int32_t detach_min(std::int32_t n, std::int32_t& min);
  std::int32_t allocate(std::string_view elem);
  const Node& live_node(DictKey key) const;

  std::vector<Node> nodes_;
  std::vector<std::int32_t> free_;
  std::int32_t root_ = -1;
  std::size_t size_ = 0;
  std::uint64_t bytes_ = 0;
};

}  // namespace tstore
