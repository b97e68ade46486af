#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tstore/dictionary.hpp"

namespace tstore {

/// Radix tree dictionary with path compression. Each node holds an edge label;
/// an element is the concatenation of labels on the path from the root to its
/// terminal node, and the terminal node's slot index is the element's key.
///
/// An edge split gives the upper half to the new node and existing terminal
/// nodes keep their slot. A collapsing chain loses its non-terminal node.
/// Keys stay valid for the element's lifetime.
///
/// comparisons() counts edge labels compared against the probe.
class PrescillaDictionary final : public Dictionary {
 public:
  /// Fixed fields of one node in the resident size model: parent, first
  /// child and next sibling handles (32-bit each), a 32-bit refcount and a
  /// 16-bit label length.
  static constexpr std::uint64_t kNodeOverhead = 4 + 4 + 4 + 4 + 2;

  PrescillaDictionary();

  DictKey insert(std::string_view elem) override;
  std::optional<DictKey> find(std::string_view elem) const override;
  std::string get(DictKey key) const override;
  std::uint32_t erase(DictKey key) override;
  std::uint32_t refcount(DictKey key) const override;

  std::size_t size() const override { return size_; }
  std::uint64_t stored_bytes() const override { return label_bytes_; }
  std::uint64_t resident_bytes() const override { return label_bytes_ + kNodeOverhead * node_count_; }
  void for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const override;
  std::string_view name() const override { return "prescilla"; }

  /// Live nodes including the root.
  std::size_t node_count() const { return node_count_; }

  /// Verifies parent/child links, sibling order, path compression (every
  /// non-root node is terminal or has at least two children) and tallies.
  bool check_invariants(std::string* why = nullptr) const;

 private:
  static constexpr std::int32_t kRoot = 0;

  struct Node {
    std::string label;
    std::uint32_t refcount = 0;  // > 0 marks a terminal node
    std::int32_t parent = -1;
    std::int32_t first_child = -1;
    std::int32_t next_sibling = -1;
    bool live = false;
  };

  std::int32_t allocate(std::string_view label, std::int32_t parent);
  void release(std::int32_t n);
  std::int32_t child_starting_with(std::int32_t n, char c) const;
  void link_child(std::int32_t parent, std::int32_t child);
  void replace_child(std::int32_t parent, std::int32_t old_child, std::int32_t new_child);
  void unlink_child(std::int32_t parent, std::int32_t child);
  std::size_t child_count(std::int32_t n) const;
  void merge_into_only_child(std::int32_t n);
  const Node& terminal(DictKey key) const;

  std::vector<Node> nodes_;
  std::vector<std::int32_t> free_;
  std::size_t size_ = 0;
  std::size_t node_count_ = 1;
  std::uint64_t label_bytes_ = 0;
};

}  // namespace tstore
