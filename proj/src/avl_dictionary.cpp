#include "tstore/avl_dictionary.hpp"

#include <algorithm>
#include <cstdlib>

#include "tstore/error.hpp"

namespace tstore {

int AvlDictionary::compare(std::string_view a, std::string_view b) const {
  count_comparisons();
  const int c = a.compare(b);
  return (c > 0) - (c < 0);
}

void AvlDictionary::update(std::int32_t n) {
  nodes_[n].height = static_cast<std::int8_t>(
      1 + std::max(height_of(nodes_[n].left), height_of(nodes_[n].right)));
}

std::int32_t AvlDictionary::rotate_left(std::int32_t n) {
  const std::int32_t r = nodes_[n].right;
  nodes_[n].right = nodes_[r].left;
  nodes_[r].left = n;
  update(n);
  update(r);
  return r;
}

std::int32_t AvlDictionary::rotate_right(std::int32_t n) {
  const std::int32_t l = nodes_[n].left;
  nodes_[n].left = nodes_[l].right;
  nodes_[l].right = n;
  update(n);
  update(l);
  return l;
}

std::int32_t AvlDictionary::rebalance(std::int32_t n) {
  update(n);
  const int balance = height_of(nodes_[n].left) - height_of(nodes_[n].right);
  if (balance > 1) {
    const std::int32_t l = nodes_[n].left;
    if (height_of(nodes_[l].left) < height_of(nodes_[l].right)) nodes_[n].left = rotate_left(l);
    return rotate_right(n);
  }
  if (balance < -1) {
    const std::int32_t r = nodes_[n].right;
    if (height_of(nodes_[r].right) < height_of(nodes_[r].left)) nodes_[n].right = rotate_right(r);
    return rotate_left(n);
  }
  return n;
}

std::int32_t AvlDictionary::allocate(std::string_view elem) {
  std::int32_t n;
  if (!free_.empty()) {
    n = free_.back();
    free_.pop_back();
  } else {
    n = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[n] = Node{std::string(elem), 1, -1, -1, 1, true};
  ++size_;
  bytes_ += elem.size();
  return n;
}

std::int32_t AvlDictionary::insert_at(std::int32_t n, std::string_view elem, std::int32_t& out) {
  if (n < 0) {
    out = allocate(elem);
    return out;
  }
  const int c = compare(elem, nodes_[n].value);
  if (c == 0) {
    ++nodes_[n].refcount;
    out = n;
    return n;
  }
  if (c < 0) {
    const std::int32_t l = insert_at(nodes_[n].left, elem, out);
    nodes_[n].left = l;
  } else {
    const std::int32_t r = insert_at(nodes_[n].right, elem, out);
    nodes_[n].right = r;
  }
  return rebalance(n);
}

DictKey AvlDictionary::insert(std::string_view elem) {
  std::int32_t out = -1;
  root_ = insert_at(root_, elem, out);
  return DictKey{static_cast<std::uint32_t>(out)};
}

std::optional<DictKey> AvlDictionary::find(std::string_view elem) const {
  std::int32_t n = root_;
  while (n >= 0) {
    const int c = compare(elem, nodes_[n].value);
    if (c == 0) return DictKey{static_cast<std::uint32_t>(n)};
    n = c < 0 ? nodes_[n].left : nodes_[n].right;
  }
  return std::nullopt;
}

const AvlDictionary::Node& AvlDictionary::live_node(DictKey key) const {
  if (key.value >= nodes_.size() || !nodes_[key.value].live) {
    throw InvalidKeyError("avl dictionary: dead or unknown key " + std::to_string(key.value));
  }
  return nodes_[key.value];
}

std::string AvlDictionary::get(DictKey key) const { return live_node(key).value; }

std::uint32_t AvlDictionary::refcount(DictKey key) const { return live_node(key).refcount; }

std::int32_t AvlDictionary::detach_min(std::int32_t n, std::int32_t& min) {
  if (nodes_[n].left < 0) {
    min = n;
    return nodes_[n].right;
  }
  const std::int32_t l = detach_min(nodes_[n].left, min);
  nodes_[n].left = l;
  return rebalance(n);
}

std::int32_t AvlDictionary::remove_at(std::int32_t n, std::int32_t target) {
  if (n != target) {
    if (compare(nodes_[target].value, nodes_[n].value) < 0) {
      const std::int32_t l = remove_at(nodes_[n].left, target);
      nodes_[n].left = l;
    } else {
      const std::int32_t r = remove_at(nodes_[n].right, target);
      nodes_[n].right = r;
    }
    return rebalance(n);
  }
  const std::int32_t l = nodes_[n].left, r = nodes_[n].right;
  if (l < 0) return r;
  if (r < 0) return l;
  std::int32_t successor = -1;
  const std::int32_t rest = detach_min(r, successor);
  nodes_[successor].left = l;
  nodes_[successor].right = rest;
  return rebalance(successor);
}

std::uint32_t AvlDictionary::erase(DictKey key) {
  live_node(key);
  Node& node = nodes_[key.value];
  if (--node.refcount > 0) return node.refcount;
  const auto target = static_cast<std::int32_t>(key.value);
  root_ = remove_at(root_, target);
  --size_;
  bytes_ -= nodes_[target].value.size();
  nodes_[target] = Node{};
  free_.push_back(target);
  return 0;
}

void AvlDictionary::for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].live) fn(DictKey{static_cast<std::uint32_t>(i)}, nodes_[i].value, nodes_[i].refcount);
  }
}

bool AvlDictionary::check_invariants(std::string* why) const {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::size_t count = 0;
  std::uint64_t bytes = 0;
  std::string error;
  // Returns height, or -1 on violation. lo/hi bound the subtree's values.
  std::function<int(std::int32_t, const std::string*, const std::string*)> walk =
      [&](std::int32_t n, const std::string* lo, const std::string* hi) -> int {
    if (n < 0) return 0;
    const Node& node = nodes_[n];
    if (!node.live || node.refcount == 0) {
      error = "reachable node " + std::to_string(n) + " is not live";
      return -1;
    }
    if ((lo && node.value <= *lo) || (hi && node.value >= *hi)) {
      error = "ordering violated at node " + std::to_string(n);
      return -1;
    }
    ++count;
    bytes += node.value.size();
    const int hl = walk(node.left, lo, &node.value);
    if (hl < 0) return -1;
    const int hr = walk(node.right, &node.value, hi);
    if (hr < 0) return -1;
    if (std::abs(hl - hr) > 1) {
      error = "balance factor " + std::to_string(hl - hr) + " at node " + std::to_string(n);
      return -1;
    }
    if (node.height != 1 + std::max(hl, hr)) {
      error = "stale height at node " + std::to_string(n);
      return -1;
    }
    return node.height;
  };
  if (walk(root_, nullptr, nullptr) < 0) return fail(error);
  if (count != size_) return fail("size tally " + std::to_string(size_) + " but " + std::to_string(count) + " nodes reachable");
  if (bytes != bytes_) return fail("byte tally mismatch");
  return true;
}

}  // namespace tstore
