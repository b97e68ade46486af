#include "tstore/prescilla_dictionary.hpp"

#include <algorithm>
#include <set>

#include "tstore/error.hpp"

namespace tstore {

namespace {

std::size_t common_prefix(std::string_view a, std::string_view b) {
  const auto n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

inline unsigned char first_byte(const std::string& s) { return static_cast<unsigned char>(s[0]); }

}  // namespace

PrescillaDictionary::PrescillaDictionary() {
  nodes_.emplace_back();
  nodes_[kRoot].live = true;
}

std::int32_t PrescillaDictionary::allocate(std::string_view label, std::int32_t parent) {
  std::int32_t n;
  if (!free_.empty()) {
    n = free_.back();
    free_.pop_back();
  } else {
    n = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[n] = Node{std::string(label), 0, parent, -1, -1, true};
  ++node_count_;
  label_bytes_ += label.size();
  return n;
}

void PrescillaDictionary::release(std::int32_t n) {
  label_bytes_ -= nodes_[n].label.size();
  --node_count_;
  nodes_[n] = Node{};
  free_.push_back(n);
}

std::int32_t PrescillaDictionary::child_starting_with(std::int32_t n, char c) const {
  for (std::int32_t ch = nodes_[n].first_child; ch >= 0; ch = nodes_[ch].next_sibling) {
    const auto b = first_byte(nodes_[ch].label);
    if (b == static_cast<unsigned char>(c)) return ch;
    if (b > static_cast<unsigned char>(c)) break;
  }
  return -1;
}

void PrescillaDictionary::link_child(std::int32_t parent, std::int32_t child) {
  const auto b = first_byte(nodes_[child].label);
  std::int32_t* slot = &nodes_[parent].first_child;
  while (*slot >= 0 && first_byte(nodes_[*slot].label) < b) slot = &nodes_[*slot].next_sibling;
  nodes_[child].next_sibling = *slot;
  nodes_[child].parent = parent;
  *slot = child;
}

void PrescillaDictionary::replace_child(std::int32_t parent, std::int32_t old_child, std::int32_t new_child) {
  std::int32_t* slot = &nodes_[parent].first_child;
  while (*slot != old_child) slot = &nodes_[*slot].next_sibling;
  nodes_[new_child].next_sibling = nodes_[old_child].next_sibling;
  nodes_[new_child].parent = parent;
  *slot = new_child;
}

void PrescillaDictionary::unlink_child(std::int32_t parent, std::int32_t child) {
  std::int32_t* slot = &nodes_[parent].first_child;
  while (*slot != child) slot = &nodes_[*slot].next_sibling;
  *slot = nodes_[child].next_sibling;
}

std::size_t PrescillaDictionary::child_count(std::int32_t n) const {
  std::size_t k = 0;
  for (std::int32_t ch = nodes_[n].first_child; ch >= 0; ch = nodes_[ch].next_sibling) ++k;
  return k;
}

DictKey PrescillaDictionary::insert(std::string_view elem) {
  std::int32_t n = kRoot;
  std::size_t pos = 0;
  for (;;) {
    if (pos == elem.size()) break;
    const std::int32_t c = child_starting_with(n, elem[pos]);
    if (c < 0) {
      const std::int32_t leaf = allocate(elem.substr(pos), n);
      link_child(n, leaf);
      n = leaf;
      break;
    }
    count_comparisons();
    const std::string_view rest = elem.substr(pos);
    const std::size_t k = common_prefix(nodes_[c].label, rest);
    if (k == nodes_[c].label.size()) {
      n = c;
      pos += k;
      continue;
    }
    // Split c's edge at k; the new node becomes c's parent.
    const std::string head = nodes_[c].label.substr(0, k);
    const std::int32_t mid = allocate(head, n);
    replace_child(n, c, mid);
    label_bytes_ -= k;
    nodes_[c].label.erase(0, k);
    nodes_[c].next_sibling = -1;
    nodes_[c].parent = mid;
    nodes_[mid].first_child = c;
    pos += k;
    if (pos == elem.size()) {
      n = mid;
    } else {
      const std::int32_t leaf = allocate(elem.substr(pos), mid);
      link_child(mid, leaf);
      n = leaf;
    }
    break;
  }
  if (nodes_[n].refcount++ == 0) ++size_;
  return DictKey{static_cast<std::uint32_t>(n)};
}

std::optional<DictKey> PrescillaDictionary::find(std::string_view elem) const {
  std::int32_t n = kRoot;
  std::size_t pos = 0;
  while (pos < elem.size()) {
    const std::int32_t c = child_starting_with(n, elem[pos]);
    if (c < 0) return std::nullopt;
    count_comparisons();
    const std::string& label = nodes_[c].label;
    if (elem.size() - pos < label.size() || elem.compare(pos, label.size(), label) != 0) return std::nullopt;
    pos += label.size();
    n = c;
  }
  if (nodes_[n].refcount == 0) return std::nullopt;
  return DictKey{static_cast<std::uint32_t>(n)};
}

const PrescillaDictionary::Node& PrescillaDictionary::terminal(DictKey key) const {
  if (key.value >= nodes_.size() || !nodes_[key.value].live || nodes_[key.value].refcount == 0) {
    throw InvalidKeyError("prescilla dictionary: dead or unknown key " + std::to_string(key.value));
  }
  return nodes_[key.value];
}

std::string PrescillaDictionary::get(DictKey key) const {
  terminal(key);
  std::vector<std::int32_t> path;
  std::size_t total = 0;
  for (auto n = static_cast<std::int32_t>(key.value); n != kRoot; n = nodes_[n].parent) {
    path.push_back(n);
    total += nodes_[n].label.size();
  }
  std::string out;
  out.reserve(total);
  for (auto it = path.rbegin(); it != path.rend(); ++it) out += nodes_[*it].label;
  return out;
}

std::uint32_t PrescillaDictionary::refcount(DictKey key) const { return terminal(key).refcount; }

void PrescillaDictionary::merge_into_only_child(std::int32_t n) {
  const std::int32_t child = nodes_[n].first_child;
  const std::int32_t parent = nodes_[n].parent;
  label_bytes_ += nodes_[n].label.size();
  nodes_[child].label.insert(0, nodes_[n].label);
  replace_child(parent, n, child);
  release(n);
}

std::uint32_t PrescillaDictionary::erase(DictKey key) {
  terminal(key);
  const auto n = static_cast<std::int32_t>(key.value);
  if (--nodes_[n].refcount > 0) return nodes_[n].refcount;
  --size_;
  if (n == kRoot) return 0;
  switch (child_count(n)) {
    case 0: {
      const std::int32_t parent = nodes_[n].parent;
      unlink_child(parent, n);
      release(n);
      if (parent != kRoot && nodes_[parent].refcount == 0 && child_count(parent) == 1) {
        merge_into_only_child(parent);
      }
      break;
    }
    case 1:
      merge_into_only_child(n);
      break;
    default:
      break;
  }
  return 0;
}

void PrescillaDictionary::for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].live && nodes_[i].refcount > 0) {
      const DictKey k{static_cast<std::uint32_t>(i)};
      fn(k, get(k), nodes_[i].refcount);
    }
  }
}

bool PrescillaDictionary::check_invariants(std::string* why) const {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::size_t nodes = 0, terminals = 0;
  std::uint64_t bytes = 0;
  std::set<std::string> seen;
  std::vector<std::pair<std::int32_t, std::string>> stack{{kRoot, ""}};
  while (!stack.empty()) {
    auto [n, prefix] = stack.back();
    stack.pop_back();
    const Node& node = nodes_[n];
    if (!node.live) return fail("reachable node " + std::to_string(n) + " is not live");
    ++nodes;
    bytes += node.label.size();
    if (n != kRoot) {
      if (node.label.empty()) return fail("empty edge label at node " + std::to_string(n));
      if (node.refcount == 0 && child_count(n) < 2) {
        return fail("path compression violated at node " + std::to_string(n));
      }
    }
    if (node.refcount > 0) {
      ++terminals;
      if (!seen.insert(prefix).second) return fail("duplicate element '" + prefix + "'");
      if (get(DictKey{static_cast<std::uint32_t>(n)}) != prefix) return fail("get() disagrees with path");
    }
    int last = -1;
    for (std::int32_t ch = node.first_child; ch >= 0; ch = nodes_[ch].next_sibling) {
      if (nodes_[ch].parent != n) return fail("bad parent link at node " + std::to_string(ch));
      if (nodes_[ch].label.empty()) return fail("empty edge label at node " + std::to_string(ch));
      const int b = first_byte(nodes_[ch].label);
      if (b <= last) return fail("siblings unsorted or sharing a first byte under node " + std::to_string(n));
      last = b;
      stack.emplace_back(ch, prefix + nodes_[ch].label);
    }
  }
  if (nodes != node_count_) return fail("node tally mismatch");
  if (terminals != size_) return fail("size tally mismatch");
  if (bytes != label_bytes_) return fail("label byte tally mismatch");
  return true;
}

}  // namespace tstore
