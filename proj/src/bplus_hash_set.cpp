#include "tstore/bplus_hash_set.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "tstore/detail/byte_order.hpp"
#include "tstore/error.hpp"
#include "tstore/hash.hpp"

namespace tstore {

using detail::load_le16;
using detail::load_le32;
using detail::store_le16;
using detail::store_le32;

namespace {

constexpr std::uint8_t kLeafKind = 1;
constexpr std::uint8_t kInnerKind = 2;
constexpr std::uint8_t kPageKind = 3;
constexpr std::uint8_t kOverflowKind = 4;
constexpr std::uint8_t kRecordMagic = 0xA5;

// Record page header: kind, 0, live count (le16), used bytes (le16), 0, 0.
std::uint16_t page_live(const Block& b) { return load_le16(b.data() + 2); }
std::uint16_t page_used(const Block& b) { return load_le16(b.data() + 4); }

}  // namespace

BPlusHashSet::BPlusHashSet(BlockDevice& device, std::size_t slot) : device_(&device), slot_(slot) {
  if (slot >= BlockDevice::kRootSlots) throw UsageError("root slot index out of range");
  if (meta().root == 0) {
    const BlockId root = device_->allocate();
    store(root, Node{});
    meta() = RootSlot{root, 1, 0, 0, 0};
  }
}

// --- node and record I/O ---------------------------------------------------

BPlusHashSet::Node BPlusHashSet::load(BlockId b) const {
  Block blk;
  device_->read(b, blk);
  Node n;
  const std::size_t count = load_le16(blk.data() + 2);
  if (blk[0] == kLeafKind) {
    if (count > kFanout) throw CorruptionError("leaf block " + std::to_string(b) + " overfull");
    n.leaf = true;
    n.next = load_le32(blk.data() + 4);
    for (std::size_t i = 0; i < count; ++i) {
      n.keys.push_back(load_le32(blk.data() + kNodeHeader + 8 * i));
      n.vals.push_back(load_le32(blk.data() + kNodeHeader + 8 * i + 4));
    }
  } else if (blk[0] == kInnerKind) {
    if (count + 1 > kFanout) throw CorruptionError("inner block " + std::to_string(b) + " overfull");
    n.leaf = false;
    n.vals.push_back(load_le32(blk.data() + kNodeHeader));
    for (std::size_t i = 0; i < count; ++i) {
      n.keys.push_back(load_le32(blk.data() + kNodeHeader + 4 + 8 * i));
      n.vals.push_back(load_le32(blk.data() + kNodeHeader + 8 + 8 * i));
    }
  } else {
    throw CorruptionError("block " + std::to_string(b) + " is not a tree node");
  }
  return n;
}

void BPlusHashSet::store(BlockId b, const Node& n) const {
  Block blk{};
  blk[0] = n.leaf ? kLeafKind : kInnerKind;
  store_le16(blk.data() + 2, static_cast<std::uint16_t>(n.keys.size()));
  if (n.leaf) {
    store_le32(blk.data() + 4, n.next);
    for (std::size_t i = 0; i < n.keys.size(); ++i) {
      store_le32(blk.data() + kNodeHeader + 8 * i, n.keys[i]);
      store_le32(blk.data() + kNodeHeader + 8 * i + 4, n.vals[i]);
    }
  } else {
    store_le32(blk.data() + kNodeHeader, n.vals[0]);
    for (std::size_t i = 0; i < n.keys.size(); ++i) {
      store_le32(blk.data() + kNodeHeader + 4 + 8 * i, n.keys[i]);
      store_le32(blk.data() + kNodeHeader + 8 + 8 * i, n.vals[i + 1]);
    }
  }
  device_->write(b, blk);
}

std::vector<BPlusHashSet::Step> BPlusHashSet::descend(std::uint32_t hash) const {
  std::vector<Step> path;
  BlockId b = meta().root;
  for (;;) {
    Node n = load(b);
    if (n.leaf) {
      const auto pos = static_cast<std::size_t>(std::lower_bound(n.keys.begin(), n.keys.end(), hash) - n.keys.begin());
      path.push_back({b, std::move(n), pos});
      return path;
    }
    const auto child = static_cast<std::size_t>(std::upper_bound(n.keys.begin(), n.keys.end(), hash) - n.keys.begin());
    const BlockId next = n.vals[child];
    path.push_back({b, std::move(n), child});
    b = next;
  }
}

BPlusHashSet::Record BPlusHashSet::load_record(RecordAddress a, bool checked) const {
  const BlockId b = record_block(a);
  const std::uint32_t off = record_offset(a);
  auto invalid = [&] { return InvalidKeyError("dead or invalid record address " + std::to_string(a)); };
  if (checked && (!device_->is_allocated(b) || off < kPageHeader)) throw invalid();
  Block blk;
  device_->read(b, blk);
  if (checked) {
    if (blk[0] != kPageKind || off >= page_used(blk)) throw invalid();
    // The address must fall on a record boundary.
    std::size_t pos = kPageHeader;
    while (pos < off) pos += kRecordHeader + load_le16(blk.data() + pos + 12);
    if (pos != off) throw invalid();
  }
  const std::uint8_t* p = blk.data() + off;
  if (p[0] != kRecordMagic) throw CorruptionError("no record at address " + std::to_string(a));
  Record r;
  r.live = p[1] == 1;
  if (checked && !r.live) throw invalid();
  r.next = load_le32(p + 2);
  r.refcount = load_le32(p + 6);
  r.total_len = load_le16(p + 10);
  r.inline_len = load_le16(p + 12);
  r.overflow = load_le32(p + 14);
  r.inline_bytes.assign(reinterpret_cast<const char*>(p + kRecordHeader), r.inline_len);
  return r;
}

void BPlusHashSet::store_record_header(RecordAddress a, const Record& r) const {
  Block blk;
  device_->read(record_block(a), blk);
  std::uint8_t* p = blk.data() + record_offset(a);
  p[1] = r.live ? 1 : 0;
  store_le32(p + 2, r.next);
  store_le32(p + 6, r.refcount);
  device_->write(record_block(a), blk);
}

std::string BPlusHashSet::record_value(const Record& r) const {
  std::string out = r.inline_bytes;
  out.reserve(r.total_len);
  for (BlockId b = r.overflow; b != 0;) {
    Block blk;
    device_->read(b, blk);
    if (blk[0] != kOverflowKind) throw CorruptionError("broken overflow chain at block " + std::to_string(b));
    out.append(reinterpret_cast<const char*>(blk.data() + 8), load_le16(blk.data() + 2));
    b = load_le32(blk.data() + 4);
  }
  if (out.size() != r.total_len) throw CorruptionError("record length disagrees with its overflow chain");
  return out;
}

bool BPlusHashSet::record_equals(const Record& r, std::string_view value) const {
  if (r.total_len != value.size()) return false;
  if (value.substr(0, r.inline_len) != r.inline_bytes) return false;
  if (r.overflow == 0) return true;
  return record_value(r) == value;
}

RecordAddress BPlusHashSet::write_record(std::string_view value, RecordAddress next) {
  const std::size_t inline_len = std::min(value.size(), kMaxInline);
  const std::size_t need = kRecordHeader + inline_len;

  // Overflow blocks are written before the record that points at them.
  BlockId overflow = 0;
  if (value.size() > inline_len) {
    std::string_view rest = value.substr(inline_len);
    std::vector<BlockId> ids;
    for (std::size_t i = 0; i < rest.size(); i += kOverflowPayload) ids.push_back(device_->allocate());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Block blk{};
      const auto part = rest.substr(i * kOverflowPayload, kOverflowPayload);
      blk[0] = kOverflowKind;
      store_le16(blk.data() + 2, static_cast<std::uint16_t>(part.size()));
      store_le32(blk.data() + 4, i + 1 < ids.size() ? ids[i + 1] : 0);
      std::memcpy(blk.data() + 8, part.data(), part.size());
      device_->write(ids[i], blk);
    }
    overflow = ids.front();
  }

  Block page{};
  BlockId pb = meta().append_page;
  if (pb != 0) {
    device_->read(pb, page);
    if (kBlockSize - page_used(page) < need) pb = 0;
  }
  if (pb == 0) {
    pb = device_->allocate();
    page = Block{};
    page[0] = kPageKind;
    store_le16(page.data() + 4, kPageHeader);
    meta().append_page = pb;
  }
  const std::uint16_t off = page_used(page);
  std::uint8_t* p = page.data() + off;
  p[0] = kRecordMagic;
  p[1] = 1;
  store_le32(p + 2, next);
  store_le32(p + 6, 1);
  store_le16(p + 10, static_cast<std::uint16_t>(value.size()));
  store_le16(p + 12, static_cast<std::uint16_t>(inline_len));
  store_le32(p + 14, overflow);
  std::memcpy(p + kRecordHeader, value.data(), inline_len);
  store_le16(page.data() + 2, static_cast<std::uint16_t>(page_live(page) + 1));
  store_le16(page.data() + 4, static_cast<std::uint16_t>(off + need));
  device_->write(pb, page);
  return make_record_address(pb, off);
}

void BPlusHashSet::free_record(RecordAddress a, const Record& r) {
  for (BlockId b = r.overflow; b != 0;) {
    Block blk;
    device_->read(b, blk);
    const BlockId next = load_le32(blk.data() + 4);
    device_->release(b);
    b = next;
  }
  const BlockId pb = record_block(a);
  Block page;
  device_->read(pb, page);
  page[record_offset(a) + 1] = 0;
  const auto live = static_cast<std::uint16_t>(page_live(page) - 1);
  store_le16(page.data() + 2, live);
  if (live == 0 && pb != meta().append_page) {
    device_->release(pb);
    return;
  }
  if (live == 0) {
    // Reuse the emptied append page from the start.
    page = Block{};
    page[0] = kPageKind;
    store_le16(page.data() + 4, kPageHeader);
  }
  device_->write(pb, page);
}

// --- operations --------------------------------------------------------------

BPlusHashSet::InsertResult BPlusHashSet::insert(std::string_view value, bool add_reference) {
  if (value.size() > 0xFFFF) throw UsageError("values are limited to 65535 bytes");
  const std::size_t overflow_blocks =
      value.size() > kMaxInline ? (value.size() - kMaxInline + kOverflowPayload - 1) / kOverflowPayload : 0;
  // Worst case: one new record page, the overflow chain, a split per level and a new root.
  const std::size_t worst = 1 + overflow_blocks + meta().height + 1;
  const std::uint32_t hash = hash_bytes(value);
  auto path = descend(hash);
  Step& leaf = path.back();
  const bool hash_present = leaf.child < leaf.node.keys.size() && leaf.node.keys[leaf.child] == hash;
  if (hash_present) {
    for (RecordAddress a = leaf.node.vals[leaf.child]; a != 0;) {
      Record r = load_record(a, false);
      if (record_equals(r, value)) {
        if (add_reference) {
          ++r.refcount;
          store_record_header(a, r);
        }
        return {a, false, r.refcount};
      }
      a = r.next;
    }
  }
  if (device_->free_blocks() < worst) {
    throw StorageFullError("block device has " + std::to_string(device_->free_blocks()) + " free blocks, insert may need " +
                           std::to_string(worst));
  }
  ++version_;
  meta().count += 1;
  meta().bytes += value.size();
  if (hash_present) {
    const RecordAddress a = write_record(value, leaf.node.vals[leaf.child]);
    leaf.node.vals[leaf.child] = a;
    store(leaf.block, leaf.node);
    return {a, true, 1};
  }
  const RecordAddress a = write_record(value, 0);
  leaf.node.keys.insert(leaf.node.keys.begin() + static_cast<std::ptrdiff_t>(leaf.child), hash);
  leaf.node.vals.insert(leaf.node.vals.begin() + static_cast<std::ptrdiff_t>(leaf.child), a);
  if (leaf.node.keys.size() <= kFanout) {
    store(leaf.block, leaf.node);
  } else {
    split_upwards(path);
  }
  return {a, true, 1};
}

void BPlusHashSet::split_upwards(std::vector<Step>& path) {
  // The last node on the path is overfull by one.
  std::uint32_t separator = 0;
  BlockId right_id = 0;
  std::size_t level = path.size() - 1;
  {
    Node& left = path[level].node;
    Node right;
    right.leaf = true;
    right.keys.assign(left.keys.begin() + kMinOccupancy, left.keys.end());
    right.vals.assign(left.vals.begin() + kMinOccupancy, left.vals.end());
    left.keys.resize(kMinOccupancy);
    left.vals.resize(kMinOccupancy);
    right_id = device_->allocate();
    right.next = left.next;
    left.next = right_id;
    store(path[level].block, left);
    store(right_id, right);
    separator = right.keys.front();
  }
  while (level-- > 0) {
    Node& parent = path[level].node;
    const std::size_t at = path[level].child;
    parent.keys.insert(parent.keys.begin() + static_cast<std::ptrdiff_t>(at), separator);
    parent.vals.insert(parent.vals.begin() + static_cast<std::ptrdiff_t>(at) + 1, right_id);
    if (parent.vals.size() <= kFanout) {
      store(path[level].block, parent);
      return;
    }
    // 64 children: 32 stay, key 31 moves up, 32 go right.
    Node right;
    right.leaf = false;
    const std::size_t keep = kMinOccupancy;
    separator = parent.keys[keep - 1];
    right.keys.assign(parent.keys.begin() + static_cast<std::ptrdiff_t>(keep), parent.keys.end());
    right.vals.assign(parent.vals.begin() + static_cast<std::ptrdiff_t>(keep), parent.vals.end());
    parent.keys.resize(keep - 1);
    parent.vals.resize(keep);
    right_id = device_->allocate();
    store(path[level].block, parent);
    store(right_id, right);
  }
  Node root;
  root.leaf = false;
  root.keys = {separator};
  root.vals = {path.front().block, right_id};
  const BlockId root_id = device_->allocate();
  store(root_id, root);
  meta().root = root_id;
  meta().height += 1;
}

std::optional<RecordAddress> BPlusHashSet::find(std::string_view value) const {
  const std::uint32_t hash = hash_bytes(value);
  const auto path = descend(hash);
  const Step& leaf = path.back();
  if (leaf.child >= leaf.node.keys.size() || leaf.node.keys[leaf.child] != hash) return std::nullopt;
  for (RecordAddress a = leaf.node.vals[leaf.child]; a != 0;) {
    const Record r = load_record(a, false);
    if (record_equals(r, value)) return a;
    a = r.next;
  }
  return std::nullopt;
}

std::string BPlusHashSet::read(RecordAddress address) const { return record_value(load_record(address, true)); }

std::uint32_t BPlusHashSet::refcount(RecordAddress address) const { return load_record(address, true).refcount; }

void BPlusHashSet::set_refcount(RecordAddress address, std::uint32_t refcount) {
  Record r = load_record(address, true);
  r.refcount = refcount;
  store_record_header(address, r);
}

void BPlusHashSet::erase(RecordAddress address) {
  const Record rec = load_record(address, true);
  const std::string value = record_value(rec);
  const std::uint32_t hash = hash_bytes(value);
  auto path = descend(hash);
  Step& leaf = path.back();
  if (leaf.child >= leaf.node.keys.size() || leaf.node.keys[leaf.child] != hash) {
    throw CorruptionError("record " + std::to_string(address) + " is not indexed under its hash");
  }
  RecordAddress prev = 0;
  RecordAddress cur = leaf.node.vals[leaf.child];
  while (cur != address) {
    if (cur == 0) throw CorruptionError("record " + std::to_string(address) + " missing from its hash chain");
    prev = cur;
    cur = load_record(cur, false).next;
  }
  ++version_;
  free_record(address, rec);
  meta().count -= 1;
  meta().bytes -= value.size();
  if (prev != 0) {
    Record p = load_record(prev, false);
    p.next = rec.next;
    store_record_header(prev, p);
    return;
  }
  if (rec.next != 0) {
    leaf.node.vals[leaf.child] = rec.next;
    store(leaf.block, leaf.node);
    return;
  }
  leaf.node.keys.erase(leaf.node.keys.begin() + static_cast<std::ptrdiff_t>(leaf.child));
  leaf.node.vals.erase(leaf.node.vals.begin() + static_cast<std::ptrdiff_t>(leaf.child));
  rebalance(path, path.size() - 1);
}

void BPlusHashSet::rebalance(std::vector<Step>& path, std::size_t level) {
  Step& step = path[level];
  Node& node = step.node;
  if (level == 0) {
    if (!node.leaf && node.keys.empty()) {
      meta().root = node.vals.front();
      meta().height -= 1;
      device_->release(step.block);
    } else {
      store(step.block, node);
    }
    return;
  }
  const auto occupancy = [](const Node& n) { return n.leaf ? n.keys.size() : n.vals.size(); };
  if (occupancy(node) >= kMinOccupancy) {
    store(step.block, node);
    return;
  }
  Step& up = path[level - 1];
  Node& parent = up.node;
  const std::size_t i = up.child;
  const auto at = [](auto& v, std::size_t k) { return v.begin() + static_cast<std::ptrdiff_t>(k); };

  if (i > 0) {
    const BlockId left_id = parent.vals[i - 1];
    Node left = load(left_id);
    if (occupancy(left) > kMinOccupancy) {
      if (node.leaf) {
        node.keys.insert(node.keys.begin(), left.keys.back());
        node.vals.insert(node.vals.begin(), left.vals.back());
        left.keys.pop_back();
        left.vals.pop_back();
        parent.keys[i - 1] = node.keys.front();
      } else {
        node.keys.insert(node.keys.begin(), parent.keys[i - 1]);
        node.vals.insert(node.vals.begin(), left.vals.back());
        parent.keys[i - 1] = left.keys.back();
        left.keys.pop_back();
        left.vals.pop_back();
      }
      store(left_id, left);
      store(step.block, node);
      store(up.block, parent);
      return;
    }
  }
  if (i + 1 < parent.vals.size()) {
    const BlockId right_id = parent.vals[i + 1];
    Node right = load(right_id);
    if (occupancy(right) > kMinOccupancy) {
      if (node.leaf) {
        node.keys.push_back(right.keys.front());
        node.vals.push_back(right.vals.front());
        right.keys.erase(right.keys.begin());
        right.vals.erase(right.vals.begin());
        parent.keys[i] = right.keys.front();
      } else {
        node.keys.push_back(parent.keys[i]);
        node.vals.push_back(right.vals.front());
        parent.keys[i] = right.keys.front();
        right.keys.erase(right.keys.begin());
        right.vals.erase(right.vals.begin());
      }
      store(right_id, right);
      store(step.block, node);
      store(up.block, parent);
      return;
    }
  }

  // Merge with a sibling; the parent loses one child.
  if (i > 0) {
    const BlockId left_id = parent.vals[i - 1];
    Node left = load(left_id);
    if (node.leaf) {
      left.next = node.next;
    } else {
      left.keys.push_back(parent.keys[i - 1]);
    }
    left.keys.insert(left.keys.end(), node.keys.begin(), node.keys.end());
    left.vals.insert(left.vals.end(), node.vals.begin(), node.vals.end());
    store(left_id, left);
    device_->release(step.block);
    parent.keys.erase(at(parent.keys, i - 1));
    parent.vals.erase(at(parent.vals, i));
  } else {
    const BlockId right_id = parent.vals[i + 1];
    Node right = load(right_id);
    if (node.leaf) {
      node.next = right.next;
    } else {
      node.keys.push_back(parent.keys[i]);
    }
    node.keys.insert(node.keys.end(), right.keys.begin(), right.keys.end());
    node.vals.insert(node.vals.end(), right.vals.begin(), right.vals.end());
    store(step.block, node);
    device_->release(right_id);
    parent.keys.erase(at(parent.keys, i));
    parent.vals.erase(at(parent.vals, i + 1));
  }
  rebalance(path, level - 1);
}

std::vector<RecordAddress> BPlusHashSet::chain(std::uint32_t hash) const {
  const auto path = descend(hash);
  const Step& leaf = path.back();
  std::vector<RecordAddress> out;
  if (leaf.child >= leaf.node.keys.size() || leaf.node.keys[leaf.child] != hash) return out;
  for (RecordAddress a = leaf.node.vals[leaf.child]; a != 0; a = load_record(a, false).next) out.push_back(a);
  return out;
}

// --- iteration -----------------------------------------------------------------

BPlusHashSet::Cursor::Cursor(const BPlusHashSet& set) : set_(&set), version_(set.version()) {
  BlockId b = set.meta().root;
  Node n = set.load(b);
  while (!n.leaf) {
    b = n.vals.front();
    n = set.load(b);
  }
  leaf_ = b;
  heads_ = std::move(n.vals);
  next_leaf_ = n.next;
}

bool BPlusHashSet::Cursor::next(RecordAddress& address, std::string& value) {
  if (set_->version() != version_) throw IterationInvalidatedError("hash set mutated during iteration");
  for (;;) {
    if (record_ != 0) {
      const Record r = set_->load_record(record_, false);
      address = record_;
      value = set_->record_value(r);
      record_ = r.next;
      return true;
    }
    if (entry_ < heads_.size()) {
      record_ = heads_[entry_++];
      continue;
    }
    if (next_leaf_ == 0) return false;
    leaf_ = next_leaf_;
    Node n = set_->load(leaf_);
    heads_ = std::move(n.vals);
    next_leaf_ = n.next;
    entry_ = 0;
  }
}

void BPlusHashSet::for_each(const std::function<void(RecordAddress, std::string_view, std::uint32_t)>& fn) const {
  auto c = cursor();
  RecordAddress a;
  std::string v;
  while (c.next(a, v)) fn(a, v, load_record(a, false).refcount);
}

// --- invariants ------------------------------------------------------------------

bool BPlusHashSet::check_invariants(std::string* why) const {
  std::string error;
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::size_t values = 0;
  std::uint64_t bytes = 0;
  std::vector<BlockId> leaves;
  const std::uint32_t height = meta().height;

  // lo is the inclusive lower bound for keys under b.
  std::function<bool(BlockId, std::uint32_t, std::uint64_t, bool)> walk = [&](BlockId b, std::uint32_t depth,
                                                                             std::uint64_t lo, bool root) -> bool {
    Node n = load(b);
    const std::size_t occ = n.leaf ? n.keys.size() : n.vals.size();
    if (!root && occ < kMinOccupancy) {
      error = "block " + std::to_string(b) + " underfull (" + std::to_string(occ) + ")";
      return false;
    }
    if (occ > kFanout) {
      error = "block " + std::to_string(b) + " overfull";
      return false;
    }
    if (root && !n.leaf && n.vals.size() < 2) {
      error = "inner root with a single child";
      return false;
    }
    for (std::size_t k = 1; k < n.keys.size(); ++k) {
      if (n.keys[k - 1] >= n.keys[k]) {
        error = "unsorted keys in block " + std::to_string(b);
        return false;
      }
    }
    if (!n.keys.empty() && n.keys.front() < lo) {
      error = "key below separator range in block " + std::to_string(b);
      return false;
    }
    if (n.leaf) {
      if (depth != height) {
        error = "leaf " + std::to_string(b) + " at depth " + std::to_string(depth) + ", height " + std::to_string(height);
        return false;
      }
      leaves.push_back(b);
      for (std::size_t k = 0; k < n.keys.size(); ++k) {
        std::set<std::string> seen;
        if (n.vals[k] == 0) {
          error = "empty chain in leaf " + std::to_string(b);
          return false;
        }
        for (RecordAddress a = n.vals[k]; a != 0;) {
          const Record r = load_record(a, false);
          if (!r.live) {
            error = "dead record on chain";
            return false;
          }
          std::string v = record_value(r);
          if (hash_bytes(v) != n.keys[k]) {
            error = "record filed under the wrong hash";
            return false;
          }
          if (!seen.insert(v).second) {
            error = "duplicate value on a chain";
            return false;
          }
          ++values;
          bytes += v.size();
          a = r.next;
        }
      }
      return true;
    }
    for (std::size_t c = 0; c < n.vals.size(); ++c) {
      const std::uint64_t child_lo = c == 0 ? lo : n.keys[c - 1];
      if (!walk(n.vals[c], depth + 1, child_lo, false)) return false;
      // Upper bound: the child's last key must stay below the next separator.
      if (c < n.keys.size()) {
        Node child = load(n.vals[c]);
        while (!child.leaf) child = load(child.vals.back());
        if (!child.keys.empty() && child.keys.back() >= n.keys[c]) {
          error = "key above separator range under block " + std::to_string(b);
          return false;
        }
      }
    }
    return true;
  };
  if (!walk(meta().root, 1, 0, true)) return fail(error);

  // Leaf chain must visit the leaves left to right.
  BlockId b = leaves.front();
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (b != leaves[k]) return fail("leaf chain out of order at leaf " + std::to_string(leaves[k]));
    b = load(b).next;
  }
  if (b != 0) return fail("leaf chain continues past the last leaf");
  if (values != meta().count) return fail("value tally mismatch");
  if (bytes != meta().bytes) return fail("byte tally mismatch");
  return true;
}

}  // namespace tstore
