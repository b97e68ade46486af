#include "tstore/chopper_dictionary.hpp"

#include <algorithm>
#include <cstring>

#include "tstore/error.hpp"

namespace tstore {

namespace {

constexpr std::uint8_t kLengthMask = 0x7F;

inline std::uint16_t read_index(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

inline void write_index(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 8);
  p[1] = static_cast<std::uint8_t>(v & 0xFF);
}

}  // namespace

ChopperDictionary::ChopperDictionary(std::size_t slot_count, std::size_t payload)
    : slot_count_(slot_count), payload_(payload), free_(slot_count) {
  if (payload < 4 || payload > 126) {
    throw UsageError("chopper payload must be between 4 and 126 bytes");
  }
  if (slot_count == 0 || slot_count > 65535) {
    throw UsageError("chopper slot count must be between 1 and 65535");
  }
  table_.assign(slot_count_ * (payload_ + 1), 0);
  refcounts_.assign(slot_count_, 0);
  for (std::size_t i = 0; i < slot_count_; ++i) chunk(i)[0] = kFreeHeader;
}

std::size_t ChopperDictionary::data_chunks(std::size_t length, std::size_t payload) {
  return std::max<std::size_t>(1, (length + payload - 1) / payload);
}

std::size_t ChopperDictionary::meta_chunks(std::size_t length, std::size_t payload) {
  const std::size_t d = data_chunks(length, payload);
  if (d <= 1) return 0;
  const std::size_t k = payload / 2;
  if (d <= k) return 1;
  return 1 + (d - k + (k - 2)) / (k - 1);
}

template <typename Fn>
void ChopperDictionary::for_each_chunk(std::size_t root, Fn&& fn) const {
  std::size_t meta = root;
  for (;;) {
    fn(meta);
    const std::uint8_t* c = chunk(meta);
    if (!(c[0] & kMetaFlag)) return;
    const std::size_t entries = (c[0] & kLengthMask) / 2;
    std::size_t next = slot_count_;
    for (std::size_t e = 0; e < entries; ++e) {
      const std::uint16_t idx = read_index(c + 1 + 2 * e);
      if (chunk(idx)[0] & kMetaFlag) {
        next = idx;
      } else {
        fn(idx);
      }
    }
    if (next == slot_count_) return;
    meta = next;
  }
}

template <typename Fn>
void ChopperDictionary::for_each_data(std::size_t root, Fn&& fn) const {
  std::size_t meta = root;
  for (;;) {
    const std::uint8_t* c = chunk(meta);
    if (!(c[0] & kMetaFlag)) {
      fn(std::span<const std::uint8_t>(c + 1, c[0] & kLengthMask));
      return;
    }
    const std::size_t entries = (c[0] & kLengthMask) / 2;
    std::size_t next = slot_count_;
    for (std::size_t e = 0; e < entries; ++e) {
      const std::uint16_t idx = read_index(c + 1 + 2 * e);
      const std::uint8_t* d = chunk(idx);
      if (d[0] & kMetaFlag) {
        next = idx;
      } else if (!fn(std::span<const std::uint8_t>(d + 1, d[0] & kLengthMask))) {
        return;
      }
    }
    if (next == slot_count_) return;
    meta = next;
  }
}

bool ChopperDictionary::equals(std::size_t root, std::string_view elem) const {
  std::size_t pos = 0;
  bool same = true;
  for_each_data(root, [&](std::span<const std::uint8_t> part) {
    if (elem.size() - pos < part.size() ||
        (!part.empty() && std::memcmp(elem.data() + pos, part.data(), part.size()) != 0)) {
      same = false;
      return false;
    }
    pos += part.size();
    return true;
  });
  return same && pos == elem.size();
}

std::optional<DictKey> ChopperDictionary::find(std::string_view elem) const {
  for (std::size_t i = 0; i < slot_count_; ++i) {
    if (refcounts_[i] == 0) continue;
    count_comparisons();
    if (equals(i, elem)) return DictKey{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::uint16_t ChopperDictionary::take_free_slot(std::size_t& cursor) {
  while (chunk(cursor)[0] != kFreeHeader) ++cursor;
  --free_;
  return static_cast<std::uint16_t>(cursor++);
}

DictKey ChopperDictionary::insert(std::string_view elem) {
  if (auto key = find(elem)) {
    ++refcounts_[key->value];
    return *key;
  }
  const std::size_t data = data_chunks(elem.size(), payload_);
  const std::size_t needed = chunks_needed(elem.size(), payload_);
  if (needed > free_) {
    throw CapacityError("chopper dictionary full: element of " + std::to_string(elem.size()) + " bytes needs " +
                        std::to_string(needed) + " chunks, " + std::to_string(free_) + " free");
  }

  std::size_t cursor = 0;
  auto write_data = [&](std::uint16_t slot, std::size_t part) {
    const std::size_t off = part * payload_;
    const std::size_t n = std::min(payload_, elem.size() - std::min(off, elem.size()));
    std::uint8_t* c = chunk(slot);
    c[0] = static_cast<std::uint8_t>(n);
    if (n) std::memcpy(c + 1, elem.data() + off, n);
    std::memset(c + 1 + n, 0, payload_ - n);
  };

  std::uint16_t root;
  if (data == 1) {
    root = take_free_slot(cursor);
    write_data(root, 0);
  } else {
    const std::size_t k = indices_per_meta();
    root = take_free_slot(cursor);
    std::uint16_t meta = root;
    std::size_t entries = 0;
    for (std::size_t part = 0; part < data; ++part) {
      const std::size_t remaining = data - part;
      if (entries == k - 1 && remaining > 1) {
        // Out of room for more than one index: chain a continuation.
        const std::uint16_t next = take_free_slot(cursor);
        write_index(chunk(meta) + 1 + 2 * entries, next);
        chunk(meta)[0] = static_cast<std::uint8_t>(kMetaFlag | (2 * k));
        meta = next;
        entries = 0;
      }
      const std::uint16_t slot = take_free_slot(cursor);
      write_data(slot, part);
      write_index(chunk(meta) + 1 + 2 * entries, slot);
      ++entries;
      chunk(meta)[0] = static_cast<std::uint8_t>(kMetaFlag | (2 * entries));
    }
    std::memset(chunk(meta) + 1 + 2 * entries, 0, payload_ - 2 * entries);
  }
  refcounts_[root] = 1;
  ++size_;
  return DictKey{root};
}

void ChopperDictionary::check_live(DictKey key) const {
  if (key.value >= slot_count_ || refcounts_[key.value] == 0) {
    throw InvalidKeyError("chopper dictionary: dead or unknown key " + std::to_string(key.value));
  }
}

std::size_t ChopperDictionary::length(DictKey key) const {
  check_live(key);
  std::size_t n = 0;
  for_each_data(key.value, [&](std::span<const std::uint8_t> part) {
    n += part.size();
    return true;
  });
  return n;
}

std::size_t ChopperDictionary::copy_to(DictKey key, std::span<char> out) const {
  check_live(key);
  std::size_t n = 0;
  bool fits = true;
  for_each_data(key.value, [&](std::span<const std::uint8_t> part) {
    if (out.size() - n < part.size()) {
      fits = false;
      return false;
    }
    if (!part.empty()) std::memcpy(out.data() + n, part.data(), part.size());
    n += part.size();
    return true;
  });
  if (!fits) throw UsageError("chopper copy_to: output buffer too small");
  return n;
}

std::string ChopperDictionary::get(DictKey key) const {
  std::string out(length(key), '\0');
  copy_to(key, out);
  return out;
}

std::uint32_t ChopperDictionary::refcount(DictKey key) const {
  check_live(key);
  return refcounts_[key.value];
}

void ChopperDictionary::release(std::size_t i) {
  std::uint8_t* c = chunk(i);
  c[0] = kFreeHeader;
  std::memset(c + 1, 0, payload_);
  ++free_;
}

std::uint32_t ChopperDictionary::erase(DictKey key) {
  check_live(key);
  if (--refcounts_[key.value] > 0) return refcounts_[key.value];
  std::size_t meta = key.value;
  for (;;) {
    const std::uint8_t* c = chunk(meta);
    if (!(c[0] & kMetaFlag)) {
      release(meta);
      break;
    }
    const std::size_t entries = (c[0] & kLengthMask) / 2;
    std::size_t next = slot_count_;
    for (std::size_t e = 0; e < entries; ++e) {
      const std::uint16_t idx = read_index(c + 1 + 2 * e);
      if (chunk(idx)[0] & kMetaFlag) {
        next = idx;
      } else {
        release(idx);
      }
    }
    release(meta);
    if (next == slot_count_) break;
    meta = next;
  }
  --size_;
  return 0;
}

void ChopperDictionary::for_each(const std::function<void(DictKey, std::string_view, std::uint32_t)>& fn) const {
  for (std::size_t i = 0; i < slot_count_; ++i) {
    if (refcounts_[i] == 0) continue;
    const DictKey k{static_cast<std::uint32_t>(i)};
    fn(k, get(k), refcounts_[i]);
  }
}

bool ChopperDictionary::check_invariants(std::string* why) const {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::vector<int> owner(slot_count_, -1);
  std::size_t free_count = 0, live = 0;
  for (std::size_t i = 0; i < slot_count_; ++i) {
    const std::uint8_t h = chunk(i)[0];
    if (h == kFreeHeader) {
      ++free_count;
      if (refcounts_[i]) return fail("free chunk " + std::to_string(i) + " has a refcount");
      continue;
    }
    const std::size_t used = h & kLengthMask;
    if (used > payload_) return fail("chunk " + std::to_string(i) + " claims more payload than it has");
    if ((h & kMetaFlag) && (used % 2 != 0 || used / 2 > indices_per_meta())) {
      return fail("malformed meta chunk " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < slot_count_; ++i) {
    if (refcounts_[i] == 0) continue;
    ++live;
    bool ok = true;
    for_each_chunk(i, [&](std::size_t c) {
      if (c >= slot_count_ || owner[c] != -1 || chunk(c)[0] == kFreeHeader) ok = false;
      else owner[c] = static_cast<int>(i);
    });
    if (!ok) return fail("element rooted at " + std::to_string(i) + " shares or references a free chunk");
  }
  std::size_t owned = static_cast<std::size_t>(std::count_if(owner.begin(), owner.end(), [](int o) { return o >= 0; }));
  if (owned + free_count != slot_count_) return fail("orphaned chunks present");
  if (free_count != free_) return fail("free tally mismatch");
  if (live != size_) return fail("size tally mismatch");
  return true;
}

}  // namespace tstore
