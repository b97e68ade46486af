#include "tstore/tuple_store.hpp"

#include <cstdio>
#include <filesystem>
#include <map>

#include "tstore/avl_dictionary.hpp"
#include "tstore/block_store.hpp"
#include "tstore/chopper_dictionary.hpp"
#include "tstore/error.hpp"
#include "tstore/hash.hpp"
#include "tstore/prescilla_dictionary.hpp"

namespace tstore {

TupleStore::TupleStore(StoreConfig config) : config_(std::move(config)) {
  config_.validate();
  mask_ = config_.effective_mask();
  if (config_.codec == CodecKind::huffman) {
    tree_ = config_.tree ? config_.tree : std::shared_ptr<const HuffmanTree>(&default_tree(), [](const HuffmanTree*) {});
  }
  if (config_.needs_device()) attach_device();

  switch (config_.dictionary) {
    case DictionaryKind::none: break;
    case DictionaryKind::avl: dictionary_ = std::make_unique<AvlDictionary>(); break;
    case DictionaryKind::prescilla: dictionary_ = std::make_unique<PrescillaDictionary>(); break;
    case DictionaryKind::chopper:
      dictionary_ = std::make_unique<ChopperDictionary>(config_.chopper_slots, config_.chopper_payload);
      break;
    case DictionaryKind::block: dictionary_ = std::make_unique<BlockDictionary>(*device_); break;
  }
  KeyTupleLayout layout{mask_, config_.max_inline};
  switch (config_.container) {
    case ContainerKind::static_vector:
      container_ = std::make_unique<StaticVectorContainer>(std::move(layout), config_.static_capacity);
      break;
    case ContainerKind::list: container_ = std::make_unique<ListContainer>(std::move(layout)); break;
    case ContainerKind::block: container_ = std::make_unique<BlockContainer>(std::move(layout), *device_); break;
  }
}

TupleStore::~TupleStore() = default;
TupleStore::TupleStore(TupleStore&&) noexcept = default;
TupleStore& TupleStore::operator=(TupleStore&&) noexcept = default;

std::string TupleStore::fingerprint() const {
  std::string fp = "tstore-config 1 arity=" + std::to_string(config_.arity) + " mask=" + mask_.to_string() +
                   " dictionary=" + std::string(to_string(config_.dictionary)) +
                   " container=" + std::string(to_string(config_.container)) +
                   " codec=" + std::string(to_string(config_.codec));
  if (tree_) {
    const auto bytes = tree_->serialize_succinct();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x",
                  hash_bytes(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())));
    fp += " tree=";
    fp += buf;
  }
  if (config_.dictionary == DictionaryKind::chopper) {
    fp += " chopper=" + std::to_string(config_.chopper_slots) + "x" + std::to_string(config_.chopper_payload);
  }
  return fp;
}

void TupleStore::attach_device() {
  if (config_.device_path.empty()) {
    device_ = BlockDevice::in_memory(config_.device_blocks);
  } else {
    const bool exists = std::filesystem::exists(config_.device_path);
    device_ = BlockDevice::open(config_.device_path, !exists, config_.device_blocks);
  }
  BPlusHashSet meta(*device_, kConfigSlot);
  const std::string fp = fingerprint();
  const bool populated = device_->root_slot(kDictionarySlot).count != 0 || device_->root_slot(kContainerSlot).count != 0;
  if (meta.size() == 0) {
    if (populated) throw FormatError("device holds data but no store configuration");
    meta.insert(fp);
    return;
  }
  if (!meta.find(fp)) {
    std::string stored;
    meta.for_each([&](RecordAddress, std::string_view v, std::uint32_t) { stored = v; });
    throw UsageError("device was written by a different configuration (" + stored + ")");
  }
  const bool persistent = config_.container == ContainerKind::block &&
                          (config_.dictionary == DictionaryKind::none || config_.dictionary == DictionaryKind::block);
  if (populated && !persistent) {
    throw UsageError("device holds data of a configuration that keeps part of its state in memory; it cannot be reopened");
  }
}

void TupleStore::check_arity(std::size_t n, const char* what) const {
  if (n != config_.arity) {
    throw UsageError(std::string(what) + " has arity " + std::to_string(n) + ", store arity is " +
                     std::to_string(config_.arity));
  }
}

std::string TupleStore::encode_element(std::string_view plain) const {
  if (!tree_) return std::string(plain);
  std::string packed = tree_->encode_packed(plain);
  if (packed.size() > kMaxElementBytes) {
    throw CapacityError("encoded element of " + std::to_string(packed.size()) + " bytes exceeds 65535");
  }
  return packed;
}

std::string TupleStore::decode_element(std::string_view stored) const {
  if (!tree_) return std::string(stored);
  return tree_->decode_packed(stored);
}

std::optional<KeyTuple> TupleStore::lookup(const std::vector<std::string>& stored) const {
  KeyTuple kt;
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (mask_.managed(i)) {
      const auto key = dictionary_->find(stored[i]);
      if (!key) return std::nullopt;
      kt.push_back(*key);
    } else {
      kt.push_back(stored[i]);
    }
  }
  return kt;
}

bool TupleStore::insert(const Tuple& t) {
  check_arity(t.size(), "tuple");
  std::vector<std::string> stored;
  stored.reserve(t.size());
  for (const auto& e : t) stored.push_back(encode_element(e.bytes()));

  if (const auto existing = lookup(stored); existing && container_->contains(*existing)) return false;

  std::vector<DictKey> acquired;
  try {
    KeyTuple kt;
    for (std::size_t i = 0; i < stored.size(); ++i) {
      if (mask_.managed(i)) {
        const DictKey k = dictionary_->insert(stored[i]);
        acquired.push_back(k);
        kt.push_back(k);
      } else {
        kt.push_back(std::move(stored[i]));
      }
    }
    if (container_->insert(kt)) return true;
  } catch (...) {
    for (auto it = acquired.rbegin(); it != acquired.rend(); ++it) dictionary_->erase(*it);
    throw;
  }
  for (auto it = acquired.rbegin(); it != acquired.rend(); ++it) dictionary_->erase(*it);
  return false;
}

void TupleStore::release_keys(const KeyTuple& kt) {
  for (std::size_t i = 0; i < kt.size(); ++i) {
    if (mask_.managed(i)) dictionary_->erase(std::get<DictKey>(kt[i]));
  }
}

bool TupleStore::erase(const Tuple& t) {
  check_arity(t.size(), "tuple");
  std::vector<std::string> stored;
  try {
    for (const auto& e : t) stored.push_back(encode_element(e.bytes()));
  } catch (const EncodingError&) {
    return false;
  }
  const auto kt = lookup(stored);
  if (!kt || !container_->erase(*kt)) return false;
  release_keys(*kt);
  return true;
}

bool TupleStore::translate(const TupleTemplate& tmpl, std::vector<std::optional<KeyCell>>& out) const {
  out.assign(tmpl.size(), std::nullopt);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (!tmpl[i]) continue;
    std::string stored;
    try {
      stored = encode_element(tmpl[i]->bytes());
    } catch (const EncodingError&) {
      return false;
    }
    if (mask_.managed(i)) {
      const auto key = dictionary_->find(stored);
      if (!key) return false;
      out[i] = *key;
    } else {
      out[i] = std::move(stored);
    }
  }
  return true;
}

QueryStream TupleStore::query(const TupleTemplate& tmpl) const { return QueryStream(*this, tmpl, false); }

QueryStream TupleStore::query_raw(const TupleTemplate& tmpl) const { return QueryStream(*this, tmpl, true); }

std::vector<KeyTuple> TupleStore::collect_matches(const TupleTemplate& tmpl) const {
  QueryStream s(*this, tmpl, true);
  std::vector<KeyTuple> out;
  if (s.empty_) return out;
  KeyTupleView view;
  while (s.cursor_->next(view)) {
    ++scan_comparisons_;
    if (s.matches(view)) out.push_back(view.to_owned());
  }
  return out;
}

std::size_t TupleStore::erase_matching(const TupleTemplate& tmpl) {
  const auto matches = collect_matches(tmpl);
  for (const auto& kt : matches) {
    if (container_->erase(kt)) release_keys(kt);
  }
  return matches.size();
}

std::size_t TupleStore::size() const { return container_->size(); }

StoreStats TupleStore::stats() const {
  StoreStats s;
  s.tuples = container_->size();
  s.comparisons = container_->comparisons() + scan_comparisons_;
  if (dictionary_) {
    s.dict_entries = dictionary_->size();
    s.dict_stored_bytes = dictionary_->stored_bytes();
    s.dict_resident_bytes = dictionary_->resident_bytes();
    s.comparisons += dictionary_->comparisons();
  }
  if (device_) {
    s.block_reads = device_->reads();
    s.block_writes = device_->writes();
  }
  return s;
}

bool TupleStore::check_consistency(std::string* why) const {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::map<std::uint32_t, std::uint32_t> refs;
  auto cursor = container_->cursor();
  KeyTupleView view;
  while (cursor->next(view)) {
    for (std::size_t i = 0; i < view.size(); ++i) {
      if (view.is_key(i)) ++refs[view.key(i).value];
    }
  }
  if (!dictionary_) return refs.empty() ? true : fail("key columns without a dictionary");
  std::size_t seen = 0;
  std::string error;
  dictionary_->for_each([&](DictKey k, std::string_view, std::uint32_t rc) {
    ++seen;
    const auto it = refs.find(k.value);
    const std::uint32_t expected = it == refs.end() ? 0 : it->second;
    if (expected != rc && error.empty()) {
      error = "key " + std::to_string(k.value) + " has refcount " + std::to_string(rc) + " but " +
              std::to_string(expected) + " references";
    }
  });
  if (!error.empty()) return fail(error);
  if (seen != refs.size()) return fail("tuples reference keys missing from the dictionary");
  return true;
}

void TupleStore::flush() {
  if (device_) device_->flush(false);
}

// --- query stream --------------------------------------------------------------

QueryStream::QueryStream(const TupleStore& store, const TupleTemplate& tmpl, bool raw) : store_(&store), raw_(raw) {
  store.check_arity(tmpl.size(), "template");
  empty_ = !store.translate(tmpl, bound_);
  if (!empty_) cursor_ = store.container_->cursor();
}

bool QueryStream::matches(const KeyTupleView& view) const {
  for (std::size_t i = 0; i < bound_.size(); ++i) {
    if (!bound_[i]) continue;
    if (view.is_key(i)) {
      if (view.key(i) != std::get<DictKey>(*bound_[i])) return false;
    } else if (view.inline_bytes(i) != std::get<std::string>(*bound_[i])) {
      return false;
    }
  }
  return true;
}

bool QueryStream::next(Tuple& out) {
  if (empty_) return false;
  KeyTupleView view;
  while (cursor_->next(view)) {
    ++store_->scan_comparisons_;
    if (!matches(view)) continue;
    std::vector<Element> elems;
    elems.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
      std::string bytes = view.is_key(i) ? store_->dictionary_->get(view.key(i)) : std::string(view.inline_bytes(i));
      elems.emplace_back(raw_ ? std::move(bytes) : store_->decode_element(bytes));
    }
    out = Tuple(std::move(elems));
    return true;
  }
  return false;
}

std::vector<Tuple> QueryStream::collect() {
  std::vector<Tuple> out;
  Tuple t;
  while (next(t)) out.push_back(std::move(t));
  return out;
}

}  // namespace tstore
