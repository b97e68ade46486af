#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tstore/block_device.hpp"
#include "tstore/container.hpp"
#include "tstore/dictionary.hpp"
#include "tstore/element.hpp"
#include "tstore/huffman.hpp"
#include "tstore/key_tuple.hpp"

namespace tstore {

enum class DictionaryKind { none, avl, prescilla, chopper, block };
enum class ContainerKind { static_vector, list, block };
enum class CodecKind { none, huffman };

std::string_view to_string(DictionaryKind k);
std::string_view to_string(ContainerKind k);
std::string_view to_string(CodecKind k);
DictionaryKind parse_dictionary_kind(std::string_view s);
ContainerKind parse_container_kind(std::string_view s);
CodecKind parse_codec_kind(std::string_view s);

/// Components of a store. A mask, when absent, manages every column if a
/// dictionary is configured and none otherwise.
struct StoreConfig {
  std::size_t arity = kDefaultArity;
  std::optional<ColumnMask> mask;
  DictionaryKind dictionary = DictionaryKind::avl;
  ContainerKind container = ContainerKind::static_vector;
  CodecKind codec = CodecKind::none;

  std::size_t static_capacity = StaticVectorContainer::kDefaultCapacity;
  std::size_t chopper_slots = 100;
  std::size_t chopper_payload = 15;
  std::size_t max_inline = KeyTupleLayout::kDefaultMaxInline;

  /// Codec tree; the bundled default tree when null.
  std::shared_ptr<const HuffmanTree> tree;

  /// Device file for block components; empty means an in-memory device.
  std::string device_path;
  std::uint32_t device_blocks = BlockDevice::kDefaultBlockCount;

  bool needs_device() const {
    return dictionary == DictionaryKind::block || container == ContainerKind::block;
  }
  ColumnMask effective_mask() const;
  /// Short identifier such as "avl+static+huffman".
  std::string id() const;
  /// Throws UsageError for inconsistent settings.
  void validate() const;

  /// Reads `key = value` lines (# comments allowed) or a JSON object.
  /// Unknown keys and bad values raise UsageError.
  static StoreConfig parse(std::string_view text);
  /// Applies one key/value setting.
  void set(std::string_view key, std::string_view value);
};

struct StoreStats {
  std::size_t tuples = 0;
  std::size_t dict_entries = 0;
  std::uint64_t dict_stored_bytes = 0;
  std::uint64_t dict_resident_bytes = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t block_reads = 0;
  std::uint64_t block_writes = 0;
};

class TupleStore;

/// Lazily evaluated query result. Any mutation of the store invalidates the
/// stream; a later next() then throws IterationInvalidatedError.
class QueryStream {
 public:
  /// Next matching tuple, decoded to plain elements.
  bool next(Tuple& out);
  std::vector<Tuple> collect();

 private:
  friend class TupleStore;
  QueryStream(const TupleStore& store, const TupleTemplate& tmpl, bool raw);
  bool matches(const KeyTupleView& view) const;

  const TupleStore* store_;
  bool raw_;
  bool empty_ = false;
  std::vector<std::optional<KeyCell>> bound_;
  std::unique_ptr<ContainerCursor> cursor_;
};

/// Tuple store: a container of key tuples, one dictionary shared by all
/// managed columns, and an optional codec applied before the dictionary.
///
/// Reference counts in the dictionary always equal the number of stored
/// tuples referring to an element, counted per managed column.
class TupleStore {
 public:
  /// Builds the components. Block components open `device_path` (creating it
  /// when missing) or an in-memory device. Reopening a device checks that it
  /// was written with the same configuration.
  explicit TupleStore(StoreConfig config);
  ~TupleStore();
  TupleStore(TupleStore&&) noexcept;
  TupleStore& operator=(TupleStore&&) noexcept;

  /// Returns false for a duplicate. On CapacityError every partial effect is
  /// rolled back before the exception propagates.
  bool insert(const Tuple& t);
  QueryStream query(const TupleTemplate& tmpl) const;
  /// Matches of `tmpl` with elements in their stored (codec-encoded) form.
  QueryStream query_raw(const TupleTemplate& tmpl) const;
  std::vector<Tuple> query_all(const TupleTemplate& tmpl) const { return query(tmpl).collect(); }
  bool erase(const Tuple& t);
  std::size_t erase_matching(const TupleTemplate& tmpl);

  std::size_t size() const;
  std::size_t arity() const noexcept { return config_.arity; }
  StoreStats stats() const;
  const StoreConfig& config() const noexcept { return config_; }
  const ColumnMask& mask() const noexcept { return mask_; }

  /// Null when the configuration has no dictionary.
  const Dictionary* dictionary() const noexcept { return dictionary_.get(); }
  const TupleContainer& container() const noexcept { return *container_; }
  /// Null without block components.
  BlockDevice* device() const noexcept { return device_.get(); }
  const HuffmanTree* tree() const noexcept { return tree_.get(); }

  /// Element bytes as stored: codec-encoded when a codec is configured.
  std::string encode_element(std::string_view plain) const;
  std::string decode_element(std::string_view stored) const;

  /// Full-scan check that dictionary reference counts match the container.
  bool check_consistency(std::string* why = nullptr) const;

  /// Writes device metadata (superblock and bitmap).
  void flush();

 private:
  friend class QueryStream;
  void check_arity(std::size_t n, const char* what) const;
  std::string fingerprint() const;
  void attach_device();
  /// Translates bound slots; false when a managed element is absent.
  bool translate(const TupleTemplate& tmpl, std::vector<std::optional<KeyCell>>& out) const;
  /// Key tuple for stored-form elements; nullopt when a managed element is absent.
  std::optional<KeyTuple> lookup(const std::vector<std::string>& stored) const;
  std::vector<KeyTuple> collect_matches(const TupleTemplate& tmpl) const;
  void release_keys(const KeyTuple& kt);

  StoreConfig config_;
  ColumnMask mask_;
  std::shared_ptr<const HuffmanTree> tree_;
  std::unique_ptr<BlockDevice> device_;
  std::unique_ptr<Dictionary> dictionary_;
  std::unique_ptr<TupleContainer> container_;
  mutable std::uint64_t scan_comparisons_ = 0;
};

}  // namespace tstore
