#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace tstore {

inline constexpr std::size_t kBlockSize = 512;
using Block = std::array<std::uint8_t, kBlockSize>;
using BlockId = std::uint32_t;

/// Per-structure metadata persisted in the superblock. A B+ hash set keeps
/// its root, height, value count, current record page and payload tally here.
struct RootSlot {
  BlockId root = 0;
  std::uint32_t height = 0;
  std::uint32_t count = 0;
  BlockId append_page = 0;
  std::uint64_t bytes = 0;
};

/// Fixed-size block storage backed by a file or by memory.
///
/// The superblock (block 0) and the allocation bitmap are held in memory and
/// written back by flush() and on destruction; every other block access goes
/// to the backing store and is counted. Layout: docs/device-format.md.
///
/// Single-writer; one handle per device file.
class BlockDevice {
 public:
  static constexpr std::array<std::uint8_t, 4> kMagic = {'T', 'S', 'B', 'D'};
  static constexpr std::uint16_t kVersion = 1;
  static constexpr std::size_t kRootSlots = 4;
  static constexpr std::uint32_t kDefaultBlockCount = 8192;
  /// Record addresses keep 9 offset bits, leaving 23 for the block index.
  static constexpr std::uint32_t kMaxBlockCount = 1u << 23;

  /// Opens a file-backed device; with `create` a new, empty device of
  /// `block_count` blocks replaces whatever is at `path`.
  /// Throws IoError when the file cannot be opened, FormatError on a bad
  /// superblock.
  static std::unique_ptr<BlockDevice> open(const std::filesystem::path& path, bool create,
                                           std::uint32_t block_count = kDefaultBlockCount);
  static std::unique_ptr<BlockDevice> in_memory(std::uint32_t block_count = kDefaultBlockCount);
  /// Opens a memory device over an existing image (as produced by image()).
  static std::unique_ptr<BlockDevice> from_image(std::vector<std::uint8_t> image);

  ~BlockDevice();
  BlockDevice(const BlockDevice&) = delete;
  BlockDevice& operator=(const BlockDevice&) = delete;

  void read(BlockId id, Block& out);
  void write(BlockId id, const Block& data);

  /// Marks a free block used; throws StorageFullError when none is left.
  BlockId allocate();
  void release(BlockId id);
  bool is_allocated(BlockId id) const;

  std::uint32_t block_count() const noexcept { return block_count_; }
  std::uint32_t free_blocks() const noexcept { return free_blocks_; }
  RootSlot& root_slot(std::size_t i) { return slots_.at(i); }
  const RootSlot& root_slot(std::size_t i) const { return slots_.at(i); }

  /// Whether the device was cleanly closed before this open.
  bool was_clean() const noexcept { return was_clean_; }

  std::uint64_t reads() const noexcept { return reads_; }
  std::uint64_t writes() const noexcept { return writes_; }
  void reset_counters() noexcept { reads_ = writes_ = 0; }

  /// Writes superblock and bitmap.
  void flush(bool clean = false);
  /// Full device contents after a flush (the file bytes for file devices).
  std::vector<std::uint8_t> image();

  class Backing;

 private:
  BlockDevice(std::unique_ptr<Backing> backing, std::uint32_t block_count);
  void format();
  void load();
  std::uint32_t bitmap_blocks() const { return (block_count_ + kBlockSize * 8 - 1) / (kBlockSize * 8); }
  void check_id(BlockId id) const;

  std::unique_ptr<Backing> backing_;
  std::uint32_t block_count_;
  std::vector<std::uint8_t> bitmap_;
  std::uint32_t free_blocks_ = 0;
  std::array<RootSlot, kRootSlots> slots_{};
  bool was_clean_ = true;
  bool valid_ = false;  // superblock and bitmap loaded or formatted
  std::uint64_t reads_ = 0;
  std::uint64_t writes_ = 0;
};

}  // namespace tstore
