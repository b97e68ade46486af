#include "tstore/block_device.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "tstore/detail/byte_order.hpp"
#include "tstore/error.hpp"

namespace tstore {

using detail::load_le16;
using detail::load_le32;
using detail::load_le64;
using detail::store_le16;
using detail::store_le32;
using detail::store_le64;

namespace {

constexpr std::size_t kSlotOffset = 24;
constexpr std::size_t kSlotBytes = 24;
constexpr std::uint32_t kBitmapStart = 1;

}  // namespace

class BlockDevice::Backing {
 public:
  virtual ~Backing() = default;
  virtual void read(BlockId id, Block& out) = 0;
  virtual void write(BlockId id, const Block& data) = 0;
  virtual std::uint64_t size_bytes() = 0;
  virtual std::vector<std::uint8_t> contents() = 0;
};

namespace {

class MemoryBacking final : public BlockDevice::Backing {
 public:
  explicit MemoryBacking(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

  void read(BlockId id, Block& out) override {
    std::memcpy(out.data(), bytes_.data() + std::size_t{id} * kBlockSize, kBlockSize);
  }
  void write(BlockId id, const Block& data) override {
    std::memcpy(bytes_.data() + std::size_t{id} * kBlockSize, data.data(), kBlockSize);
  }
  std::uint64_t size_bytes() override { return bytes_.size(); }
  std::vector<std::uint8_t> contents() override { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class FileBacking final : public BlockDevice::Backing {
 public:
  explicit FileBacking(const std::filesystem::path& path) : path_(path) {
    file_.open(path, std::ios::in | std::ios::out | std::ios::binary);
    if (!file_) throw IoError("cannot open device file " + path.string());
  }

  void read(BlockId id, Block& out) override {
    file_.seekg(static_cast<std::streamoff>(std::size_t{id} * kBlockSize));
    file_.read(reinterpret_cast<char*>(out.data()), kBlockSize);
    if (!file_) throw IoError("short read of block " + std::to_string(id) + " from " + path_.string());
  }
  void write(BlockId id, const Block& data) override {
    file_.seekp(static_cast<std::streamoff>(std::size_t{id} * kBlockSize));
    file_.write(reinterpret_cast<const char*>(data.data()), kBlockSize);
    if (!file_) throw IoError("write of block " + std::to_string(id) + " to " + path_.string() + " failed");
  }
  std::uint64_t size_bytes() override { return std::filesystem::file_size(path_); }
  std::vector<std::uint8_t> contents() override {
    file_.flush();
    std::ifstream in(path_, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

 private:
  std::filesystem::path path_;
  std::fstream file_;
};

}  // namespace

BlockDevice::BlockDevice(std::unique_ptr<Backing> backing, std::uint32_t block_count)
    : backing_(std::move(backing)), block_count_(block_count) {}

BlockDevice::~BlockDevice() {
  if (!valid_) return;
  try {
    flush(true);
  } catch (...) {
    // Destructors must not throw; an unflushed device reopens as unclean.
  }
}

std::unique_ptr<BlockDevice> BlockDevice::open(const std::filesystem::path& path, bool create,
                                               std::uint32_t block_count) {
  if (create) {
    if (block_count < 8 || block_count > kMaxBlockCount) throw UsageError("block count out of range");
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create device file " + path.string());
    }
    std::filesystem::resize_file(path, std::uint64_t{block_count} * kBlockSize);
    std::unique_ptr<BlockDevice> dev(new BlockDevice(std::make_unique<FileBacking>(path), block_count));
    dev->format();
    return dev;
  }
  if (!std::filesystem::exists(path)) throw IoError("device file " + path.string() + " does not exist");
  auto backing = std::make_unique<FileBacking>(path);
  const auto size = backing->size_bytes();
  if (size < kBlockSize || size % kBlockSize != 0) throw FormatError("device file size is not a multiple of 512");
  std::unique_ptr<BlockDevice> dev(new BlockDevice(std::move(backing), static_cast<std::uint32_t>(size / kBlockSize)));
  dev->load();
  return dev;
}

std::unique_ptr<BlockDevice> BlockDevice::in_memory(std::uint32_t block_count) {
  if (block_count < 8 || block_count > kMaxBlockCount) throw UsageError("block count out of range");
  std::unique_ptr<BlockDevice> dev(new BlockDevice(
      std::make_unique<MemoryBacking>(std::vector<std::uint8_t>(std::size_t{block_count} * kBlockSize)), block_count));
  dev->format();
  return dev;
}

std::unique_ptr<BlockDevice> BlockDevice::from_image(std::vector<std::uint8_t> image) {
  if (image.size() < kBlockSize || image.size() % kBlockSize != 0) {
    throw FormatError("device image size is not a multiple of 512");
  }
  const auto blocks = static_cast<std::uint32_t>(image.size() / kBlockSize);
  std::unique_ptr<BlockDevice> dev(new BlockDevice(std::make_unique<MemoryBacking>(std::move(image)), blocks));
  dev->load();
  return dev;
}

void BlockDevice::format() {
  bitmap_.assign(std::size_t{bitmap_blocks()} * kBlockSize, 0);
  free_blocks_ = block_count_;
  for (BlockId b = 0; b < kBitmapStart + bitmap_blocks(); ++b) {
    bitmap_[b / 8] |= static_cast<std::uint8_t>(1u << (b % 8));
    --free_blocks_;
  }
  slots_ = {};
  valid_ = true;
  flush(false);
}

void BlockDevice::load() {
  Block sb;
  backing_->read(0, sb);
  ++reads_;
  if (!std::equal(kMagic.begin(), kMagic.end(), sb.begin())) throw FormatError("not a tuple store device (bad magic)");
  if (load_le16(sb.data() + 4) != kVersion) {
    throw FormatError("unsupported device format version " + std::to_string(load_le16(sb.data() + 4)));
  }
  if (load_le16(sb.data() + 6) != kBlockSize) throw FormatError("device block size is not 512");
  if (load_le32(sb.data() + 8) != block_count_) throw FormatError("superblock block count disagrees with file size");
  if (load_le32(sb.data() + 12) != kBitmapStart || load_le32(sb.data() + 16) != bitmap_blocks()) {
    throw FormatError("unexpected bitmap placement");
  }
  was_clean_ = sb[20] == 1;
  for (std::size_t i = 0; i < kRootSlots; ++i) {
    const std::uint8_t* p = sb.data() + kSlotOffset + i * kSlotBytes;
    slots_[i] = RootSlot{load_le32(p), load_le32(p + 4), load_le32(p + 8), load_le32(p + 12), load_le64(p + 16)};
  }
  bitmap_.assign(std::size_t{bitmap_blocks()} * kBlockSize, 0);
  for (std::uint32_t b = 0; b < bitmap_blocks(); ++b) {
    Block blk;
    backing_->read(kBitmapStart + b, blk);
    ++reads_;
    std::copy(blk.begin(), blk.end(), bitmap_.begin() + std::ptrdiff_t{b} * kBlockSize);
  }
  std::uint32_t used = 0;
  for (std::uint32_t b = 0; b < block_count_; ++b) used += is_allocated(b);
  free_blocks_ = block_count_ - used;
  valid_ = true;
  // Mark the device open; a clean close sets the flag again.
  flush(false);
}

void BlockDevice::flush(bool clean) {
  Block sb{};
  std::copy(kMagic.begin(), kMagic.end(), sb.begin());
  store_le16(sb.data() + 4, kVersion);
  store_le16(sb.data() + 6, kBlockSize);
  store_le32(sb.data() + 8, block_count_);
  store_le32(sb.data() + 12, kBitmapStart);
  store_le32(sb.data() + 16, bitmap_blocks());
  sb[20] = clean ? 1 : 0;
  for (std::size_t i = 0; i < kRootSlots; ++i) {
    std::uint8_t* p = sb.data() + kSlotOffset + i * kSlotBytes;
    store_le32(p, slots_[i].root);
    store_le32(p + 4, slots_[i].height);
    store_le32(p + 8, slots_[i].count);
    store_le32(p + 12, slots_[i].append_page);
    store_le64(p + 16, slots_[i].bytes);
  }
  backing_->write(0, sb);
  ++writes_;
  for (std::uint32_t b = 0; b < bitmap_blocks(); ++b) {
    Block blk;
    std::copy_n(bitmap_.begin() + std::ptrdiff_t{b} * kBlockSize, kBlockSize, blk.begin());
    backing_->write(kBitmapStart + b, blk);
    ++writes_;
  }
}

std::vector<std::uint8_t> BlockDevice::image() {
  flush(false);
  return backing_->contents();
}

void BlockDevice::check_id(BlockId id) const {
  if (id >= block_count_) {
    throw InvalidKeyError("block " + std::to_string(id) + " beyond device end (" + std::to_string(block_count_) + ")");
  }
}

void BlockDevice::read(BlockId id, Block& out) {
  check_id(id);
  backing_->read(id, out);
  ++reads_;
}

void BlockDevice::write(BlockId id, const Block& data) {
  check_id(id);
  if (id < kBitmapStart + bitmap_blocks()) throw UsageError("metadata blocks are written only by flush()");
  backing_->write(id, data);
  ++writes_;
}

bool BlockDevice::is_allocated(BlockId id) const {
  return id < block_count_ && (bitmap_[id / 8] >> (id % 8)) & 1u;
}

BlockId BlockDevice::allocate() {
  if (free_blocks_ == 0) throw StorageFullError("block device full (" + std::to_string(block_count_) + " blocks)");
  for (std::size_t byte = 0; byte < bitmap_.size(); ++byte) {
    if (bitmap_[byte] == 0xFF) continue;
    const unsigned bit = static_cast<unsigned>(std::countr_one(bitmap_[byte]));
    const auto id = static_cast<BlockId>(byte * 8 + bit);
    if (id >= block_count_) break;
    bitmap_[byte] |= static_cast<std::uint8_t>(1u << bit);
    --free_blocks_;
    return id;
  }
  throw StorageFullError("block device full");
}

void BlockDevice::release(BlockId id) {
  if (!is_allocated(id) || id < kBitmapStart + bitmap_blocks()) {
    throw InvalidKeyError("release of unallocated block " + std::to_string(id));
  }
  bitmap_[id / 8] &= static_cast<std::uint8_t>(~(1u << (id % 8)));
  ++free_blocks_;
}

}  // namespace tstore
