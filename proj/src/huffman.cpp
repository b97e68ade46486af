#include "tstore/huffman.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

#include "tstore/error.hpp"

namespace tstore {

namespace {

constexpr std::size_t kMaxCodeLength = 64;

class BitWriter {
 public:
  void put(std::uint64_t bits, unsigned count) {
    for (unsigned i = count; i-- > 0;) put_bit((bits >> i) & 1u);
  }
  void put_bit(unsigned bit) {
    if (length_ % 8 == 0) out_.push_back(0);
    if (bit) out_.back() |= static_cast<std::uint8_t>(0x80u >> (length_ % 8));
    ++length_;
  }
  std::size_t length() const { return length_; }
  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
  std::size_t length_ = 0;
};

inline unsigned bit_at(std::span<const std::uint8_t> bytes, std::size_t i) {
  return (bytes[i / 8] >> (7 - i % 8)) & 1u;
}

}  // namespace

void accumulate_frequencies(SymbolFrequencies& freqs, std::string_view text) {
  for (char c : text) {
    auto b = static_cast<std::uint8_t>(c);
    if (b < kAlphabetSize) ++freqs[b];
  }
}

std::string pack(const EncodedElement& enc) {
  if (enc.bit_length == 0) return {};
  const std::size_t total = (enc.bit_length + 3 + 7) / 8;
  const unsigned pad = static_cast<unsigned>(total * 8 - 3 - enc.bit_length);
  std::string out(total, '\0');
  std::copy(enc.bits.begin(), enc.bits.end(), out.begin());
  out.back() = static_cast<char>(static_cast<std::uint8_t>(out.back()) | pad);
  return out;
}

EncodedElement unpack(std::string_view packed) {
  EncodedElement enc;
  if (packed.empty()) return enc;
  const auto last = static_cast<std::uint8_t>(packed.back());
  const unsigned pad = last & 7u;
  const std::size_t total_bits = packed.size() * 8;
  if (total_bits < 3 + pad + 1) throw CorruptionError("packed element too short for its trailer");
  enc.bit_length = static_cast<std::uint32_t>(total_bits - 3 - pad);
  enc.bits.assign(packed.begin(), packed.begin() + static_cast<std::ptrdiff_t>((enc.bit_length + 7) / 8));
  // Clear trailer and check that the pad bits are zero.
  const std::size_t tail = enc.bit_length % 8;
  if (enc.bits.size() == packed.size()) {
    enc.bits.back() &= static_cast<std::uint8_t>(~7u);
  } else if (last & ~7u) {
    throw CorruptionError("nonzero pad bits in packed element");
  }
  if (tail != 0) {
    const auto mask = static_cast<std::uint8_t>(0xFFu >> tail);
    if (enc.bits.back() & mask) throw CorruptionError("nonzero pad bits in packed element");
  }
  return enc;
}

HuffmanTree HuffmanTree::build(const SymbolFrequencies& freqs) {
  const auto nonzero = std::count_if(freqs.begin(), freqs.end(), [](auto c) { return c > 0; });
  if (nonzero < 2) {
    throw UsageError("a Huffman code needs at least two symbols with nonzero counts");
  }

  struct Node {
    std::uint64_t weight;
    std::int32_t left, right;  // -1 for leaves
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * kAlphabetSize - 1);
  using Item = std::pair<std::uint64_t, std::int32_t>;  // (weight, node index)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t s = 0; s < kAlphabetSize; ++s) {
    nodes.push_back({std::max<std::uint64_t>(freqs[s], 1), -1, -1});
    heap.emplace(nodes.back().weight, static_cast<std::int32_t>(s));
  }
  while (heap.size() > 1) {
    auto [wa, a] = heap.top();
    heap.pop();
    auto [wb, b] = heap.top();
    heap.pop();
    nodes.push_back({wa + wb, a, b});
    heap.emplace(wa + wb, static_cast<std::int32_t>(nodes.size() - 1));
  }

  std::array<std::uint8_t, kAlphabetSize> lengths{};
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{heap.top().second, 0}};
  while (!stack.empty()) {
    auto [n, depth] = stack.back();
    stack.pop_back();
    if (nodes[n].left < 0) {
      if (depth > kMaxCodeLength) throw UsageError("frequency skew yields a code longer than 64 bits");
      lengths[n] = static_cast<std::uint8_t>(depth);
    } else {
      stack.emplace_back(nodes[n].left, depth + 1);
      stack.emplace_back(nodes[n].right, depth + 1);
    }
  }
  return from_code_lengths(lengths);
}

HuffmanTree HuffmanTree::from_code_lengths(std::span<const std::uint8_t, kAlphabetSize> lengths) {
  HuffmanTree t;
  std::copy(lengths.begin(), lengths.end(), t.lengths_.begin());

  // Kraft sum scaled by 2^64 would overflow; compare in units of 2^-max.
  std::size_t used = 0, max_len = 0;
  for (auto l : t.lengths_) {
    if (l > kMaxCodeLength) throw UsageError("code length exceeds 64 bits");
    if (l) {
      ++used;
      max_len = std::max<std::size_t>(max_len, l);
    }
  }
  if (used < 2) throw UsageError("a Huffman tree needs at least two leaves");
  // Exact Kraft check: count leaves per length and fold bottom-up.
  std::vector<std::uint64_t> per_len(max_len + 1, 0);
  for (auto l : t.lengths_)
    if (l) ++per_len[l];
  std::uint64_t carry = 0;
  for (std::size_t len = max_len; len >= 1; --len) {
    const std::uint64_t nodes = per_len[len] + carry;
    if (nodes % 2 != 0) throw UsageError("code lengths do not form a full binary tree");
    carry = nodes / 2;
  }
  if (carry != 1) throw UsageError("code lengths do not form a full binary tree");

  t.assign_canonical_codes();
  return t;
}

void HuffmanTree::assign_canonical_codes() {
  leaves_.clear();
  for (std::size_t s = 0; s < kAlphabetSize; ++s)
    if (lengths_[s]) leaves_.push_back(static_cast<std::uint8_t>(s));
  std::stable_sort(leaves_.begin(), leaves_.end(),
                   [&](std::uint8_t a, std::uint8_t b) { return lengths_[a] < lengths_[b]; });

  codes_ = {};
  std::uint64_t code = 0;
  unsigned prev = lengths_[leaves_.front()];
  bool first = true;
  for (auto s : leaves_) {
    if (!first) {
      ++code;
      code <<= (lengths_[s] - prev);
    }
    first = false;
    prev = lengths_[s];
    codes_[s] = {lengths_[s], code};
  }

  nodes_.assign(1, {0, 0});
  for (auto s : leaves_) {
    const auto& c = codes_[s];
    std::int32_t n = 0;
    for (unsigned i = c.length; i-- > 1;) {
      const unsigned bit = (c.bits >> i) & 1u;
      if (nodes_[n][bit] == 0) {
        nodes_.push_back({0, 0});
        nodes_[n][bit] = static_cast<std::int32_t>(nodes_.size() - 1);
      }
      n = nodes_[n][bit];
    }
    nodes_[n][c.bits & 1u] = ~static_cast<std::int32_t>(s);
  }
}

std::size_t HuffmanTree::max_code_length() const noexcept {
  return *std::max_element(lengths_.begin(), lengths_.end());
}

std::uint64_t HuffmanTree::weighted_length(const SymbolFrequencies& freqs) const {
  std::uint64_t sum = 0;
  for (std::size_t s = 0; s < kAlphabetSize; ++s) sum += freqs[s] * lengths_[s];
  return sum;
}

std::vector<std::uint8_t> HuffmanTree::serialize_succinct() const {
  // Preorder walk: '(' = 1 on entry, ')' = 0 on exit.
  BitWriter structure;
  std::vector<std::uint8_t> leaf_symbols;
  std::function<void(std::int32_t)> walk_child = [&](std::int32_t child) {
    structure.put_bit(1);
    if (child < 0) {
      leaf_symbols.push_back(static_cast<std::uint8_t>(~child));
    } else {
      walk_child(nodes_[child][0]);
      walk_child(nodes_[child][1]);
    }
    structure.put_bit(0);
  };
  structure.put_bit(1);
  walk_child(nodes_[0][0]);
  walk_child(nodes_[0][1]);
  structure.put_bit(0);

  const auto leaves = static_cast<std::uint16_t>(leaf_symbols.size());
  const auto bits = static_cast<std::uint16_t>(structure.length());
  std::vector<std::uint8_t> out(kTreeMagic.begin(), kTreeMagic.end());
  out.push_back(kTreeFormatVersion);
  out.push_back(static_cast<std::uint8_t>(leaves >> 8));
  out.push_back(static_cast<std::uint8_t>(leaves & 0xFF));
  out.push_back(static_cast<std::uint8_t>(bits >> 8));
  out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
  out.insert(out.end(), structure.bytes().begin(), structure.bytes().end());
  out.insert(out.end(), leaf_symbols.begin(), leaf_symbols.end());
  return out;
}

HuffmanTree HuffmanTree::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kTreeHeaderBytes || !std::equal(kTreeMagic.begin(), kTreeMagic.end(), bytes.begin())) {
    throw FormatError("not a succinct Huffman tree (bad magic)");
  }
  if (bytes[4] != kTreeFormatVersion) {
    throw FormatError("unsupported Huffman tree format version " + std::to_string(bytes[4]));
  }
  const std::size_t leaves = (std::size_t{bytes[5]} << 8) | bytes[6];
  const std::size_t bits = (std::size_t{bytes[7]} << 8) | bytes[8];
  if (leaves < 2 || leaves > kAlphabetSize) throw FormatError("leaf count out of range");
  if (bits != 2 * (2 * leaves - 1)) throw FormatError("structure length does not match leaf count");
  const std::size_t structure_bytes = (bits + 7) / 8;
  if (bytes.size() != kTreeHeaderBytes + structure_bytes + leaves) {
    throw FormatError("succinct tree has wrong total size");
  }
  auto structure = bytes.subspan(kTreeHeaderBytes, structure_bytes);
  auto symbols = bytes.subspan(kTreeHeaderBytes + structure_bytes, leaves);

  // Replay the parentheses, tracking depth; a node closed with no children is
  // a leaf, and inner nodes must have exactly two children.
  std::array<std::uint8_t, kAlphabetSize> lengths{};
  std::vector<unsigned> child_count;  // per open node
  std::size_t next_leaf = 0;
  std::vector<std::uint8_t> order;
  for (std::size_t i = 0; i < bits; ++i) {
    if (bit_at(structure, i)) {
      if (!child_count.empty()) ++child_count.back();
      child_count.push_back(0);
    } else {
      if (child_count.empty()) throw FormatError("unbalanced tree structure");
      const unsigned kids = child_count.back();
      child_count.pop_back();
      if (kids == 0) {
        if (next_leaf >= leaves) throw FormatError("more leaves than declared");
        const auto sym = symbols[next_leaf++];
        if (sym >= kAlphabetSize) throw FormatError("leaf symbol outside ASCII");
        if (lengths[sym]) throw FormatError("duplicate leaf symbol");
        if (child_count.size() > kMaxCodeLength) throw FormatError("tree too deep");
        lengths[sym] = static_cast<std::uint8_t>(child_count.size());
        order.push_back(sym);
      } else if (kids != 2) {
        throw FormatError("inner node without exactly two children");
      }
      if (child_count.empty() && i + 1 != bits) throw FormatError("trailing structure after root");
    }
  }
  if (!child_count.empty() || next_leaf != leaves) throw FormatError("unbalanced tree structure");
  for (std::size_t i = bits; i < structure_bytes * 8; ++i)
    if (bit_at(structure, i)) throw FormatError("nonzero pad bits in tree structure");

  HuffmanTree t = from_code_lengths(lengths);
  if (t.leaves_ != order) throw FormatError("tree is not in canonical form");
  return t;
}

EncodedElement HuffmanTree::encode(std::string_view plain) const {
  BitWriter w;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const auto b = static_cast<std::uint8_t>(plain[i]);
    if (b >= kAlphabetSize || lengths_[b] == 0) {
      throw EncodingError("byte 0x" + [&] {
        const char* hex = "0123456789abcdef";
        return std::string{hex[b >> 4], hex[b & 15]};
      }() + " at offset " + std::to_string(i) + " is not encodable", i);
    }
    w.put(codes_[b].bits, codes_[b].length);
  }
  EncodedElement enc;
  enc.bit_length = static_cast<std::uint32_t>(w.length());
  enc.bits = std::move(w.bytes());
  return enc;
}

std::string HuffmanTree::decode(const EncodedElement& enc) const {
  if (enc.bits.size() != (enc.bit_length + 7) / 8) {
    throw CorruptionError("encoded byte count does not match bit length");
  }
  std::string out;
  std::int32_t n = 0;
  for (std::size_t i = 0; i < enc.bit_length; ++i) {
    const std::int32_t next = nodes_[n][bit_at(enc.bits, i)];
    if (next < 0) {
      out.push_back(static_cast<char>(~next));
      n = 0;
    } else {
      n = next;
    }
  }
  if (n != 0) throw CorruptionError("encoded bits end inside a code word");
  return out;
}

std::string HuffmanTree::encode_packed(std::string_view plain) const { return pack(encode(plain)); }

std::string HuffmanTree::decode_packed(std::string_view packed) const { return decode(unpack(packed)); }

std::int64_t HuffmanTree::saved_bits(std::string_view plain) const {
  return static_cast<std::int64_t>(8 * plain.size()) - static_cast<std::int64_t>(encode(plain).bit_length);
}

}  // namespace tstore
