#include "tstore/rdf_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tstore/error.hpp"
#include "tstore/random.hpp"
#include "tstore/tuple_store.hpp"

namespace tstore {

// --- parsing ---------------------------------------------------------------------

namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool valid_utf8(std::string_view s, std::size_t& bad) {
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    }
    if ((c & 0xE0) == 0xC0) {
      n = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
      cp = c & 0x07;
    } else {
      bad = i;
      return false;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        bad = i;
        return false;
      }
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    const std::uint32_t min[] = {0, 0x80, 0x800, 0x10000};
    if (cp < min[n] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      bad = i;
      return false;
    }
    i += n + 1;
  }
  return true;
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  std::optional<Triple> parse() {
    std::size_t bad = 0;
    if (!valid_utf8(s_, bad)) fail("invalid UTF-8", bad);
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;

    std::string subject;
    if (peek() == '<') {
      subject = iri();
    } else if (peek() == '_') {
      subject = blank();
    } else {
      fail("subject must be an IRI or a blank node");
    }
    skip_ws();
    if (at_end() || peek() != '<') fail("predicate must be an IRI");
    std::string predicate = iri();
    skip_ws();
    std::string object;
    if (at_end()) fail("missing object");
    if (peek() == '<') {
      object = iri();
    } else if (peek() == '_') {
      object = blank();
    } else if (peek() == '"') {
      object = literal();
    } else {
      fail("object must be an IRI, a blank node or a literal");
    }
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' after the object");
    ++i_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    return Triple{Element(std::move(subject)), Element(std::move(predicate)), Element(std::move(object))};
  }

  TupleTemplate pattern() {
    std::size_t bad = 0;
    if (!valid_utf8(s_, bad)) fail("invalid UTF-8", bad);
    std::vector<TupleTemplate::Slot> slots;
    for (skip_ws(); !at_end(); skip_ws()) {
      switch (peek()) {
        case '*':
          ++i_;
          if (!at_end() && peek() != ' ' && peek() != '\t') fail("'*' must stand alone");
          slots.emplace_back(kWildcard);
          break;
        case '<': slots.emplace_back(Element(iri())); break;
        case '_': slots.emplace_back(Element(blank())); break;
        case '"': slots.emplace_back(Element(literal())); break;
        default: fail("pattern terms are IRIs, blank nodes, literals or '*'");
      }
    }
    return TupleTemplate(std::move(slots));
  }

 private:
  [[noreturn]] void fail(const std::string& what) { fail(what, i_); }
  [[noreturn]] void fail(const std::string& what, std::size_t col) {
    throw ParseError(what + " (column " + std::to_string(col + 1) + ")", line_no_);
  }

  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++i_;
  }

  void uchar() {
    // i_ is on the 'u' or 'U' after a backslash.
    const std::size_t n = peek() == 'u' ? 4 : 8;
    ++i_;
    for (std::size_t k = 0; k < n; ++k, ++i_) {
      if (at_end() || !is_hex(peek())) fail("bad \\u escape");
    }
  }

  std::string iri() {
    const std::size_t start = i_++;
    for (;;) {
      if (at_end()) fail("unterminated IRI", start);
      const char c = peek();
      if (c == '>') break;
      if (c == '\\') {
        ++i_;
        if (at_end() || (peek() != 'u' && peek() != 'U')) fail("only \\u and \\U escapes are allowed in IRIs");
        uchar();
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || std::string_view("<\"{}|^`").find(c) != std::string_view::npos) {
        fail(std::string("character not allowed in IRI"));
      }
      ++i_;
    }
    ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  std::string blank() {
    const std::size_t start = i_;
    if (s_.substr(i_, 2) != "_:") fail("blank node must start with _:");
    i_ += 2;
    auto name_char = [](char c) {
      return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '.' || static_cast<unsigned char>(c) >= 0x80;
    };
    if (at_end() || !(is_alpha(peek()) || is_digit(peek()) || peek() == '_' ||
                      static_cast<unsigned char>(peek()) >= 0x80)) {
      fail("empty or malformed blank node label");
    }
    while (!at_end() && name_char(peek())) ++i_;
    while (s_[i_ - 1] == '.') --i_;  // a label never ends with '.'
    return std::string(s_.substr(start, i_ - start));
  }

  std::string literal() {
    const std::size_t start = i_++;
    for (;;) {
      if (at_end()) fail("unterminated literal", start);
      const char c = peek();
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c == '\\') {
        ++i_;
        if (at_end()) fail("dangling escape");
        const char e = peek();
        if (e == 'u' || e == 'U') {
          uchar();
          continue;
        }
        if (std::string_view("tbnrf\"'\\").find(e) == std::string_view::npos) fail("unknown escape");
      }
      ++i_;
    }
    ++i_;
    if (!at_end() && peek() == '@') {
      ++i_;
      const std::size_t tag = i_;
      while (!at_end() && is_alpha(peek())) ++i_;
      if (i_ == tag) fail("empty language tag");
      while (!at_end() && peek() == '-') {
        ++i_;
        const std::size_t sub = i_;
        while (!at_end() && (is_alpha(peek()) || is_digit(peek()))) ++i_;
        if (i_ == sub) fail("empty language subtag");
      }
    } else if (s_.substr(i_, 2) == "^^") {
      i_ += 2;
      if (at_end() || peek() != '<') fail("datatype must be an IRI");
      iri();
    }
    return std::string(s_.substr(start, i_ - start));
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t i_ = 0;
};

}  // namespace

std::optional<Triple> parse_ntriples_line(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return LineParser(line, line_no).parse();
}

TupleTemplate parse_pattern(std::string_view text) { return LineParser(text, 1).pattern(); }

bool NTriplesReader::next(Triple& out) {
  while (std::getline(*in_, buf_)) {
    ++line_;
    try {
      if (auto t = parse_ntriples_line(buf_, line_)) {
        out = std::move(*t);
        return true;
      }
    } catch (const ParseError& e) {
      if (mode_ == ParseMode::strict) throw;
      if (skipped_++ == 0) first_error_ = e.what();
    }
  }
  if (in_->bad()) throw IoError("read error at line " + std::to_string(line_));
  return false;
}

std::vector<Triple> parse_ntriples(std::string_view text, ParseMode mode, std::size_t* skipped) {
  std::istringstream in{std::string(text)};
  NTriplesReader reader(in, mode);
  std::vector<Triple> out;
  Triple t;
  while (reader.next(t)) out.push_back(std::move(t));
  if (skipped) *skipped = reader.skipped();
  return out;
}

std::vector<Triple> read_ntriples_file(const std::string& path, ParseMode mode, std::size_t* skipped) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  NTriplesReader reader(in, mode);
  std::vector<Triple> out;
  Triple t;
  while (reader.next(t)) out.push_back(std::move(t));
  if (skipped) *skipped = reader.skipped();
  return out;
}

std::string serialize_triple(const Triple& t) {
  std::string out;
  for (const auto& e : t) {
    out += e.bytes();
    out += ' ';
  }
  out += '.';
  return out;
}

std::string serialize_ntriples(const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& t : triples) {
    out += serialize_triple(t);
    out += '\n';
  }
  return out;
}

// --- analysis ------------------------------------------------------------------------

std::vector<CdfPoint> to_cdf(const Histogram& h) {
  std::uint64_t total = 0;
  for (const auto& [v, c] : h) total += c;
  std::vector<CdfPoint> out;
  std::uint64_t running = 0;
  for (const auto& [v, c] : h) {
    running += c;
    out.push_back({v, c, static_cast<double>(running) / static_cast<double>(total)});
  }
  return out;
}

Histogram length_histogram(const std::vector<Triple>& triples) {
  Histogram h;
  for (const auto& t : triples) {
    for (const auto& e : t) ++h[static_cast<std::int64_t>(e.size())];
  }
  return h;
}

namespace {

std::size_t lcp(std::string_view a, std::string_view b) {
  const auto n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

}  // namespace

Histogram prefix_histogram(std::vector<std::string> elems, const PrefixCdfOptions& options) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Histogram h;
  const std::size_t n = elems.size();
  if (n < 2) return h;

  if (options.sample_pairs) {
    Rng rng(options.seed);
    for (std::uint64_t k = 0; k < *options.sample_pairs; ++k) {
      const auto i = rng.below(n);
      auto j = rng.below(n - 1);
      if (j >= i) ++j;
      ++h[static_cast<std::int64_t>(lcp(elems[i], elems[j]))];
    }
    return h;
  }
  if (n > options.max_elements) {
    throw UsageError(std::to_string(n) + " distinct elements exceed the exact prefix bound of " +
                     std::to_string(options.max_elements) + "; request sampling");
  }

  // In sorted order the LCP of elements i < j is the minimum of the adjacent
  // LCPs a[i..j-1]; count, for each a[k], the ranges in which it is the
  // leftmost minimum.
  std::vector<std::size_t> a(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) a[k] = lcp(elems[k], elems[k + 1]);
  const std::size_t m = a.size();
  std::vector<std::uint64_t> left(m), right(m);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < m; ++k) {
    while (!stack.empty() && a[stack.back()] > a[k]) stack.pop_back();
    left[k] = stack.empty() ? k + 1 : k - stack.back();
    stack.push_back(k);
  }
  stack.clear();
  for (std::size_t k = m; k-- > 0;) {
    while (!stack.empty() && a[stack.back()] >= a[k]) stack.pop_back();
    right[k] = stack.empty() ? m - k : stack.back() - k;
    stack.push_back(k);
  }
  for (std::size_t k = 0; k < m; ++k) h[static_cast<std::int64_t>(a[k])] += left[k] * right[k];
  return h;
}

Histogram prefix_histogram(const std::vector<Triple>& triples, const PrefixCdfOptions& options) {
  std::vector<std::string> elems;
  elems.reserve(triples.size() * 3);
  for (const auto& t : triples) {
    for (const auto& e : t) elems.push_back(e.str());
  }
  return prefix_histogram(std::move(elems), options);
}

Histogram saved_bits_histogram(const std::vector<Triple>& triples, const HuffmanTree& tree) {
  Histogram h;
  for (const auto& t : triples) {
    for (const auto& e : t) ++h[tree.saved_bits(e.bytes())];
  }
  return h;
}

double huffman_savings(const std::vector<Triple>& triples, const HuffmanTree& tree) {
  std::int64_t saved = 0;
  std::uint64_t plain = 0;
  for (const auto& t : triples) {
    for (const auto& e : t) {
      saved += tree.saved_bits(e.bytes());
      plain += 8 * e.size();
    }
  }
  return plain == 0 ? 0.0 : static_cast<double>(saved) / static_cast<double>(plain);
}

double median_saved_fraction(const std::vector<Triple>& triples, const HuffmanTree& tree) {
  std::vector<double> f;
  for (const auto& t : triples) {
    for (const auto& e : t) {
      if (!e.empty()) f.push_back(static_cast<double>(tree.saved_bits(e.bytes())) / (8.0 * static_cast<double>(e.size())));
    }
  }
  if (f.empty()) return 0.0;
  std::sort(f.begin(), f.end());
  const std::size_t n = f.size();
  return n % 2 ? f[n / 2] : (f[n / 2 - 1] + f[n / 2]) / 2;
}

CompressionReport compression_report(const std::vector<Triple>& triples, const HuffmanTree& tree) {
  CompressionReport r;
  for (const auto& t : triples) {
    for (const auto& e : t) {
      r.original += e.size();
      r.huffman += tree.encode_packed(e.bytes()).size();
    }
  }
  const auto shared_tree = std::shared_ptr<const HuffmanTree>(&tree, [](const HuffmanTree*) {});
  auto dictionary_bytes = [&](DictionaryKind kind) {
    StoreConfig cfg;
    cfg.arity = 3;
    cfg.dictionary = kind;
    cfg.container = ContainerKind::list;
    cfg.codec = CodecKind::huffman;
    cfg.tree = shared_tree;
    TupleStore store(cfg);
    for (const auto& t : triples) store.insert(t);
    return store.stats().dict_resident_bytes + 4 * 3 * store.size();
  };
  r.huffman_avl = dictionary_bytes(DictionaryKind::avl);
  r.huffman_prescilla = dictionary_bytes(DictionaryKind::prescilla);
  return r;
}

// --- CSV -----------------------------------------------------------------------------

namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_histogram_csv(std::ostream& out, std::string_view kind, std::string_view value_column, const Histogram& h) {
  out << "# tstore-csv " << kind << " v" << kCsvVersion << "\n" << value_column << ",count,cdf\n";
  for (const auto& p : to_cdf(h)) out << p.value << ',' << p.count << ',' << fixed6(p.cumulative) << '\n';
}

void write_report_csv(std::ostream& out, const CompressionReport& r) {
  out << "# tstore-csv compression-report v" << kCsvVersion << "\nconfiguration,bytes,fraction_of_original\n";
  const auto row = [&](const char* name, std::uint64_t v) {
    out << name << ',' << v << ','
        << fixed6(r.original == 0 ? 0.0 : static_cast<double>(v) / static_cast<double>(r.original)) << '\n';
  };
  row("original", r.original);
  row("huffman", r.huffman);
  row("huffman_avl", r.huffman_avl);
  row("huffman_prescilla", r.huffman_prescilla);
}

}  // namespace tstore
