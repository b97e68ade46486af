#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tstore/element.hpp"
#include "tstore/huffman.hpp"

namespace tstore {

/// An RDF triple: a Tuple of arity 3 holding the lexical tokens of subject,
/// predicate and object exactly as they appear in N-Triples.
using Triple = Tuple;

enum class ParseMode {
  strict,         ///< the first malformed line raises ParseError
  skip_and_count  ///< malformed lines are skipped and counted
};

/// Parses one N-Triples line. Returns nullopt for blank and comment lines and
/// throws ParseError (carrying `line_no`) for malformed ones.
std::optional<Triple> parse_ntriples_line(std::string_view line, std::size_t line_no = 1);

/// Parses whitespace-separated N-Triples terms, `*` standing for a wildcard,
/// e.g. `<http://a> * "v"`. Throws ParseError.
TupleTemplate parse_pattern(std::string_view text);

/// Streaming line reader.
class NTriplesReader {
 public:
  explicit NTriplesReader(std::istream& in, ParseMode mode = ParseMode::strict) : in_(&in), mode_(mode) {}

  bool next(Triple& out);
  std::size_t skipped() const noexcept { return skipped_; }
  std::size_t line() const noexcept { return line_; }
  /// Message of the first skipped line, if any.
  const std::string& first_error() const noexcept { return first_error_; }

 private:
  std::istream* in_;
  ParseMode mode_;
  std::size_t line_ = 0;
  std::size_t skipped_ = 0;
  std::string first_error_;
  std::string buf_;
};

std::vector<Triple> parse_ntriples(std::string_view text, ParseMode mode = ParseMode::strict,
                                   std::size_t* skipped = nullptr);
std::vector<Triple> read_ntriples_file(const std::string& path, ParseMode mode = ParseMode::strict,
                                       std::size_t* skipped = nullptr);

/// Canonical line: tokens separated by one space, then " .".
std::string serialize_triple(const Triple& t);
std::string serialize_ntriples(const std::vector<Triple>& triples);

// --- dataset analysis ------------------------------------------------------------

/// value -> count
using Histogram = std::map<std::int64_t, std::uint64_t>;

struct CdfPoint {
  std::int64_t value;
  std::uint64_t count;
  double cumulative;  ///< fraction of the total at or below value
};
std::vector<CdfPoint> to_cdf(const Histogram& h);

/// Byte lengths of all element occurrences.
Histogram length_histogram(const std::vector<Triple>& triples);

struct PrefixCdfOptions {
  /// Distinct-element bound above which an exact run is refused.
  std::size_t max_elements = 200000;
  /// Number of random pairs to draw instead of enumerating all pairs.
  std::optional<std::uint64_t> sample_pairs;
  std::uint64_t seed = 1;
};

/// Longest-common-prefix lengths over all unordered pairs of distinct
/// elements. Throws UsageError above the element bound unless sampling.
Histogram prefix_histogram(const std::vector<Triple>& triples, const PrefixCdfOptions& options = {});
Histogram prefix_histogram(std::vector<std::string> elements, const PrefixCdfOptions& options = {});

/// Saved bits per element occurrence under `tree`.
Histogram saved_bits_histogram(const std::vector<Triple>& triples, const HuffmanTree& tree);

/// Element-wise savings over all occurrences: 1 - encoded bits / plain bits.
double huffman_savings(const std::vector<Triple>& triples, const HuffmanTree& tree);

/// Median over non-empty element occurrences of saved bits / plain bits.
double median_saved_fraction(const std::vector<Triple>& triples, const HuffmanTree& tree);

/// Bytes needed under four store configurations.
struct CompressionReport {
  std::uint64_t original = 0;           ///< sum of element lengths
  std::uint64_t huffman = 0;            ///< sum of packed encoded lengths
  std::uint64_t huffman_avl = 0;        ///< AVL resident bytes + 4 per key reference
  std::uint64_t huffman_prescilla = 0;  ///< Prescilla resident bytes + 4 per key reference
};

/// Original and Huffman rows cover every input triple; the dictionary rows
/// load the triples into a store (so duplicate triples count once).
CompressionReport compression_report(const std::vector<Triple>& triples, const HuffmanTree& tree);

// --- CSV output --------------------------------------------------------------------

/// Every CSV starts with "# tstore-csv <kind> v<version>" followed by a header row.
inline constexpr int kCsvVersion = 1;

void write_histogram_csv(std::ostream& out, std::string_view kind, std::string_view value_column,
                         const Histogram& h);
void write_report_csv(std::ostream& out, const CompressionReport& r);

// --- synthetic corpora ---------------------------------------------------------------

enum class CorpusKind {
  btc,  ///< diverse URIs from many hosts, mostly unique elements
  ssp   ///< sensor observations under one dominant service prefix
};
CorpusKind parse_corpus_kind(std::string_view s);

/// Deterministic for a given (kind, count, seed) on every platform.
std::vector<Triple> generate_corpus(CorpusKind kind, std::size_t triples, std::uint64_t seed);

}  // namespace tstore
