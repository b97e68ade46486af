#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tstore/bench.hpp"
#include "tstore/error.hpp"
#include "tstore/rdf_io.hpp"
#include "tstore/tuple_store.hpp"

namespace {

using namespace tstore;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNoMatch = 4;

struct StoreOptions {
  std::string config_file;
  std::vector<std::string> settings;
  std::string device;
};

void add_store_options(CLI::App* cmd, StoreOptions& o) {
  cmd->add_option("--config", o.config_file, "Store configuration file (key = value lines or JSON)");
  cmd->add_option("--set", o.settings, "Configuration override key=value (repeatable)");
  cmd->add_option("--device", o.device, "Device file for block-backed dictionary and container");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StoreConfig build_config(const StoreOptions& o) {
  StoreConfig cfg = o.config_file.empty() ? StoreConfig{} : StoreConfig::parse(read_file(o.config_file));
  bool chose_components = !o.config_file.empty();
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    chose_components = chose_components || key == "dictionary" || key == "container";
    cfg.set(key, kv.substr(eq + 1));
  }
  if (!o.device.empty()) {
    cfg.device_path = o.device;
    if (!chose_components) {
      cfg.dictionary = DictionaryKind::block;
      cfg.container = ContainerKind::block;
    }
  }
  cfg.validate();
  return cfg;
}

void print_summary(std::ostream& out, const TupleStore& store) {
  const StoreStats s = store.stats();
  out << "config: " << store.config().id() << '\n'
      << "tuples: " << s.tuples << '\n'
      << "dict_entries: " << s.dict_entries << '\n'
      << "dict_stored_bytes: " << s.dict_stored_bytes << '\n'
      << "comparisons: " << s.comparisons << '\n';
  if (store.device()) out << "block_reads: " << s.block_reads << '\n' << "block_writes: " << s.block_writes << '\n';
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  fn(out);
}

// --- commands --------------------------------------------------------------------

struct IngestArgs {
  StoreOptions store;
  std::string file;
  bool lenient = false;
  bool dump = false;
  std::size_t group_bytes = 1024;
};

int cmd_ingest(const IngestArgs& a) {
  TupleStore store(build_config(a.store));
  std::size_t skipped = 0;
  const auto triples = read_ntriples_file(a.file, a.lenient ? ParseMode::skip_and_count : ParseMode::strict, &skipped);
  std::size_t inserted = 0, duplicates = 0, groups = 0;
  int status = 0;
  try {
    for (const auto& group : insert_groups(triples, a.group_bytes)) {
      ++groups;
      for (const auto& t : group) (store.insert(t) ? inserted : duplicates) += 1;
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity error after inserting " << inserted << " triples: " << e.what() << '\n';
    status = kExitCapacity;
  }
  store.flush();
  std::cout << "read: " << triples.size() << '\n'
            << "skipped_lines: " << skipped << '\n'
            << "groups: " << groups << '\n'
            << "inserted: " << inserted << '\n'
            << "duplicates: " << duplicates << '\n';
  print_summary(std::cout, store);
  if (a.dump) {
    auto stream = store.query(TupleTemplate::any(store.arity()));
    Tuple t;
    while (stream.next(t)) std::cout << serialize_triple(t) << '\n';
  }
  return status;
}

struct QueryArgs {
  StoreOptions store;
  std::vector<std::string> pattern;
  std::string input;
};

TupleStore open_for_query(const QueryArgs& a) {
  if (a.store.device.empty() && a.input.empty()) throw UsageError("query and erase need --device or --input");
  TupleStore store(build_config(a.store));
  if (!a.input.empty()) {
    for (const auto& t : read_ntriples_file(a.input)) store.insert(t);
  }
  return store;
}

int cmd_query(const QueryArgs& a) {
  const TupleTemplate tmpl = parse_pattern(join(a.pattern));
  TupleStore store = open_for_query(a);
  auto stream = store.query(tmpl);
  Tuple t;
  std::size_t n = 0;
  while (stream.next(t)) {
    std::cout << serialize_triple(t) << '\n';
    ++n;
  }
  return n == 0 ? kExitNoMatch : 0;
}

int cmd_erase(const QueryArgs& a) {
  const TupleTemplate tmpl = parse_pattern(join(a.pattern));
  TupleStore store = open_for_query(a);
  const std::size_t n = store.erase_matching(tmpl);
  store.flush();
  std::cout << "erased: " << n << '\n' << "tuples: " << store.size() << '\n';
  return 0;
}

struct StatsArgs {
  std::string file;
  std::string out_dir = ".";
  std::string tree;
  std::size_t max_elements = PrefixCdfOptions{}.max_elements;
  std::uint64_t sample_pairs = 0;
  std::uint64_t seed = 1;
};

HuffmanTree load_tree(const std::string& path) {
  if (path.empty()) return default_tree();
  const std::string bytes = read_file(path);
  return HuffmanTree::deserialize(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

int cmd_stats(const StatsArgs& a) {
  const auto triples = read_ntriples_file(a.file);
  const HuffmanTree tree = load_tree(a.tree);
  PrefixCdfOptions popt;
  popt.max_elements = a.max_elements;
  popt.seed = a.seed;
  if (a.sample_pairs > 0) popt.sample_pairs = a.sample_pairs;

  const Histogram lengths = length_histogram(triples);
  const Histogram prefixes = prefix_histogram(triples, popt);
  const Histogram saved = saved_bits_histogram(triples, tree);
  const CompressionReport report = compression_report(triples, tree);

  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  write_output((dir / "lengths.csv").string(), [&](std::ostream& o) { write_histogram_csv(o, "lengths", "length", lengths); });
  write_output((dir / "prefix_cdf.csv").string(),
               [&](std::ostream& o) { write_histogram_csv(o, "prefix-cdf", "common_prefix", prefixes); });
  write_output((dir / "saved_bits.csv").string(),
               [&](std::ostream& o) { write_histogram_csv(o, "saved-bits", "saved_bits", saved); });
  write_output((dir / "compression_report.csv").string(), [&](std::ostream& o) { write_report_csv(o, report); });

  std::cout << "triples: " << triples.size() << '\n'
            << "elements: " << 3 * triples.size() << '\n'
            << "huffman_savings: " << huffman_savings(triples, tree) << '\n'
            << "median_saved_fraction: " << median_saved_fraction(triples, tree) << '\n'
            << "original: " << report.original << '\n'
            << "huffman: " << report.huffman << '\n'
            << "huffman_avl: " << report.huffman_avl << '\n'
            << "huffman_prescilla: " << report.huffman_prescilla << '\n';
  return 0;
}

struct BenchArgs {
  StoreOptions store;
  std::string file;
  std::string generate;
  std::size_t triples = 1000;
  std::string configs = "avl+static+none";
  std::size_t queries = 100;
  std::size_t group_bytes = 1024;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  if (!a.store.device.empty()) throw UsageError("bench runs on in-memory devices; --device is not supported here");
  if (a.file.empty() == a.generate.empty()) throw UsageError("bench needs either a dataset file or --generate");
  const auto data = a.file.empty() ? generate_corpus(parse_corpus_kind(a.generate), a.triples, a.seed)
                                   : read_ntriples_file(a.file);
  const auto configs = expand_configs(a.configs, build_config(a.store));
  BenchOptions opt;
  opt.seed = a.seed;
  opt.queries = a.queries;
  opt.group_bytes = a.group_bytes;
  write_output(a.out, [&](std::ostream& out) {
    write_bench_csv_header(out);
    for (const auto& cfg : configs) {
      const BenchResult r = run_bench(cfg, data, opt);
      write_bench_csv(out, r.records);
      std::cerr << cfg.id() << ": inserted " << r.inserted << " of " << data.size();
      if (r.capacity_reached) std::cerr << " (capacity: " << r.capacity_message << ')';
      std::cerr << '\n';
    }
  });
  return 0;
}

struct GenerateArgs {
  std::string kind;
  std::size_t triples = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  const auto triples = generate_corpus(parse_corpus_kind(a.kind), a.triples, a.seed);
  write_output(a.out, [&](std::ostream& o) { o << serialize_ntriples(triples); });
  return 0;
}

struct TreeArgs {
  std::vector<std::string> files;
  std::string out;
  std::string table;
};

int cmd_build_tree(const TreeArgs& a) {
  SymbolFrequencies freqs{};
  for (const auto& f : a.files) {
    for (const auto& t : read_ntriples_file(f)) {
      for (const auto& e : t) accumulate_frequencies(freqs, e.bytes());
    }
  }
  const HuffmanTree tree = HuffmanTree::build(freqs);
  const auto bytes = tree.serialize_succinct();
  write_output(a.out, [&](std::ostream& o) { o.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())); });
  if (!a.table.empty()) {
    write_output(a.table, [&](std::ostream& o) {
      for (std::size_t i = 0; i < freqs.size(); ++i) o << freqs[i] << (i + 1 == freqs.size() ? "\n" : i % 8 == 7 ? ",\n" : ", ");
    });
  }
  std::cerr << "tree: " << tree.leaf_count() << " leaves, " << bytes.size() << " bytes, max code length "
            << tree.max_code_length() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tuple store for RDF triples with pluggable dictionaries"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Load an N-Triples file into a store");
  c_ingest->add_option("file", ingest.file, "N-Triples input")->required();
  add_store_options(c_ingest, ingest.store);
  c_ingest->add_flag("--lenient", ingest.lenient, "Skip and count malformed lines");
  c_ingest->add_flag("--dump", ingest.dump, "Print the stored triples afterwards");
  c_ingest->add_option("--group-bytes", ingest.group_bytes, "Insert group size in plain element bytes");

  QueryArgs query;
  auto* c_query = app.add_subcommand("query", "Print triples matching a pattern ('*' is a wildcard)");
  c_query->add_option("pattern", query.pattern, "Pattern terms")->required();
  c_query->add_option("--input", query.input, "N-Triples file to load first");
  add_store_options(c_query, query.store);

  QueryArgs erase;
  auto* c_erase = app.add_subcommand("erase", "Erase triples matching a pattern");
  c_erase->add_option("pattern", erase.pattern, "Pattern terms")->required();
  c_erase->add_option("--input", erase.input, "N-Triples file to load first");
  add_store_options(c_erase, erase.store);

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Write length, prefix, saved-bits and compression CSVs");
  c_stats->add_option("file", stats.file, "N-Triples input")->required();
  c_stats->add_option("--out", stats.out_dir, "Output directory");
  c_stats->add_option("--tree", stats.tree, "Huffman tree file (default: bundled tree)");
  c_stats->add_option("--max-elements", stats.max_elements, "Exact prefix analysis bound");
  c_stats->add_option("--sample-pairs", stats.sample_pairs, "Sample this many element pairs instead");
  c_stats->add_option("--seed", stats.seed, "Sampling seed");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Insert, query and erase benchmark with CSV output");
  c_bench->add_option("file", bench.file, "N-Triples dataset");
  c_bench->add_option("--generate", bench.generate, "Synthetic dataset kind (btc, ssp)");
  c_bench->add_option("--triples", bench.triples, "Synthetic dataset size");
  c_bench->add_option("--configs", bench.configs, "'all' or comma-separated dictionary+container+codec ids");
  c_bench->add_option("--queries", bench.queries, "Queries in the query phase");
  c_bench->add_option("--group-bytes", bench.group_bytes, "Insert group size in plain element bytes");
  c_bench->add_option("--seed", bench.seed, "Seed for data generation and patterns");
  c_bench->add_option("--out", bench.out, "CSV output file (default: stdout)");
  add_store_options(c_bench, bench.store);

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Write a synthetic N-Triples corpus");
  c_gen->add_option("kind", gen.kind, "btc or ssp")->required();
  c_gen->add_option("--triples", gen.triples, "Number of triples");
  c_gen->add_option("--seed", gen.seed, "Generator seed");
  c_gen->add_option("--out", gen.out, "Output file (default: stdout)");

  TreeArgs tree;
  auto* c_tree = app.add_subcommand("build-tree", "Build a Huffman tree from N-Triples files");
  c_tree->add_option("files", tree.files, "N-Triples inputs")->required();
  c_tree->add_option("--out", tree.out, "Tree file")->required();
  c_tree->add_option("--emit-table", tree.table, "Also write the frequency table as C initializer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c_ingest) return cmd_ingest(ingest);
    if (*c_query) return cmd_query(query);
    if (*c_erase) return cmd_erase(erase);
    if (*c_stats) return cmd_stats(stats);
    if (*c_bench) return cmd_bench(bench);
    if (*c_gen) return cmd_generate(gen);
    if (*c_tree) return cmd_build_tree(tree);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
