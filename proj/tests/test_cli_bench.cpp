#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles/shadow_store.hpp"
#include "tstore/bench.hpp"
#include "tstore/rdf_io.hpp"

using namespace tstore;
namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(TSTORE_DATA_DIR) + "/node_fixture.nt";

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string("\"") + TSTORE_CLI + "\" " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string field(const std::string& out, const std::string& key) {
  for (const auto& l : lines(out)) {
    if (l.starts_with(key + ": ")) return l.substr(key.size() + 2);
  }
  return {};
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("tstore-cli-") + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

std::vector<Triple> parse_lines(const std::string& out) {
  std::vector<Triple> ts;
  for (const auto& l : lines(out)) {
    if (l.empty() || (l[0] != '<' && l[0] != '_')) continue;  // summary lines
    if (auto t = parse_ntriples_line(l)) ts.push_back(*t);
  }
  return oracle::sorted(ts);
}

std::string drop_wall_time(const std::string& csv) {
  std::string out;
  for (const auto& l : lines(csv)) {
    std::vector<std::string> cols;
    std::stringstream ss(l);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() > 6) cols.erase(cols.begin() + 6);
    for (const auto& c : cols) out += c + ',';
    out += '\n';
  }
  return out;
}

}  // namespace

TEST(Cli, IngestNodeFixture) {
  const auto r = run("ingest \"" + kFixture + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(field(r.out, "tuples"), "73");
  EXPECT_EQ(field(r.out, "config"), "avl+static+none");
}

TEST(Cli, IngestEmptyFile) {
  TempDir dir;
  std::ofstream(dir / "empty.nt").close();
  const auto r = run("ingest \"" + (dir / "empty.nt").string() + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(field(r.out, "tuples"), "0");
}

TEST(Cli, IngestDumpEqualsInput) {
  const auto r = run("ingest --dump \"" + kFixture + "\"");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(parse_lines(r.out), oracle::sorted(read_ntriples_file(kFixture)));
}

TEST(Cli, QueryAllWildcards) {
  const auto r = run("query '*' '*' '*' --input \"" + kFixture + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).size(), 73u);
}

TEST(Cli, QueryAbsentPatternExitsWithNoMatch) {
  const auto r = run("query '<http://nowhere/s>' '<http://nowhere/p>' '\"x\"' --input \"" + kFixture + "\"");
  EXPECT_EQ(r.status, 4);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, QueryMatchesScanOracle) {
  const auto triples = read_ntriples_file(kFixture);
  oracle::ShadowStore shadow;
  for (const auto& t : triples) shadow.insert(t);
  const std::string pred = triples[0][1].str();
  const auto r = run("query '*' '" + pred + "' '*' --input \"" + kFixture + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(parse_lines(r.out), shadow.query(TupleTemplate{kWildcard, pred, kWildcard}));
}

TEST(Cli, DeviceIngestQueryErase) {
  TempDir dir;
  const std::string dev = (dir / "store.bin").string();
  ASSERT_EQ(run("ingest --device \"" + dev + "\" \"" + kFixture + "\"").status, 0);
  const auto all = run("query '*' '*' '*' --device \"" + dev + "\"");
  EXPECT_EQ(all.status, 0);
  EXPECT_EQ(parse_lines(all.out), oracle::sorted(read_ntriples_file(kFixture)));
  const auto triples = read_ntriples_file(kFixture);
  const std::string subj = triples[0][0].str();
  const auto er = run("erase '" + subj + "' '*' '*' --device \"" + dev + "\"");
  EXPECT_EQ(er.status, 0);
  oracle::ShadowStore shadow;
  for (const auto& t : triples) shadow.insert(t);
  const auto n = shadow.erase_matching(TupleTemplate{subj, kWildcard, kWildcard});
  EXPECT_EQ(field(er.out, "erased"), std::to_string(n));
  const auto rest = run("query '*' '*' '*' --device \"" + dev + "\"");
  EXPECT_EQ(parse_lines(rest.out), shadow.query(TupleTemplate::any(3)));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
  EXPECT_EQ(run("ingest \"" + kFixture + "\" --set colour=blue").status, 1);
  EXPECT_EQ(run("query '*' '*' '*'").status, 1);
  EXPECT_EQ(run("ingest /nonexistent/file.nt").status, 2);
  TempDir dir;
  std::ofstream(dir / "bad.nt") << "<http://a> <http://b> .\n";
  EXPECT_EQ(run("ingest \"" + (dir / "bad.nt").string() + "\"").status, 2);
  EXPECT_EQ(run("ingest --lenient \"" + (dir / "bad.nt").string() + "\"").status, 0);
  const auto cap = run("ingest --set dictionary=chopper --set container=list \"" + kFixture + "\"");
  EXPECT_EQ(cap.status, 3);
  EXPECT_NE(field(cap.out, "inserted"), "73");
}

TEST(Cli, ConfigFile) {
  TempDir dir;
  std::ofstream(dir / "store.conf") << "dictionary = prescilla\ncontainer = list\ncodec = huffman\n";
  const auto r = run("ingest --config \"" + (dir / "store.conf").string() + "\" \"" + kFixture + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(field(r.out, "config"), "prescilla+list+huffman");
  EXPECT_EQ(field(r.out, "tuples"), "73");
}

TEST(Cli, StatsMatchDirectCalls) {
  TempDir dir;
  const auto r = run("stats \"" + kFixture + "\" --out \"" + dir.str() + "\"");
  ASSERT_EQ(r.status, 0);
  const auto triples = read_ntriples_file(kFixture);
  const auto& tree = default_tree();
  std::ostringstream lengths, prefixes, saved, report;
  write_histogram_csv(lengths, "lengths", "length", length_histogram(triples));
  write_histogram_csv(prefixes, "prefix-cdf", "common_prefix", prefix_histogram(triples));
  write_histogram_csv(saved, "saved-bits", "saved_bits", saved_bits_histogram(triples, tree));
  write_report_csv(report, compression_report(triples, tree));
  EXPECT_EQ(slurp(dir / "lengths.csv"), lengths.str());
  EXPECT_EQ(slurp(dir / "prefix_cdf.csv"), prefixes.str());
  EXPECT_EQ(slurp(dir / "saved_bits.csv"), saved.str());
  EXPECT_EQ(slurp(dir / "compression_report.csv"), report.str());
  const double savings = std::stod(field(r.out, "huffman_savings"));
  EXPECT_GE(savings, 0.26);
  EXPECT_LE(savings, 0.37);
}

TEST(Cli, StatsSingleTriple) {
  TempDir dir;
  std::ofstream(dir / "one.nt") << "<http://a/s> <http://a/p> \"value\" .\n";
  const auto r = run("stats \"" + (dir / "one.nt").string() + "\" --out \"" + dir.str() + "\"");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(field(r.out, "original"), std::to_string(12 + 12 + 7));
}

TEST(Cli, BenchIsDeterministicPerSeed) {
  const std::string args = "bench --generate ssp --triples 400 --queries 20 --configs avl+list+huffman,block+block+none";
  const auto a = run(args + " --seed 5");
  const auto b = run(args + " --seed 5");
  const auto c = run(args + " --seed 6");
  ASSERT_EQ(a.status, 0);
  const auto csv = lines(a.out);
  ASSERT_GE(csv.size(), 2u);
  EXPECT_EQ(csv[0], "# tstore-csv bench v1");
  EXPECT_EQ(csv[1], std::string(kBenchCsvHeader));
  EXPECT_EQ(drop_wall_time(a.out), drop_wall_time(b.out));
  EXPECT_NE(drop_wall_time(a.out), drop_wall_time(c.out));
}

TEST(Cli, GenerateMatchesLibrary) {
  const auto r = run("generate btc --triples 50 --seed 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, serialize_ntriples(generate_corpus(CorpusKind::btc, 50, 2)));
}

TEST(Bench, GroupsStayWithinByteBudget) {
  const auto triples = read_ntriples_file(kFixture);
  const auto groups = insert_groups(triples, 1024);
  std::size_t total = 0;
  for (const auto& g : groups) {
    std::size_t bytes = 0;
    for (const auto& t : g) {
      for (const auto& e : t) bytes += e.size();
    }
    EXPECT_TRUE(bytes <= 1024 || g.size() == 1);
    total += g.size();
  }
  EXPECT_EQ(total, triples.size());
  // Greedy packing: each group plus the next triple would exceed the budget.
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    std::size_t bytes = 0;
    for (const auto& t : groups[i]) {
      for (const auto& e : t) bytes += e.size();
    }
    for (const auto& e : groups[i + 1].front()) bytes += e.size();
    EXPECT_GT(bytes, 1024u);
  }
}

TEST(Bench, SamePatternsForSameSeed) {
  const auto data = generate_corpus(CorpusKind::btc, 300, 1);
  BenchOptions opt;
  opt.seed = 11;
  opt.queries = 30;
  const auto a = run_bench(StoreConfig{}, data, opt);
  const auto b = run_bench(StoreConfig{}, data, opt);
  EXPECT_EQ(a.patterns, b.patterns);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].comparisons, b.records[i].comparisons);
    EXPECT_EQ(a.records[i].matched, b.records[i].matched);
  }
}

TEST(Bench, EraseEmptiesEveryConfiguration) {
  const auto data = generate_corpus(CorpusKind::ssp, 150, 2);
  BenchOptions opt;
  opt.queries = 10;
  for (const auto& cfg : expand_configs("all", StoreConfig{})) {
    const auto r = run_bench(cfg, data, opt);
    std::size_t erased = 0;
    std::size_t last_size = 0;
    for (const auto& rec : r.records) {
      if (rec.operation == "erase") {
        erased += rec.matched;
        last_size = rec.store_size - rec.matched;
        EXPECT_GE(rec.matched, 1u) << cfg.id();
      }
      if (rec.operation == "query") {
        EXPECT_GE(rec.matched, 1u) << cfg.id();
      }
    }
    EXPECT_EQ(erased, r.inserted) << cfg.id();
    EXPECT_EQ(last_size, 0u) << cfg.id();
    EXPECT_GT(r.inserted, 0u) << cfg.id();
  }
}

TEST(Bench, BlockReadsPerInsertGrowAtMostLogarithmically) {
  const auto data = generate_corpus(CorpusKind::btc, 8000, 3);
  BenchOptions opt;
  opt.queries = 0;
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::block;
  cfg.container = ContainerKind::block;
  const auto r = run_bench(cfg, data, opt);
  ASSERT_FALSE(r.capacity_reached);
  // Worst-case height of a B+ tree with minimum fan-out 32 over n values.
  auto height_bound = [](double n) { return 1.0 + std::ceil(std::log(std::max(n, 1.0)) / std::log(32.0)); };
  double early = 0, late = 0;
  std::size_t early_n = 0, late_n = 0;
  for (const auto& rec : r.records) {
    if (rec.operation != "insert" || rec.ops == 0) continue;
    const double per_tuple = double(rec.block_reads) / double(rec.ops);
    // Eight set operations per tuple (four probes, four inserts), each a
    // root-to-leaf walk plus a chain record and a page.
    const double values = 3.0 * double(rec.store_size + rec.ops);
    EXPECT_LE(per_tuple, 8.0 * (height_bound(values) + 2.0)) << rec.store_size;
    if (rec.store_size >= 500 && rec.store_size < 2000) {
      early += per_tuple;
      ++early_n;
    } else if (rec.store_size >= 6000) {
      late += per_tuple;
      ++late_n;
    }
  }
  ASSERT_GT(early_n, 0u);
  ASSERT_GT(late_n, 0u);
  // Store size grows at least threefold; linear cost would triple reads.
  EXPECT_LE(late / double(late_n), 1.6 * early / double(early_n));
}
