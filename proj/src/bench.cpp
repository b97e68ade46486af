#include "tstore/bench.hpp"

#include <chrono>
#include <ostream>

#include "tstore/error.hpp"
#include "tstore/random.hpp"

namespace tstore {

std::vector<std::vector<Triple>> insert_groups(const std::vector<Triple>& triples, std::size_t max_bytes) {
  std::vector<std::vector<Triple>> groups;
  std::size_t bytes = 0;
  for (const auto& t : triples) {
    std::size_t n = 0;
    for (const auto& e : t) n += e.size();
    if (groups.empty() || bytes + n > max_bytes) {
      groups.emplace_back();
      bytes = 0;
    }
    groups.back().push_back(t);
    bytes += n;
  }
  return groups;
}

namespace {

class Meter {
 public:
  explicit Meter(const TupleStore& store) : store_(store), before_(store.stats()), start_(Clock::now()) {}

  BenchRecord finish(std::string_view op, std::size_t seq, std::size_t size_before, std::size_t ops, std::size_t matched) {
    const auto end = Clock::now();
    const StoreStats after = store_.stats();
    BenchRecord r;
    r.config = store_.config().id();
    r.operation = op;
    r.seq = seq;
    r.store_size = size_before;
    r.ops = ops;
    r.matched = matched;
    r.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(end - start_).count());
    r.comparisons = after.comparisons - before_.comparisons;
    r.block_reads = after.block_reads - before_.block_reads;
    r.block_writes = after.block_writes - before_.block_writes;
    return r;
  }

 private:
  using Clock = std::chrono::steady_clock;
  const TupleStore& store_;
  StoreStats before_;
  Clock::time_point start_;
};

TupleTemplate findable_pattern(Rng& rng, const std::vector<Triple>& stored) {
  const Triple& t = stored[static_cast<std::size_t>(rng.below(stored.size()))];
  TupleTemplate tmpl = TupleTemplate::exact(t);
  tmpl[static_cast<std::size_t>(rng.below(t.size()))] = kWildcard;
  return tmpl;
}

std::string pattern_text(const TupleTemplate& tmpl) {
  std::string s;
  for (const auto& slot : tmpl) {
    if (!s.empty()) s += ' ';
    s += slot ? slot->str() : "*";
  }
  return s;
}

}  // namespace

BenchResult run_bench(const StoreConfig& config, const std::vector<Triple>& data, const BenchOptions& options) {
  BenchResult result;
  TupleStore store(config);
  Rng rng(options.seed);
  std::vector<Triple> stored;

  std::size_t seq = 0;
  for (const auto& group : insert_groups(data, options.group_bytes)) {
    const std::size_t before = store.size();
    Meter m(store);
    std::size_t inserted = 0;
    try {
      for (const auto& t : group) {
        if (store.insert(t)) {
          stored.push_back(t);
          ++inserted;
        }
      }
    } catch (const CapacityError& e) {
      result.capacity_reached = true;
      result.capacity_message = e.what();
    }
    result.records.push_back(m.finish("insert", seq++, before, group.size(), inserted));
    result.inserted += inserted;
    if (result.capacity_reached) break;
  }

  if (!stored.empty()) {
    for (std::size_t q = 0; q < options.queries; ++q) {
      const TupleTemplate tmpl = findable_pattern(rng, stored);
      result.patterns.push_back(pattern_text(tmpl));
      Meter m(store);
      auto stream = store.query(tmpl);
      std::size_t matched = 0;
      Tuple t;
      while (stream.next(t)) ++matched;
      result.records.push_back(m.finish("query", seq++, store.size(), 1, matched));
    }
  }

  while (!stored.empty()) {
    const TupleTemplate tmpl = findable_pattern(rng, stored);
    result.patterns.push_back(pattern_text(tmpl));
    const std::size_t before = store.size();
    Meter m(store);
    const std::size_t erased = store.erase_matching(tmpl);
    result.records.push_back(m.finish("erase", seq++, before, 1, erased));
    std::erase_if(stored, [&](const Triple& t) { return template_matches(tmpl, t); });
    if (stored.size() != store.size()) throw Error("benchmark shadow set diverged from the store");
  }
  return result;
}

std::vector<StoreConfig> expand_configs(std::string_view list, const StoreConfig& base) {
  std::vector<StoreConfig> out;
  auto make = [&](DictionaryKind d, ContainerKind c, CodecKind k) {
    StoreConfig cfg = base;
    cfg.dictionary = d;
    cfg.container = c;
    cfg.codec = k;
    if (!base.mask) cfg.mask.reset();
    cfg.validate();
    out.push_back(std::move(cfg));
  };
  if (list == "all") {
    for (auto d : {DictionaryKind::none, DictionaryKind::avl, DictionaryKind::prescilla, DictionaryKind::chopper,
                   DictionaryKind::block}) {
      for (auto c : {ContainerKind::static_vector, ContainerKind::list, ContainerKind::block}) {
        for (auto k : {CodecKind::none, CodecKind::huffman}) make(d, c, k);
      }
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string_view id = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? list.size() + 1 : comma + 1;
    if (id.empty()) continue;
    const auto p1 = id.find('+');
    const auto p2 = p1 == std::string_view::npos ? p1 : id.find('+', p1 + 1);
    if (p2 == std::string_view::npos) {
      throw UsageError("config id '" + std::string(id) + "' must look like dictionary+container+codec");
    }
    make(parse_dictionary_kind(id.substr(0, p1)), parse_container_kind(id.substr(p1 + 1, p2 - p1 - 1)),
         parse_codec_kind(id.substr(p2 + 1)));
  }
  if (out.empty()) throw UsageError("no configurations selected");
  return out;
}

void write_bench_csv_header(std::ostream& out) {
  out << "# tstore-csv bench v" << kCsvVersion << '\n' << kBenchCsvHeader << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  for (const auto& r : records) {
    out << r.config << ',' << r.operation << ',' << r.seq << ',' << r.store_size << ',' << r.ops << ',' << r.matched
        << ',' << r.wall_ns << ',' << r.comparisons << ',' << r.block_reads << ',' << r.block_writes << '\n';
  }
}

}  // namespace tstore
