#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tstore/rdf_io.hpp"
#include "tstore/tuple_store.hpp"

namespace tstore {

/// One measured step of a benchmark run. Counters are deltas over the step.
struct BenchRecord {
  std::string config;
  std::string operation;  // insert | query | erase
  std::size_t seq = 0;
  std::size_t store_size = 0;  // tuples stored before the step
  std::size_t ops = 0;         // tuples inserted, or 1 for query and erase
  std::size_t matched = 0;     // tuples inserted, returned or erased
  std::uint64_t wall_ns = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t block_reads = 0;
  std::uint64_t block_writes = 0;
};

struct BenchOptions {
  std::uint64_t seed = 1;
  std::size_t queries = 100;
  /// Upper bound on the plain element bytes of one insert group.
  std::size_t group_bytes = 1024;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::size_t inserted = 0;
  bool capacity_reached = false;
  std::string capacity_message;
  /// Query then erase patterns in issue order, serialized.
  std::vector<std::string> patterns;
};

/// Consecutive runs of triples whose plain element bytes stay within
/// `max_bytes`; a larger triple forms a group of its own.
std::vector<std::vector<Triple>> insert_groups(const std::vector<Triple>& triples, std::size_t max_bytes);

/// Inserts `data` group by group (stopping at the first capacity error), runs
/// the query phase, then erases with findable patterns until the store is
/// empty. Patterns bind every slot but one, chosen at random.
BenchResult run_bench(const StoreConfig& config, const std::vector<Triple>& data, const BenchOptions& options);

/// Expands "all" or a comma-separated list of ids such as "avl+static+none"
/// over the settings of `base`.
std::vector<StoreConfig> expand_configs(std::string_view list, const StoreConfig& base);

inline constexpr std::string_view kBenchCsvHeader =
    "config,operation,seq,store_size,ops,matched,wall_ns,comparisons,block_reads,block_writes";
void write_bench_csv_header(std::ostream& out);
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace tstore
