#include <gtest/gtest.h>

#include <filesystem>

#include "oracles/shadow_store.hpp"
#include "tstore/bench.hpp"
#include "tstore/block_store.hpp"
#include "tstore/error.hpp"
#include "tstore/random.hpp"
#include "tstore/rdf_io.hpp"
#include "tstore/tuple_store.hpp"

namespace tstore {
void PrintTo(const StoreConfig& cfg, std::ostream* os) { *os << cfg.id(); }
}  // namespace tstore

using namespace tstore;
namespace fs = std::filesystem;

namespace {

std::vector<Triple> node_fixture() {
  return read_ntriples_file(std::string(TSTORE_DATA_DIR) + "/node_fixture.nt");
}

std::uint32_t refs(const TupleStore& s, std::string_view plain) {
  const auto key = s.dictionary()->find(s.encode_element(plain));
  return key ? s.dictionary()->refcount(*key) : 0;
}

fs::path temp_device(const std::string& stem) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto p = fs::temp_directory_path() / ("tstore-" + stem + "-" + info->name() + ".bin");
  fs::remove(p);
  return p;
}

StoreConfig roomy(StoreConfig cfg) {
  cfg.static_capacity = 1000;
  cfg.chopper_slots = 20000;
  cfg.device_blocks = 2048;
  return cfg;
}

void expect_refcounts_match(const TupleStore& store, const oracle::ShadowStore& shadow) {
  if (store.dictionary() == nullptr) return;
  std::vector<bool> managed;
  for (std::size_t i = 0; i < store.arity(); ++i) managed.push_back(store.mask().managed(i));
  std::map<std::string, std::uint32_t> seen;
  store.dictionary()->for_each(
      [&](DictKey, std::string_view v, std::uint32_t rc) { seen[store.decode_element(v)] = rc; });
  EXPECT_EQ(seen, shadow.references(managed));
}

}  // namespace

TEST(TupleStore, DuplicateInsertKeepsRefcountsAtOne) {
  TupleStore s(StoreConfig{});
  const Tuple t{"s", "p", "o"};
  EXPECT_TRUE(s.insert(t));
  EXPECT_FALSE(s.insert(t));
  EXPECT_EQ(s.size(), 1u);
  for (const char* e : {"s", "p", "o"}) EXPECT_EQ(refs(s, e), 1u) << e;
}

TEST(TupleStore, SharedSubjectRefcount) {
  TupleStore s(StoreConfig{});
  s.insert({"s", "p", "o1"});
  s.insert({"s", "p", "o2"});
  EXPECT_EQ(refs(s, "s"), 2u);
  EXPECT_TRUE(s.erase({"s", "p", "o1"}));
  EXPECT_EQ(refs(s, "s"), 1u);
  EXPECT_EQ(refs(s, "o1"), 0u);
  const auto left = s.query_all(TupleTemplate{"s", kWildcard, kWildcard});
  ASSERT_EQ(left.size(), 1u);
  EXPECT_EQ(left[0], (Tuple{"s", "p", "o2"}));
}

TEST(TupleStore, SameElementInTwoColumnsCountsTwice) {
  TupleStore s(StoreConfig{});
  s.insert({"x", "p", "x"});
  EXPECT_EQ(refs(s, "x"), 2u);
  s.erase({"x", "p", "x"});
  EXPECT_EQ(s.dictionary()->size(), 0u);
}

TEST(TupleStore, EraseAbsentChangesNothing) {
  TupleStore s(StoreConfig{});
  s.insert({"s", "p", "o"});
  EXPECT_FALSE(s.erase({"s", "p", "nope"}));
  EXPECT_FALSE(s.erase({"never", "seen", "before"}));
  EXPECT_EQ(refs(s, "s"), 1u);
  EXPECT_EQ(s.size(), 1u);
}

TEST(TupleStore, QueryOnEmptyStore) {
  TupleStore s(StoreConfig{});
  EXPECT_TRUE(s.query_all(TupleTemplate::any(3)).empty());
  EXPECT_TRUE(s.query_all(TupleTemplate{"a", kWildcard, kWildcard}).empty());
}

TEST(TupleStore, ArityMismatchIsUsageError) {
  TupleStore s(StoreConfig{});
  EXPECT_THROW(s.insert({"a", "b"}), UsageError);
  EXPECT_THROW(s.query(TupleTemplate::any(4)), UsageError);
  EXPECT_THROW(s.erase({"a"}), UsageError);
}

TEST(TupleStore, NodeFixtureInDefaultConfig) {
  const auto triples = node_fixture();
  ASSERT_EQ(triples.size(), 73u);
  TupleStore s(StoreConfig{});
  EXPECT_EQ(s.config().id(), "avl+static+none");
  for (const auto& t : triples) ASSERT_TRUE(s.insert(t));
  EXPECT_EQ(s.size(), 73u);
  EXPECT_EQ(oracle::sorted(s.query_all(TupleTemplate::any(3))), oracle::sorted(triples));
  for (const auto& t : triples) {
    const auto hit = s.query_all(TupleTemplate::exact(t));
    ASSERT_EQ(hit.size(), 1u);
    EXPECT_EQ(hit[0], t);
  }
  std::string why;
  EXPECT_TRUE(s.check_consistency(&why)) << why;
}

TEST(TupleStore, InsertAllEraseAllConserves) {
  const auto triples = node_fixture();
  for (const char* id : {"avl+static+none", "prescilla+list+huffman", "chopper+list+none", "block+block+huffman"}) {
    StoreConfig cfg = roomy(StoreConfig{});
    const auto all = expand_configs(id, cfg);
    TupleStore s(all.at(0));
    for (const auto& t : triples) s.insert(t);
    EXPECT_GT(s.stats().dict_stored_bytes, 0u);
    for (const auto& t : triples) ASSERT_TRUE(s.erase(t)) << id;
    const auto st = s.stats();
    EXPECT_EQ(st.tuples, 0u) << id;
    EXPECT_EQ(st.dict_entries, 0u) << id;
    EXPECT_EQ(st.dict_stored_bytes, 0u) << id;
  }
}

TEST(TupleStore, ChopperCapacityErrorRollsBack) {
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::chopper;
  cfg.container = ContainerKind::list;
  TupleStore s(cfg);
  const auto triples = node_fixture();
  oracle::ShadowStore shadow;
  bool failed = false;
  for (const auto& t : triples) {
    const auto before = s.stats();
    try {
      s.insert(t);
      shadow.insert(t);
    } catch (const CapacityError&) {
      failed = true;
      const auto after = s.stats();
      EXPECT_EQ(after.tuples, before.tuples);
      EXPECT_EQ(after.dict_entries, before.dict_entries);
      EXPECT_EQ(after.dict_stored_bytes, before.dict_stored_bytes);
      std::string why;
      ASSERT_TRUE(s.check_consistency(&why)) << why;
      expect_refcounts_match(s, shadow);
    }
  }
  // 100 chunks of 15 bytes cannot hold the fixture's vocabulary.
  EXPECT_TRUE(failed);
  EXPECT_EQ(oracle::sorted(s.query_all(TupleTemplate::any(3))), oracle::sorted(shadow.query(TupleTemplate::any(3))));
}

TEST(TupleStore, StaticVectorCapacityErrorRollsBack) {
  StoreConfig cfg;
  cfg.static_capacity = 2;
  TupleStore s(cfg);
  s.insert({"a", "b", "c"});
  s.insert({"a", "b", "d"});
  EXPECT_THROW(s.insert({"new", "b", "e"}), CapacityError);
  EXPECT_EQ(refs(s, "new"), 0u);
  EXPECT_EQ(refs(s, "a"), 2u);
  EXPECT_EQ(s.dictionary()->size(), 4u);
  std::string why;
  EXPECT_TRUE(s.check_consistency(&why)) << why;
}

class ConfigTransparency : public ::testing::TestWithParam<StoreConfig> {};

TEST_P(ConfigTransparency, TraceMatchesShadowOracle) {
  TupleStore s(GetParam());
  oracle::ShadowStore shadow;
  Rng rng(1234);
  const std::vector<std::string> vocab = {"<http://a/s1>", "<http://a/s2>", "<http://a/p>", "<http://b/q>",
                                          "\"1\"",         "\"x\"@en",       "_:b0",        "\"\"",
                                          "<http://a/s1/longer/path/value>"};
  auto random_tuple = [&] {
    return Tuple{rng.pick(vocab), rng.pick(vocab), rng.pick(vocab)};
  };
  for (int op = 1; op <= 1500; ++op) {
    const auto kind = rng.below(10);
    if (kind < 5) {
      const auto t = random_tuple();
      ASSERT_EQ(s.insert(t), shadow.insert(t));
    } else if (kind < 8) {
      const auto t = random_tuple();
      ASSERT_EQ(s.erase(t), shadow.erase(t));
    } else if (kind < 9) {
      TupleTemplate tmpl = TupleTemplate::exact(random_tuple());
      for (std::size_t i = 0; i < 3; ++i) {
        if (rng.chance(1, 2)) tmpl[i].reset();
      }
      ASSERT_EQ(oracle::sorted(s.query_all(tmpl)), shadow.query(tmpl));
    } else {
      TupleTemplate tmpl = TupleTemplate::exact(random_tuple());
      tmpl[rng.below(3)].reset();
      tmpl[rng.below(3)].reset();
      ASSERT_EQ(s.erase_matching(tmpl), shadow.erase_matching(tmpl));
    }
    ASSERT_EQ(s.size(), shadow.tuples.size());
    if (op % 250 == 0) {
      std::string why;
      ASSERT_TRUE(s.check_consistency(&why)) << why;
      expect_refcounts_match(s, shadow);
    }
  }
}

TEST_P(ConfigTransparency, QueryRawMatchesStoredBytes) {
  TupleStore s(GetParam());
  const auto triples = node_fixture();
  for (const auto& t : triples) s.insert(t);
  const auto tmpl = TupleTemplate{kWildcard, kWildcard, kWildcard};
  auto raw = s.query_raw(tmpl).collect();
  auto plain = s.query_all(tmpl);
  ASSERT_EQ(raw.size(), plain.size());
  std::vector<Tuple> decoded;
  for (const auto& r : raw) {
    std::vector<Element> es;
    for (std::size_t i = 0; i < r.size(); ++i) {
      es.emplace_back(s.decode_element(r[i].str()));
      if (s.dictionary() != nullptr && s.mask().managed(i)) {
        const auto key = s.dictionary()->find(r[i].str());
        ASSERT_TRUE(key.has_value());
        EXPECT_EQ(s.dictionary()->get(*key), r[i].str());
      }
    }
    decoded.emplace_back(std::move(es));
  }
  EXPECT_EQ(oracle::sorted(decoded), oracle::sorted(plain));
  if (GetParam().codec == CodecKind::none) {
    EXPECT_EQ(oracle::sorted(raw), oracle::sorted(plain));
  }
  // A bound slot in raw queries is given in plain form.
  const auto one = s.query_raw(TupleTemplate::exact(triples[0])).collect();
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(s.decode_element(one[0][2].str()), triples[0][2].str());
}

INSTANTIATE_TEST_SUITE_P(AllConfigs, ConfigTransparency,
                         ::testing::ValuesIn(expand_configs("all", roomy(StoreConfig{}))),
                         [](const auto& info) {
                           std::string id = info.param.id();
                           for (auto& c : id) {
                             if (c == '+') c = '_';
                           }
                           return id;
                         });

TEST(TupleStore, ThirtyConfigurationsAreValid) {
  EXPECT_EQ(expand_configs("all", StoreConfig{}).size(), 30u);
}

TEST(TupleStore, OneWildcardQueriesMatchScan) {
  const auto triples = node_fixture();
  TupleStore s(StoreConfig{});
  oracle::ShadowStore shadow;
  for (const auto& t : triples) {
    s.insert(t);
    shadow.insert(t);
  }
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    TupleTemplate tmpl = TupleTemplate::exact(rng.pick(triples));
    tmpl[rng.below(3)].reset();
    const auto got = oracle::sorted(s.query_all(tmpl));
    ASSERT_EQ(got, shadow.query(tmpl));
    ASSERT_FALSE(got.empty());
  }
}

TEST(TupleStore, EraseMatchingEqualsQueryThenErase) {
  const auto triples = node_fixture();
  StoreConfig cfg;
  cfg.container = ContainerKind::list;
  TupleStore a(cfg);
  TupleStore b(cfg);
  for (const auto& t : triples) {
    a.insert(t);
    b.insert(t);
  }
  const TupleTemplate tmpl{kWildcard, triples[0][1], kWildcard};
  const auto hits = b.query_all(tmpl);
  for (const auto& t : hits) b.erase(t);
  EXPECT_EQ(a.erase_matching(tmpl), hits.size());
  EXPECT_EQ(oracle::sorted(a.query_all(TupleTemplate::any(3))), oracle::sorted(b.query_all(TupleTemplate::any(3))));
  EXPECT_EQ(a.erase_matching(TupleTemplate{"nothing", kWildcard, kWildcard}), 0u);
  EXPECT_EQ(a.erase_matching(TupleTemplate::any(3)), triples.size() - hits.size());
  EXPECT_EQ(a.size(), 0u);
  EXPECT_EQ(a.dictionary()->size(), 0u);
}

TEST(TupleStore, MutationInvalidatesQueryStream) {
  TupleStore s(StoreConfig{});
  s.insert({"a", "b", "c"});
  s.insert({"a", "b", "d"});
  auto q = s.query(TupleTemplate::any(3));
  Tuple t;
  ASSERT_TRUE(q.next(t));
  s.insert({"a", "b", "e"});
  EXPECT_THROW(q.next(t), IterationInvalidatedError);
}

TEST(TupleStore, PartialMaskKeepsInlineColumns) {
  StoreConfig cfg;
  cfg.mask = ColumnMask::parse("110");
  cfg.container = ContainerKind::list;
  TupleStore s(cfg);
  s.insert({"s", "p", "\"a literal\""});
  EXPECT_FALSE(s.dictionary()->find("\"a literal\"").has_value());
  EXPECT_EQ(refs(s, "s"), 1u);
  EXPECT_EQ(s.query_all(TupleTemplate{kWildcard, kWildcard, "\"a literal\""}).size(), 1u);
}

TEST(TupleStore, NoDictionaryStoresElementsInline) {
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::none;
  cfg.container = ContainerKind::list;
  cfg.codec = CodecKind::huffman;
  TupleStore s(cfg);
  EXPECT_EQ(s.dictionary(), nullptr);
  s.insert({"s", "p", "o"});
  EXPECT_EQ(s.query_all(TupleTemplate{"s", kWildcard, kWildcard}), (std::vector<Tuple>{{"s", "p", "o"}}));
}

TEST(StoreConfigParse, KeyValueLines) {
  const auto cfg = StoreConfig::parse(
      "# store\n"
      "dictionary = prescilla\n"
      "container=list\n"
      "codec = huffman\n"
      "mask = 101\n");
  EXPECT_EQ(cfg.id(), "prescilla+list+huffman");
  EXPECT_EQ(cfg.effective_mask(), ColumnMask::parse("101"));
}

TEST(StoreConfigParse, Json) {
  const auto cfg = StoreConfig::parse(R"({"dictionary": "chopper", "chopper_slots": 500, "chopper_payload": 31,
                                          "container": "static", "capacity": 90})");
  EXPECT_EQ(cfg.dictionary, DictionaryKind::chopper);
  EXPECT_EQ(cfg.chopper_slots, 500u);
  EXPECT_EQ(cfg.chopper_payload, 31u);
  EXPECT_EQ(cfg.static_capacity, 90u);
}

TEST(StoreConfigParse, Errors) {
  EXPECT_THROW(StoreConfig::parse("colour = blue"), UsageError);
  EXPECT_THROW(StoreConfig::parse("dictionary = btree"), UsageError);
  EXPECT_THROW(StoreConfig::parse("capacity = -1"), UsageError);
  EXPECT_THROW(StoreConfig::parse("{\"dictionary\": "), UsageError);
  EXPECT_THROW(StoreConfig::parse("just words"), UsageError);
  StoreConfig cfg;
  cfg.mask = ColumnMask::parse("11");
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg.mask = ColumnMask::parse("111");
  cfg.dictionary = DictionaryKind::none;
  EXPECT_THROW(cfg.validate(), UsageError);
  StoreConfig mem;
  mem.device_path = "x.bin";
  EXPECT_THROW(mem.validate(), UsageError);
}

TEST(StoreConfigParse, DefaultMaskFollowsDictionary) {
  StoreConfig cfg;
  EXPECT_EQ(cfg.effective_mask(), ColumnMask::all(3));
  cfg.dictionary = DictionaryKind::none;
  EXPECT_EQ(cfg.effective_mask(), ColumnMask::all(3, false));
}

TEST(TupleStorePersistence, ReopenYieldsSameContents) {
  const auto path = temp_device("store");
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::block;
  cfg.container = ContainerKind::block;
  cfg.codec = CodecKind::huffman;
  cfg.device_path = path.string();
  cfg.device_blocks = 1024;
  const auto triples = node_fixture();
  {
    TupleStore s(cfg);
    for (const auto& t : triples) s.insert(t);
    s.erase(triples[5]);
  }
  {
    TupleStore s(cfg);
    EXPECT_EQ(s.size(), triples.size() - 1);
    auto expected = triples;
    expected.erase(expected.begin() + 5);
    EXPECT_EQ(oracle::sorted(s.query_all(TupleTemplate::any(3))), oracle::sorted(expected));
    std::string why;
    EXPECT_TRUE(s.check_consistency(&why)) << why;
  }
  StoreConfig other = cfg;
  other.codec = CodecKind::none;
  EXPECT_THROW(TupleStore{other}, UsageError);
  fs::remove(path);
}

TEST(TupleStorePersistence, MemoryComponentsCannotReopen) {
  const auto path = temp_device("mixed");
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::avl;
  cfg.container = ContainerKind::block;
  cfg.device_path = path.string();
  cfg.device_blocks = 256;
  { TupleStore(cfg).insert({"a", "b", "c"}); }
  EXPECT_THROW(TupleStore{cfg}, UsageError);
  fs::remove(path);
}

TEST(TupleStorePersistence, ForeignDeviceIsFormatError) {
  const auto path = temp_device("foreign");
  {
    auto dev = BlockDevice::open(path, true, 64);
    BPlusHashSet set(*dev, kContainerSlot);
    set.insert("not a key tuple");
  }
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::block;
  cfg.container = ContainerKind::block;
  cfg.device_path = path.string();
  EXPECT_THROW(TupleStore{cfg}, FormatError);
  fs::remove(path);
}

TEST(TupleStore, BlockStatsCountDeviceIo) {
  StoreConfig cfg;
  cfg.dictionary = DictionaryKind::block;
  cfg.container = ContainerKind::block;
  TupleStore s(cfg);
  const auto before = s.stats();
  s.insert({"a", "b", "c"});
  const auto after = s.stats();
  EXPECT_GT(after.block_reads, before.block_reads);
  EXPECT_GT(after.block_writes, before.block_writes);
}
