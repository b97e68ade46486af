#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "tstore/element.hpp"
#include "tstore/error.hpp"
#include "tstore/hash.hpp"
#include "tstore/random.hpp"

using namespace tstore;

TEST(TemplateMatches, WildcardSlotMatches) {
  EXPECT_TRUE(template_matches({Element("s"), Element("p"), kWildcard}, Tuple{"s", "p", "o"}));
}

TEST(TemplateMatches, AllWildcardsMatchAnything) {
  EXPECT_TRUE(template_matches(TupleTemplate::any(3), Tuple{"x", "y", "z"}));
  EXPECT_TRUE(template_matches(TupleTemplate::any(3), Tuple{"", "", ""}));
}

TEST(TemplateMatches, LiteralMismatch) {
  EXPECT_FALSE(template_matches({Element("s"), Element("q"), kWildcard}, Tuple{"s", "p", "o"}));
}

TEST(TemplateMatches, ArityMismatchIsUsageError) {
  EXPECT_THROW(template_matches(TupleTemplate::any(2), Tuple{"a", "b", "c"}), UsageError);
}

TEST(TemplateMatches, ComparisonIsBytewise) {
  EXPECT_FALSE(template_matches({Element("A"), kWildcard}, Tuple{"a", "b"}));
  const std::string with_nul("a\0b", 3);
  EXPECT_TRUE(template_matches({Element(with_nul), kWildcard}, Tuple{Element(with_nul), "x"}));
  EXPECT_FALSE(template_matches({Element("a"), kWildcard}, Tuple{Element(with_nul), "x"}));
}

TEST(TemplateMatches, ArityIsNotFixedToThree) {
  const Tuple t{"a", "b", "c", "d", "e"};
  TupleTemplate tmpl = TupleTemplate::exact(t);
  tmpl[4] = kWildcard;
  EXPECT_TRUE(template_matches(tmpl, t));
  EXPECT_EQ(tmpl.wildcard_count(), 1u);
}

TEST(TemplateMatches, ExactTemplateIsReflexive) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Tuple t{Element(std::to_string(rng.below(5))), Element(std::to_string(rng.below(5))),
            Element(std::to_string(rng.below(5)))};
    EXPECT_TRUE(template_matches(TupleTemplate::exact(t), t));
  }
}

TEST(TemplateMatches, AddingWildcardsNeverShrinksMatches) {
  std::vector<Tuple> store;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 2; ++c)
        store.push_back(Tuple{Element(std::to_string(a)), Element(std::to_string(b)), Element(std::to_string(c))});
  for (const auto& base : store) {
    for (unsigned mask = 0; mask < 8; ++mask) {
      TupleTemplate narrow = TupleTemplate::exact(base);
      for (std::size_t i = 0; i < 3; ++i)
        if (mask & (1u << i)) narrow[i] = kWildcard;
      for (std::size_t extra = 0; extra < 3; ++extra) {
        TupleTemplate wide = narrow;
        wide[extra] = kWildcard;
        for (const auto& t : store) {
          if (template_matches(narrow, t)) {
            EXPECT_TRUE(template_matches(wide, t));
          }
        }
      }
    }
  }
}

TEST(Element, LengthLimit) {
  EXPECT_NO_THROW(Element(std::string(65535, 'x')));
  EXPECT_THROW(Element(std::string(65536, 'x')), UsageError);
}

TEST(Element, OrderingIsBytewise) {
  EXPECT_LT(Element("a"), Element("b"));
  EXPECT_LT(Element("B"), Element("a"));
  EXPECT_EQ(Element("abc"), Element(std::string("abc")));
}

TEST(Tuple, SizeAndAccess) {
  Tuple t{"s", "p", "o"};
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.access(1).str(), "p");
  EXPECT_THROW(t.access(3), std::out_of_range);
}

TEST(ColumnMask, ParseAndFormat) {
  const ColumnMask m = ColumnMask::parse("101");
  EXPECT_EQ(m.size(), 3u);
  EXPECT_TRUE(m.managed(0));
  EXPECT_FALSE(m.managed(1));
  EXPECT_EQ(m.to_string(), "101");
  EXPECT_TRUE(m.any_managed());
  EXPECT_FALSE(ColumnMask::all(3, false).any_managed());
  EXPECT_THROW(ColumnMask::parse("1x1"), UsageError);
  EXPECT_THROW(ColumnMask::parse(""), UsageError);
}

TEST(HashBytes, PublishedVectors) {
  EXPECT_EQ(hash_bytes(""), 0x811c9dc5u);
  EXPECT_EQ(hash_bytes("a"), 0xe40c292cu);
  EXPECT_EQ(hash_bytes("foobar"), 0xbf9cf968u);
}

TEST(HashBytes, Deterministic) {
  const std::string x = "http://example.org/resource";
  EXPECT_EQ(hash_bytes(x), hash_bytes(std::string(x)));
  static_assert(hash_bytes("a") == 0xe40c292cu);
}

TEST(HashBytes, CollisionsConsistentWithUniformHash) {
  // 10^5 distinct keys: expected colliding pairs n^2 / 2^33, about 1.16.
  Rng rng(99);
  std::unordered_set<std::string> keys;
  while (keys.size() < 100000) {
    std::string s(8 + rng.below(24), ' ');
    for (auto& c : s) c = static_cast<char>(rng.below(256));
    keys.insert(std::move(s));
  }
  std::unordered_multiset<std::uint32_t> hashes;
  for (const auto& k : keys) hashes.insert(hash_bytes(k));
  std::size_t collisions = 0;
  for (std::size_t b = 0; b < hashes.bucket_count(); ++b) {
    std::map<std::uint32_t, std::size_t> counts;
    for (auto it = hashes.begin(b); it != hashes.end(b); ++it) ++counts[*it];
    for (const auto& [h, c] : counts) collisions += c * (c - 1) / 2;
  }
  EXPECT_LE(collisions, 8u);
}
