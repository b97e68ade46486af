#include <gtest/gtest.h>

#include <functional>
#include <memory>
#include <set>

#include "tstore/block_store.hpp"
#include "tstore/container.hpp"
#include "tstore/error.hpp"
#include "tstore/random.hpp"

using namespace tstore;

namespace {

const ColumnMask kMask = ColumnMask::parse("101");

struct Impl {
  std::string name;
  std::function<std::unique_ptr<TupleContainer>(BlockDevice&)> make;
};

void PrintTo(const Impl& impl, std::ostream* os) { *os << impl.name; }

KeyTuple tuple(std::uint32_t s, std::string p, std::uint32_t o) {
  return KeyTuple({KeyCell{DictKey{s}}, KeyCell{std::move(p)}, KeyCell{DictKey{o}}});
}

std::set<std::string> enumerate(const TupleContainer& c) {
  std::set<std::string> out;
  auto cur = c.cursor();
  KeyTupleView v;
  while (cur->next(v)) {
    EXPECT_TRUE(out.insert(std::string(v.bytes())).second) << "duplicate in iteration";
  }
  return out;
}

class ContainerContract : public ::testing::TestWithParam<Impl> {
 protected:
  std::unique_ptr<BlockDevice> dev = BlockDevice::in_memory(4096);
  std::unique_ptr<TupleContainer> c = GetParam().make(*dev);
};

}  // namespace

TEST_P(ContainerContract, InsertIsIdempotent) {
  EXPECT_TRUE(c->insert(tuple(1, "p", 2)));
  EXPECT_FALSE(c->insert(tuple(1, "p", 2)));
  EXPECT_EQ(c->size(), 1u);
  EXPECT_TRUE(c->contains(tuple(1, "p", 2)));
  EXPECT_FALSE(c->contains(tuple(1, "q", 2)));
  EXPECT_FALSE(c->contains(tuple(2, "p", 1)));
}

TEST_P(ContainerContract, EraseReportsRemoval) {
  c->insert(tuple(1, "p", 2));
  EXPECT_FALSE(c->erase(tuple(1, "p", 3)));
  EXPECT_TRUE(c->erase(tuple(1, "p", 2)));
  EXPECT_FALSE(c->erase(tuple(1, "p", 2)));
  EXPECT_EQ(c->size(), 0u);
}

TEST_P(ContainerContract, EmptyInlineValue) {
  EXPECT_TRUE(c->insert(tuple(0, "", 0)));
  EXPECT_TRUE(c->contains(tuple(0, "", 0)));
  const auto all = enumerate(*c);
  ASSERT_EQ(all.size(), 1u);
  KeyTupleView v(*all.begin(), &kMask);
  EXPECT_EQ(v.to_owned(), tuple(0, "", 0));
}

TEST_P(ContainerContract, ShapeMismatchIsUsageError) {
  EXPECT_THROW(c->insert(KeyTuple({KeyCell{DictKey{1}}, KeyCell{DictKey{2}}, KeyCell{DictKey{3}}})), UsageError);
  EXPECT_THROW(c->contains(KeyTuple({KeyCell{DictKey{1}}})), UsageError);
}

TEST_P(ContainerContract, RandomTraceMatchesSet) {
  Rng rng(77);
  std::set<std::string> ref;
  for (int op = 1; op <= 10000; ++op) {
    const auto kt = tuple(static_cast<std::uint32_t>(rng.below(8)), std::string(rng.below(3), 'x'),
                          static_cast<std::uint32_t>(rng.below(8)));
    const auto enc = kt.encode();
    switch (rng.below(3)) {
      case 0:
      case 1:
        ASSERT_EQ(c->insert(kt), ref.insert(enc).second);
        break;
      default:
        ASSERT_EQ(c->erase(kt), ref.erase(enc) == 1);
    }
    ASSERT_EQ(c->size(), ref.size());
    ASSERT_EQ(c->contains(kt), ref.contains(enc));
    if (op % 100 == 0) {
      ASSERT_EQ(enumerate(*c), ref) << "after op " << op;
    }
  }
}

TEST_P(ContainerContract, MutationInvalidatesCursor) {
  c->insert(tuple(1, "a", 1));
  c->insert(tuple(2, "b", 2));
  auto cur = c->cursor();
  KeyTupleView v;
  ASSERT_TRUE(cur->next(v));
  c->insert(tuple(3, "c", 3));
  EXPECT_THROW(cur->next(v), IterationInvalidatedError);

  auto cur2 = c->cursor();
  ASSERT_TRUE(cur2->next(v));
  c->erase(tuple(3, "c", 3));
  EXPECT_THROW(cur2->next(v), IterationInvalidatedError);
}

TEST_P(ContainerContract, NoOpCallsKeepCursorValid) {
  c->insert(tuple(1, "a", 1));
  c->insert(tuple(2, "b", 2));
  auto cur = c->cursor();
  KeyTupleView v;
  ASSERT_TRUE(cur->next(v));
  EXPECT_FALSE(c->insert(tuple(1, "a", 1)));
  EXPECT_FALSE(c->erase(tuple(9, "z", 9)));
  EXPECT_TRUE(c->contains(tuple(2, "b", 2)));
  EXPECT_TRUE(cur->next(v));
  EXPECT_FALSE(cur->next(v));
}

INSTANTIATE_TEST_SUITE_P(
    All, ContainerContract,
    ::testing::Values(Impl{"static", [](BlockDevice&) {
                             return std::make_unique<StaticVectorContainer>(KeyTupleLayout{kMask, 16}, 1000);
                           }},
                      Impl{"list", [](BlockDevice&) { return std::make_unique<ListContainer>(KeyTupleLayout{kMask}); }},
                      Impl{"block", [](BlockDevice& d) {
                             return std::make_unique<BlockContainer>(KeyTupleLayout{kMask}, d);
                           }}),
    [](const auto& info) { return info.param.name; });

TEST(StaticVector, SeventySeventhDistinctInsertFails) {
  StaticVectorContainer c(KeyTupleLayout{ColumnMask::all(3)});
  EXPECT_EQ(c.capacity(), 76u);
  for (std::uint32_t i = 0; i < 76; ++i) {
    ASSERT_TRUE(c.insert(KeyTuple({KeyCell{DictKey{i}}, KeyCell{DictKey{0}}, KeyCell{DictKey{0}}})));
  }
  const KeyTuple extra({KeyCell{DictKey{76}}, KeyCell{DictKey{0}}, KeyCell{DictKey{0}}});
  const auto version = c.version();
  EXPECT_THROW(c.insert(extra), CapacityError);
  EXPECT_EQ(c.size(), 76u);
  EXPECT_EQ(c.version(), version);
  EXPECT_FALSE(c.contains(extra));
  // A duplicate of a stored tuple is still accepted as a no-op.
  EXPECT_FALSE(c.insert(KeyTuple({KeyCell{DictKey{5}}, KeyCell{DictKey{0}}, KeyCell{DictKey{0}}})));
  EXPECT_TRUE(c.erase(KeyTuple({KeyCell{DictKey{5}}, KeyCell{DictKey{0}}, KeyCell{DictKey{0}}})));
  EXPECT_TRUE(c.insert(extra));
}

TEST(StaticVector, OversizedInlineValueIsCapacityError) {
  StaticVectorContainer c(KeyTupleLayout{ColumnMask::all(1, false), 8}, 4);
  EXPECT_TRUE(c.insert(KeyTuple({KeyCell{std::string(8, 'a')}})));
  EXPECT_THROW(c.insert(KeyTuple({KeyCell{std::string(9, 'a')}})), CapacityError);
  EXPECT_EQ(c.size(), 1u);
}

TEST(StaticVector, ZeroCapacityRejected) {
  EXPECT_THROW(StaticVectorContainer(KeyTupleLayout{ColumnMask::all(3)}, 0), UsageError);
}

TEST(KeyTupleEncoding, LayoutOfMixedColumns) {
  const auto enc = tuple(0x01020304, "ab", 7).encode();
  EXPECT_EQ(enc, std::string("\x01\x02\x03\x04\x00\x02" "ab\x00\x00\x00\x07", 12));
  KeyTupleView v(enc, &kMask);
  EXPECT_EQ(v.key(0), DictKey{0x01020304});
  EXPECT_EQ(v.inline_bytes(1), "ab");
  EXPECT_EQ(v.key(2), DictKey{7});
  EXPECT_TRUE(tuple(0x01020304, "ab", 7) == v);
}

TEST(KeyTupleEncoding, CheckedRejectsTruncation) {
  const auto enc = tuple(1, "abc", 2).encode();
  EXPECT_NO_THROW(KeyTupleView::checked(enc, &kMask));
  EXPECT_THROW(KeyTupleView::checked(std::string_view(enc).substr(0, enc.size() - 1), &kMask), FormatError);
  EXPECT_THROW(KeyTupleView::checked(enc + "x", &kMask), FormatError);
}

TEST(KeyTupleEncoding, MaxRecordBytes) {
  EXPECT_EQ((KeyTupleLayout{ColumnMask::all(3), 256}.max_record_bytes()), 12u);
  EXPECT_EQ((KeyTupleLayout{kMask, 256}.max_record_bytes()), 4u + 258u + 4u);
}
