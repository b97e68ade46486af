#include <gtest/gtest.h>

#include <array>
#include <atomic>
#include <cstdlib>
#include <new>

#include "tstore/chopper_dictionary.hpp"
#include "tstore/container.hpp"

namespace {
std::atomic<std::size_t> g_allocations{0};
}

void* operator new(std::size_t n) {
  g_allocations.fetch_add(1, std::memory_order_relaxed);
  if (void* p = std::malloc(n == 0 ? 1 : n)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { operator delete(p); }
void operator delete[](void* p, std::size_t) noexcept { operator delete(p); }

using namespace tstore;

namespace {

class AllocationCounter {
 public:
  AllocationCounter() : start_(g_allocations.load()) {}
  std::size_t count() const { return g_allocations.load() - start_; }

 private:
  std::size_t start_;
};

}  // namespace

TEST(StaticMemory, HookCountsAllocations) {
  AllocationCounter c;
  void* p = ::operator new(16);
  ::operator delete(p);
  EXPECT_EQ(c.count(), 1u);
}

TEST(StaticMemory, ChopperOperationsDoNotAllocate) {
  ChopperDictionary d(100, 15);
  const std::string_view elems[] = {"http://example.org/a", "http://example.org/b",
                                    "a much longer element that spans several chunks of payload", ""};
  std::array<char, 128> buf{};
  std::size_t copied = 0;
  AllocationCounter c;
  for (int round = 0; round < 3; ++round) {
    DictKey keys[4];
    for (int i = 0; i < 4; ++i) keys[i] = d.insert(elems[i]);
    for (int i = 0; i < 4; ++i) {
      if (!d.find(elems[i])) ADD_FAILURE();
      copied += d.copy_to(keys[i], buf);
    }
    d.insert(elems[0]);
    d.erase(keys[0]);
    for (int i = 0; i < 4; ++i) d.erase(keys[i]);
  }
  const auto allocations = c.count();
  EXPECT_EQ(allocations, 0u);
  EXPECT_GT(copied, 0u);
  EXPECT_EQ(d.size(), 0u);
}

TEST(StaticMemory, StaticVectorOperationsDoNotAllocate) {
  StaticVectorContainer v(KeyTupleLayout{ColumnMask::all(3)});
  std::vector<KeyTuple> tuples;
  for (std::uint32_t i = 0; i < 76; ++i) {
    tuples.emplace_back(std::vector<KeyCell>{DictKey{i}, DictKey{i + 1}, DictKey{i + 2}});
  }
  std::size_t hits = 0;
  AllocationCounter c;
  for (const auto& t : tuples) v.insert(t);
  for (const auto& t : tuples) hits += v.contains(t);
  for (std::size_t i = 0; i < tuples.size(); i += 2) v.erase(tuples[i]);
  for (std::size_t i = 0; i < tuples.size(); i += 2) v.insert(tuples[i]);
  const auto allocations = c.count();
  EXPECT_EQ(allocations, 0u);
  EXPECT_EQ(hits, 76u);
  EXPECT_EQ(v.size(), 76u);
}
