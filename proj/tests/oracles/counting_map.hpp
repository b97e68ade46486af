#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace oracle {

// Reference dictionary semantics: element -> live reference count.
struct CountingMap {
  std::map<std::string, std::uint32_t> counts;

  void insert(const std::string& e) { ++counts[e]; }
  std::uint32_t erase(const std::string& e) {
    auto it = counts.find(e);
    const std::uint32_t left = --it->second;
    if (left == 0) counts.erase(it);
    return left;
  }
  bool contains(const std::string& e) const { return counts.count(e) != 0; }
  std::uint32_t count(const std::string& e) const {
    auto it = counts.find(e);
    return it == counts.end() ? 0 : it->second;
  }
  std::size_t size() const { return counts.size(); }
};

}  // namespace oracle
