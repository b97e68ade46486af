#include "tstore/element.hpp"

#include <algorithm>

#include "tstore/error.hpp"

namespace tstore {

namespace {

void check_length(std::size_t n) {
  if (n > kMaxElementBytes) {
    throw UsageError("element of " + std::to_string(n) +
                     " bytes exceeds the 65535-byte limit");
  }
}

}  // namespace

Element::Element(std::string_view bytes) : bytes_(bytes) { check_length(bytes_.size()); }

Element::Element(std::string&& bytes) : bytes_(std::move(bytes)) {
  check_length(bytes_.size());
}

TupleTemplate TupleTemplate::exact(const Tuple& t) {
  std::vector<Slot> slots;
  slots.reserve(t.size());
  for (const auto& e : t) slots.emplace_back(e);
  return TupleTemplate(std::move(slots));
}

std::size_t TupleTemplate::wildcard_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(slots_.begin(), slots_.end(), [](const Slot& s) { return !s; }));
}

ColumnMask ColumnMask::parse(std::string_view flags) {
  std::vector<bool> v;
  for (char c : flags) {
    if (c == '1') {
      v.push_back(true);
    } else if (c == '0') {
      v.push_back(false);
    } else {
      throw UsageError("column mask must consist of '0' and '1', got '" +
                       std::string(flags) + "'");
    }
  }
  if (v.empty()) throw UsageError("column mask must not be empty");
  return ColumnMask(std::move(v));
}

bool ColumnMask::any_managed() const noexcept {
  return std::find(flags_.begin(), flags_.end(), true) != flags_.end();
}

std::string ColumnMask::to_string() const {
  std::string s;
  for (bool b : flags_) s.push_back(b ? '1' : '0');
  return s;
}

bool template_matches(const TupleTemplate& tmpl, const Tuple& t) {
  if (tmpl.size() != t.size()) {
    throw UsageError("template arity " + std::to_string(tmpl.size()) +
                     " does not match tuple arity " + std::to_string(t.size()));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (tmpl[i] && *tmpl[i] != t[i]) return false;
  }
  return true;
}

}  // namespace tstore
