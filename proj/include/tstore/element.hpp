#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tstore {

inline constexpr std::size_t kMaxElementBytes = 65535;
inline constexpr std::size_t kDefaultArity = 3;

/// One tuple element: an opaque byte string of at most 65535 bytes.
/// Equality is bytewise; no normalization is ever applied.
class Element {
 public:
  Element() = default;
  Element(std::string_view bytes);  // NOLINT: implicit by design of the API
  Element(const char* bytes) : Element(std::string_view(bytes)) {}
  Element(const std::string& bytes) : Element(std::string_view(bytes)) {}
  Element(std::string&& bytes);

  std::string_view bytes() const noexcept { return bytes_; }
  const std::string& str() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }
  bool empty() const noexcept { return bytes_.empty(); }

  friend bool operator==(const Element&, const Element&) = default;
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    return a.bytes_.compare(b.bytes_) <=> 0;
  }

 private:
  std::string bytes_;
};

/// Fixed-arity sequence of elements. `size` and `access` mirror the tuple
/// concept used throughout the store.
class Tuple {
 public:
  Tuple() = default;
  explicit Tuple(std::size_t arity) : elements_(arity) {}
  Tuple(std::initializer_list<Element> elements) : elements_(elements) {}
  explicit Tuple(std::vector<Element> elements) : elements_(std::move(elements)) {}

  std::size_t size() const noexcept { return elements_.size(); }
  Element& access(std::size_t i) { return elements_.at(i); }
  const Element& access(std::size_t i) const { return elements_.at(i); }

  const Element& operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend auto operator<=>(const Tuple&, const Tuple&) = default;

 private:
  std::vector<Element> elements_;
};

/// A tuple pattern; a disengaged slot is a wildcard.
class TupleTemplate {
 public:
  using Slot = std::optional<Element>;

  TupleTemplate() = default;
  explicit TupleTemplate(std::size_t arity) : slots_(arity) {}
  TupleTemplate(std::initializer_list<Slot> slots) : slots_(slots) {}
  explicit TupleTemplate(std::vector<Slot> slots) : slots_(std::move(slots)) {}

  /// Lifts a tuple to a template with no wildcards.
  static TupleTemplate exact(const Tuple& t);

  /// All-wildcard template of the given arity.
  static TupleTemplate any(std::size_t arity) { return TupleTemplate(arity); }

  std::size_t size() const noexcept { return slots_.size(); }
  const Slot& operator[](std::size_t i) const { return slots_[i]; }
  Slot& operator[](std::size_t i) { return slots_[i]; }
  bool is_wildcard(std::size_t i) const { return !slots_.at(i).has_value(); }
  std::size_t wildcard_count() const noexcept;

  auto begin() const { return slots_.begin(); }
  auto end() const { return slots_.end(); }

  friend bool operator==(const TupleTemplate&, const TupleTemplate&) = default;

 private:
  std::vector<Slot> slots_;
};

inline constexpr std::nullopt_t kWildcard = std::nullopt;

/// Per-column flag telling whether the column is dictionary-managed.
/// Fixed when a store is built.
class ColumnMask {
 public:
  ColumnMask() = default;
  /// Every column of the given arity managed (or none).
  static ColumnMask all(std::size_t arity, bool managed = true) {
    return ColumnMask(std::vector<bool>(arity, managed));
  }
  /// Parses "110"-style strings: '1' managed, '0' inline.
  static ColumnMask parse(std::string_view flags);

  explicit ColumnMask(std::vector<bool> flags) : flags_(std::move(flags)) {}

  std::size_t size() const noexcept { return flags_.size(); }
  bool managed(std::size_t column) const { return flags_.at(column); }
  bool any_managed() const noexcept;
  std::string to_string() const;

  friend bool operator==(const ColumnMask&, const ColumnMask&) = default;

 private:
  std::vector<bool> flags_;
};

/// True iff every bound slot of `tmpl` equals the corresponding element of `t`.
/// Throws UsageError on arity mismatch.
bool template_matches(const TupleTemplate& tmpl, const Tuple& t);

}  // namespace tstore
