#pragma once

// Finitely supported vectors of a real separable Hilbert space, written in a
// fixed canonical orthonormal basis. Coordinates are either plain (block 0,
// index >= 1) or block-qualified (block >= 1, index >= 1) for direct sums.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greedex/error.hpp"

namespace greedex {

/// Coordinate identifier. Ordered block first, then index.
struct CoordId {
  std::uint32_t block = 0;
  std::uint64_t index = 0;

  constexpr CoordId() = default;
  constexpr CoordId(std::uint64_t i) : index(i) {}  // NOLINT(google-explicit-constructor)
  constexpr CoordId(std::uint32_t b, std::uint64_t i) : block(b), index(i) {}

  constexpr bool is_plain() const { return block == 0; }
  constexpr auto operator<=>(const CoordId&) const = default;
};

struct Entry {
  CoordId id;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

/// Canonical form: entries sorted by id, ids distinct, no exact zeros.
class SparseVector {
 public:
  SparseVector() = default;

  SparseVector(std::initializer_list<Entry> entries)
      : SparseVector(std::vector<Entry>(entries)) {}

  /// Sorts and drops exact zeros. Repeated ids are rejected.
  explicit SparseVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (e.id.index == 0) {
        throw Error(ErrorKind::ConfigInvalid, "coordinate indices start at 1");
      }
      if (!std::isfinite(e.value)) {
        throw Error(ErrorKind::ConfigInvalid, "non-finite coordinate value");
      }
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].id == entries_[i - 1].id) {
        throw Error(ErrorKind::ConfigInvalid, "repeated coordinate index");
      }
    }
    drop_zeros();
  }

  static SparseVector from_sorted_unchecked(std::vector<Entry> entries) {
    SparseVector v;
    v.entries_ = std::move(entries);
    v.drop_zeros();
    return v;
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double value(CoordId id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry& e, const CoordId& key) { return e.id < key; });
    return (it != entries_.end() && it->id == id) ? it->value : 0.0;
  }

  /// Component in block `b`, re-indexed as a plain vector.
  SparseVector restrict_block(std::uint32_t b) const {
    std::vector<Entry> out;
    for (const auto& e : entries_) {
      if (e.id.block == b) out.push_back({CoordId{e.id.index}, e.value});
    }
    return from_sorted_unchecked(std::move(out));
  }

  /// Plain vector embedded into block `b`. Requires plain coordinates.
  SparseVector lift_to_block(std::uint32_t b) const {
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) {
      if (!e.id.is_plain()) {
        throw Error(ErrorKind::Unsupported, "nested block coordinates");
      }
      out.push_back({CoordId{b, e.id.index}, e.value});
    }
    return from_sorted_unchecked(std::move(out));
  }

  SparseVector operator-() const {
    SparseVector v = *this;
    for (auto& e : v.entries_) e.value = -e.value;
    return v;
  }

  /// Largest plain index in the support, 0 for an empty vector or block-only support.
  std::uint64_t max_plain_index() const {
    std::uint64_t m = 0;
    for (const auto& e : entries_) {
      if (e.id.is_plain()) m = std::max(m, e.id.index);
    }
    return m;
  }

  bool operator==(const SparseVector&) const = default;

 private:
  void drop_zeros() {
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
  }

  std::vector<Entry> entries_;
};

/// Signed canonical basis vector s * e_i.
inline SparseVector basis(std::uint64_t i, double sign = 1.0) {
  return SparseVector{{CoordId{i}, sign}};
}

inline SparseVector block_basis(std::uint32_t block, std::uint64_t i, double sign = 1.0) {
  return SparseVector{{CoordId{block, i}, sign}};
}

/// Vector with coordinates values[0] at index 1, values[1] at index 2, ...
inline SparseVector from_dense(std::span<const double> values) {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({CoordId{static_cast<std::uint64_t>(i + 1)}, values[i]});
  }
  return SparseVector(std::move(out));
}

inline std::vector<double> to_dense(const SparseVector& v, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (const auto& e : v.entries()) {
    if (!e.id.is_plain() || e.id.index > dim) {
      throw Error(ErrorKind::ConfigInvalid, "coordinate outside dense range");
    }
    out[e.id.index - 1] = e.value;
  }
  return out;
}

inline double inner(const SparseVector& u, const SparseVector& v) {
  auto a = u.entries();
  auto b = v.entries();
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i].id < b[j].id) {
      ++i;
    } else if (b[j].id < a[i].id) {
      ++j;
    } else {
      sum += a[i].value * b[j].value;
      ++i;
      ++j;
    }
  }
  return sum;
}

inline double norm_squared(const SparseVector& v) {
  double sum = 0.0;
  for (const auto& e : v.entries()) sum += e.value * e.value;
  return sum;
}

inline double norm(const SparseVector& v) { return std::sqrt(norm_squared(v)); }

/// v - c * a, computed coordinatewise as `v_i - c * a_i`.
inline SparseVector subtract_scaled(const SparseVector& v, double c, const SparseVector& a) {
  auto x = v.entries();
  auto y = a.entries();
  std::vector<Entry> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].id < y[j].id)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].id < x[i].id) {
      out.push_back({y[j].id, 0.0 - c * y[j].value});
      ++j;
    } else {
      out.push_back({x[i].id, x[i].value - c * y[j].value});
      ++i;
      ++j;
    }
  }
  return SparseVector::from_sorted_unchecked(std::move(out));
}

inline SparseVector add_scaled(const SparseVector& v, double c, const SparseVector& a) {
  return subtract_scaled(v, -c, a);
}

}  // namespace greedex
