#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "pdir/common.hpp"

namespace pdir {

using LevelMap = std::map<Vertex, int>;

inline std::vector<int> radix_for(const VertexSet& subset, const LevelMap& levels) {
  std::vector<int> r;
  r.reserve(subset.size());
  for (Vertex v : subset) {
    auto it = levels.find(v);
    if (it == levels.end()) fail("UnknownVertex", "no level count for vertex " + std::to_string(v));
    r.push_back(it->second);
  }
  return r;
}

inline std::int64_t cell_count(const std::vector<int>& radix) {
  std::int64_t n = 1;
  for (int r : radix) n *= r;
  return n;
}

// Dense table over the cells of I_A for a vertex subset A. Cells are laid out
// mixed-radix with the last (largest) vertex of A varying fastest.
template <typename T>
struct MarginalTable {
  VertexSet subset;
  std::vector<int> radix;
  std::vector<T> values;

  MarginalTable() = default;
  MarginalTable(VertexSet s, const LevelMap& levels, T fill = T{})
      : subset(std::move(s)), radix(radix_for(subset, levels)) {
    values.assign(static_cast<size_t>(cell_count(radix)), fill);
  }

  size_t size() const { return values.size(); }

  size_t index_of(std::span<const int> digits) const {
    size_t idx = 0;
    for (size_t p = 0; p < radix.size(); ++p) idx = idx * radix[p] + digits[p];
    return idx;
  }

  std::vector<int> digits_of(size_t idx) const {
    std::vector<int> d(radix.size());
    for (size_t p = radix.size(); p-- > 0;) {
      d[p] = static_cast<int>(idx % radix[p]);
      idx /= radix[p];
    }
    return d;
  }
};

// Positions of B's vertices inside A (requires B subset of A).
inline std::vector<size_t> positions_in(const VertexSet& sub, const VertexSet& super) {
  std::vector<size_t> pos;
  pos.reserve(sub.size());
  size_t j = 0;
  for (size_t i = 0; i < sub.size(); ++i) {
    while (j < super.size() && super[j] != sub[i]) ++j;
    if (j == super.size()) fail("UnknownVertex", set_str(sub) + " is not a subset of " + set_str(super));
    pos.push_back(j);
  }
  return pos;
}

// Maps every cell index of `super`'s table to the cell index of the projection
// onto `sub`. Both tables must use the same level map.
template <typename T>
std::vector<size_t> projection_map(const MarginalTable<T>& from, const VertexSet& sub,
                                   const std::vector<int>& sub_radix) {
  const auto pos = positions_in(sub, from.subset);
  std::vector<size_t> map(from.size());
  std::vector<int> digits(from.radix.size(), 0);
  for (size_t idx = 0; idx < from.size(); ++idx) {
    size_t s = 0;
    for (size_t p = 0; p < pos.size(); ++p) s = s * sub_radix[p] + digits[pos[p]];
    map[idx] = s;
    for (size_t p = digits.size(); p-- > 0;) {
      if (++digits[p] < from.radix[p]) break;
      digits[p] = 0;
    }
  }
  return map;
}

template <typename T>
MarginalTable<T> marginalize(const MarginalTable<T>& table, const VertexSet& target,
                             const LevelMap& levels) {
  MarginalTable<T> out(target, levels, T{});
  const auto map = projection_map(table, target, out.radix);
  for (size_t idx = 0; idx < table.size(); ++idx) out.values[map[idx]] += table.values[idx];
  return out;
}

// Integer cell counts over the full cell set I of a graph's variables.
struct ContingencyTable {
  MarginalTable<std::int64_t> counts;  // subset == all vertices
  std::int64_t total = 0;

  static constexpr std::int64_t kDenseCellLimit = 1'000'000;

  static ContingencyTable zeros(const VertexSet& vertices, const LevelMap& levels) {
    std::int64_t cells = 1;
    for (Vertex v : vertices) {
      cells *= levels.at(v);
      if (cells > kDenseCellLimit)
        fail("TooLarge", "cell space exceeds dense capacity (" +
                             std::to_string(kDenseCellLimit) +
                             " cells); aggregate or restrict the variable set");
    }
    ContingencyTable t;
    t.counts = MarginalTable<std::int64_t>(vertices, levels, 0);
    return t;
  }

  void set_cell(std::span<const int> digits, std::int64_t n) {
    if (n < 0) fail("NegativeExponent", "cell counts must be non-negative");
    for (size_t p = 0; p < digits.size(); ++p)
      if (digits[p] < 0 || digits[p] >= counts.radix[p])
        fail("CellOutOfRange", "cell index out of range in position " + std::to_string(p));
    auto& slot = counts.values[counts.index_of(digits)];
    total += n - slot;
    slot = n;
  }

  MarginalTable<std::int64_t> marginal(const VertexSet& target, const LevelMap& levels) const {
    return marginalize(counts, target, levels);
  }
};

}  // namespace pdir
