#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "pdir/common.hpp"

namespace pdir {

using BigInt = boost::multiprecision::cpp_int;

// Dense integer matrix; rows are constraint equations over rational unknowns.
using IntMatrix = std::vector<std::vector<BigInt>>;

// Rank over the rationals by fraction-free (Bareiss) elimination. Exact: the
// input is integral and all intermediate values stay integral.
inline int exact_rank(IntMatrix m) {
  if (m.empty()) return 0;
  const size_t rows = m.size(), cols = m.front().size();
  BigInt prev = 1;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    for (size_t r = rank + 1; r < rows; ++r) {
      for (size_t c = col + 1; c < cols; ++c)
        m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
      m[r][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return static_cast<int>(rank);
}

namespace detail {

struct BigRational {
  BigInt num = 0, den = 1;

  BigRational() = default;
  BigRational(BigInt n) : num(std::move(n)) {}
  BigRational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }
  friend BigRational operator+(const BigRational& a, const BigRational& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend BigRational operator-(const BigRational& a, const BigRational& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend BigRational operator*(const BigRational& a, const BigRational& b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.num == 0) fail("InternalError", "rational division by zero");
    return {a.num * b.den, a.den * b.num};
  }
  bool zero() const { return num == 0; }
};

}  // namespace detail

// Integer basis of the null space {x : m x = 0}, one vector per free column.
// Solutions are computed exactly over the rationals and cleared to integers.
inline std::vector<std::vector<BigInt>> integer_nullspace(IntMatrix m, size_t cols) {
  using detail::BigRational;
  std::vector<std::vector<BigRational>> rref;
  for (const auto& row : m) {
    std::vector<BigRational> r(cols);
    for (size_t c = 0; c < cols; ++c) r[c] = BigRational(row[c]);
    rref.push_back(std::move(r));
  }
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rref.size(); ++col) {
    size_t pivot = rank;
    while (pivot < rref.size() && rref[pivot][col].zero()) ++pivot;
    if (pivot == rref.size()) continue;
    std::swap(rref[rank], rref[pivot]);
    BigRational inv = BigRational(1) / rref[rank][col];
    for (size_t c = col; c < cols; ++c) rref[rank][c] = rref[rank][c] * inv;
    for (size_t r = 0; r < rref.size(); ++r) {
      if (r == rank || rref[r][col].zero()) continue;
      BigRational factor = rref[r][col];
      for (size_t c = col; c < cols; ++c) rref[r][c] = rref[r][c] - factor * rref[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<BigInt>> basis;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<BigRational> x(cols);
    x[free_col] = BigRational(1);
    for (size_t r = 0; r < rank; ++r)
      x[pivot_col[r]] = BigRational(0) - rref[r][free_col];
    BigInt lcm = 1;
    for (const auto& v : x) lcm = boost::multiprecision::lcm(lcm, v.den);
    std::vector<BigInt> vec(cols);
    for (size_t c = 0; c < cols; ++c) vec[c] = x[c].num * (lcm / x[c].den);
    basis.push_back(std::move(vec));
  }
  return basis;
}

}  // namespace pdir
