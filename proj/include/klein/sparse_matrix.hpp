#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "klein/rational.hpp"

namespace klein {

/// Vector with explicitly stored nonzero entries only.
using SparseVector = std::map<std::size_t, Rational>;

inline void add_scaled(SparseVector& dst, const SparseVector& src, const Rational& c) {
  if (c == 0) return;
  for (const auto& [i, v] : src) {
    Rational& slot = dst[i];
    slot += c * v;
    if (slot == 0) dst.erase(i);
  }
}

/// Sparse matrix over the rationals. Entries absent from the map are zero;
/// stored entries are kept nonzero.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void set(std::size_t r, std::size_t c, Rational v);
  void add(std::size_t r, std::size_t c, const Rational& v);
  Rational get(std::size_t r, std::size_t c) const;

  const std::map<std::pair<std::size_t, std::size_t>, Rational>& entries() const {
    return entries_;
  }

  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  SparseMatrix transposed() const;

  /// Matrix product this * rhs (this: m x k, rhs: k x n).
  SparseMatrix multiply(const SparseMatrix& rhs) const;

  SparseVector apply(const SparseVector& v) const;

  SparseMatrix operator+(const SparseMatrix& rhs) const;
  SparseMatrix operator-(const SparseMatrix& rhs) const;
  SparseMatrix scaled(const Rational& c) const;

  bool operator==(const SparseMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && entries_ == rhs.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, Rational> entries_;
};

/// Exact rank over the rationals; deterministic pivot rule.
std::size_t rank(const SparseMatrix& m);

/// Exact inverse of a square matrix, or nullopt if singular.
std::optional<SparseMatrix> inverse(const SparseMatrix& m);

/// Basis of ker(m); size is always cols - rank. Deterministic.
std::vector<SparseVector> kernel_basis(const SparseMatrix& m);

/// Presentation of the quotient of K^ambient_dim by the span of `relations`:
/// returns (dim, projection, section) with projection * section = identity on
/// the quotient and projection * r = 0 for every relation r.
struct QuotientPresentation {
  std::size_t dim = 0;
  SparseMatrix projection;  // dim x ambient
  SparseMatrix section;     // ambient x dim
};

QuotientPresentation quotient_presentation(std::size_t ambient_dim,
                                           const std::vector<SparseVector>& relations);

}  // namespace klein
