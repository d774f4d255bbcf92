#include "klein/sparse_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace klein {

void SparseMatrix::set(std::size_t r, std::size_t c, Rational v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix::set out of bounds");
  if (v == 0)
    entries_.erase({r, c});
  else
    entries_[{r, c}] = std::move(v);
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Rational& v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix::add out of bounds");
  if (v == 0) return;
  auto key = std::make_pair(r, c);
  Rational& slot = entries_[key];
  slot += v;
  if (slot == 0) entries_.erase(key);
}

Rational SparseMatrix::get(std::size_t r, std::size_t c) const {
  auto it = entries_.find({r, c});
  return it == entries_.end() ? Rational(0) : it->second;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_);
  for (const auto& [rc, v] : entries_) t.entries_[{rc.second, rc.first}] = v;
  return t;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("SparseMatrix::multiply shape mismatch");
  // Row-major view of rhs for cache of nonzero rows.
  std::vector<SparseVector> rhs_rows(rhs.rows_);
  for (const auto& [rc, v] : rhs.entries_) rhs_rows[rc.first][rc.second] = v;
  SparseMatrix out(rows_, rhs.cols_);
  for (const auto& [rc, v] : entries_) {
    const auto& row = rhs_rows[rc.second];
    for (const auto& [j, w] : row) out.add(rc.first, j, v * w);
  }
  return out;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
  SparseVector out;
  for (const auto& [rc, a] : entries_) {
    auto it = v.find(rc.second);
    if (it == v.end()) continue;
    Rational& slot = out[rc.first];
    slot += a * it->second;
    if (slot == 0) out.erase(rc.first);
  }
  return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("SparseMatrix::operator+ shape mismatch");
  SparseMatrix out = *this;
  for (const auto& [rc, v] : rhs.entries_) out.add(rc.first, rc.second, v);
  return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("SparseMatrix::operator- shape mismatch");
  SparseMatrix out = *this;
  for (const auto& [rc, v] : rhs.entries_) out.add(rc.first, rc.second, -v);
  return out;
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const {
  SparseMatrix out(rows_, cols_);
  if (c == 0) return out;
  for (const auto& [rc, v] : entries_) out.entries_[rc] = c * v;
  return out;
}

namespace {

// Row-echelon worker shared by rank and kernel_basis. Gaussian elimination
// over Q with a fixed pivot rule: among the remaining rows, take the one whose
// leading column is smallest, ties broken by fewest nonzeros then row index.
struct Echelon {
  std::vector<SparseVector> rows;           // echelon rows, in pivot order
  std::vector<std::size_t> pivot_cols;      // pivot column of each row

  void reduce(SparseVector& v) const {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      auto it = v.find(pivot_cols[k]);
      if (it == v.end()) continue;
      Rational c = it->second;  // pivot entries are normalized to 1
      add_scaled(v, rows[k], -c);
    }
  }

  // Inserts v if independent; returns true when the row was added.
  bool insert(SparseVector v) {
    reduce(v);
    if (v.empty()) return false;
    std::size_t lead = v.begin()->first;
    Rational inv = Rational(1) / v.begin()->second;
    for (auto& [i, x] : v) x *= inv;
    // Back-substitute into existing rows to keep reduction cheap.
    for (std::size_t k = 0; k < rows.size(); ++k) {
      auto it = rows[k].find(lead);
      if (it != rows[k].end()) add_scaled(rows[k], v, -it->second);
    }
    rows.push_back(std::move(v));
    pivot_cols.push_back(lead);
    return true;
  }
};

std::vector<SparseVector> matrix_rows(const SparseMatrix& m) {
  std::vector<SparseVector> rows(m.rows());
  for (const auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;
  return rows;
}

}  // namespace

std::size_t rank(const SparseMatrix& m) {
  Echelon ech;
  for (auto& row : matrix_rows(m)) ech.insert(std::move(row));
  return ech.rows.size();
}

std::optional<SparseMatrix> inverse(const SparseMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  std::size_t n = m.rows();
  // Gauss-Jordan on [m | I], dense rows of sparse vectors.
  std::vector<SparseVector> a = matrix_rows(m);
  std::vector<SparseVector> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (a[r].count(col)) {
        pivot = r;
        break;
      }
    if (pivot == n) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    Rational s = Rational(1) / a[col][col];
    for (auto& [j, v] : a[col]) v *= s;
    for (auto& [j, v] : inv[col]) v *= s;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      auto it = a[r].find(col);
      if (it == a[r].end()) continue;
      Rational c = it->second;
      add_scaled(a[r], a[col], -c);
      add_scaled(inv[r], inv[col], -c);
    }
  }
  SparseMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& [j, v] : inv[r]) out.set(r, j, v);
  return out;
}

std::vector<SparseVector> kernel_basis(const SparseMatrix& m) {
  // Column echelon with bookkeeping: eliminate columns of m while tracking the
  // combination of original columns; exhausted combinations are kernel vectors.
  Echelon ech;
  std::vector<SparseVector> kernel;
  std::vector<SparseVector> cols(m.cols());
  for (const auto& [rc, v] : m.entries()) cols[rc.second][rc.first] = v;
  // Track (column-of-m, combination) pairs through one elimination pass.
  std::vector<std::pair<SparseVector, SparseVector>> work;  // (image, preimage)
  work.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    SparseVector pre;
    pre[j] = 1;
    work.emplace_back(std::move(cols[j]), std::move(pre));
  }
  // Elimination on images, mirrored on preimages.
  std::vector<std::pair<SparseVector, SparseVector>> pivots;
  for (auto& [img, pre] : work) {
    for (auto& [pimg, ppre] : pivots) {
      auto it = img.find(pimg.begin()->first);
      if (it == img.end()) continue;
      Rational c = it->second;
      add_scaled(img, pimg, -c);
      add_scaled(pre, ppre, -c);
    }
    if (img.empty()) {
      kernel.push_back(std::move(pre));
      continue;
    }
    Rational inv = Rational(1) / img.begin()->second;
    for (auto& [i, x] : img) x *= inv;
    for (auto& [i, x] : pre) x *= inv;
    pivots.emplace_back(std::move(img), std::move(pre));
  }
  return kernel;
}

QuotientPresentation quotient_presentation(std::size_t ambient_dim,
                                           const std::vector<SparseVector>& relations) {
  Echelon ech;
  for (const auto& r : relations) {
    for (const auto& [i, v] : r) {
      (void)v;
      if (i >= ambient_dim) throw std::invalid_argument("relation exceeds ambient dimension");
    }
    ech.insert(r);
  }
  // Free columns (non-pivot) index the quotient basis.
  std::vector<bool> is_pivot(ambient_dim, false);
  for (std::size_t c : ech.pivot_cols) is_pivot[c] = true;
  QuotientPresentation q;
  std::vector<std::size_t> free_cols;
  for (std::size_t i = 0; i < ambient_dim; ++i)
    if (!is_pivot[i]) free_cols.push_back(i);
  q.dim = free_cols.size();
  q.projection = SparseMatrix(q.dim, ambient_dim);
  q.section = SparseMatrix(ambient_dim, q.dim);
  std::vector<std::size_t> free_index(ambient_dim, 0);
  for (std::size_t k = 0; k < free_cols.size(); ++k) free_index[free_cols[k]] = k;
  // projection(e_i) = e_i reduced modulo the relations, expressed on free cols.
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    SparseVector e;
    e[i] = 1;
    ech.reduce(e);
    for (const auto& [j, v] : e) q.projection.add(free_index[j], i, v);
  }
  for (std::size_t k = 0; k < free_cols.size(); ++k) q.section.set(free_cols[k], k, 1);
  return q;
}

}  // namespace klein
