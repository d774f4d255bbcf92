#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klein/sparse_matrix.hpp"

namespace klein {

// A finite chain complex ... -> C_k -> C_{k-1} -> ... concentrated in degrees
// [min_degree, min_degree + dims.size() - 1]. differentials[k] maps degree
// min_degree + k + 1 to min_degree + k, so differentials.size() + 1 == dims.size()
// (empty differentials for a single-degree complex).
struct FiniteComplex {
  int min_degree = 0;
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> differentials;

  std::size_t dim_at(int degree) const {
    int k = degree - min_degree;
    if (k < 0 || k >= static_cast<int>(dims.size())) return 0;
    return dims[static_cast<std::size_t>(k)];
  }
};

// Checks shapes and d*d == 0; returns a description of the first failure.
std::optional<std::string> verify_complex(const FiniteComplex& c);

// Homology dimensions, one entry per degree of c.dims (same indexing).
std::vector<std::size_t> homology_dims(const FiniteComplex& c);

}  // namespace klein
