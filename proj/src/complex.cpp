#include "klein/complex.hpp"

#include <sstream>

namespace klein {

std::optional<std::string> verify_complex(const FiniteComplex& c) {
  if (c.dims.empty()) return std::nullopt;
  if (c.differentials.size() + 1 != c.dims.size()) {
    std::ostringstream os;
    os << "expected " << c.dims.size() - 1 << " differentials, got " << c.differentials.size();
    return os.str();
  }
  for (std::size_t k = 0; k < c.differentials.size(); ++k) {
    const auto& d = c.differentials[k];
    if (d.rows() != c.dims[k] || d.cols() != c.dims[k + 1]) {
      std::ostringstream os;
      os << "differential into degree " << c.min_degree + static_cast<int>(k) << " has shape "
         << d.rows() << "x" << d.cols() << ", expected " << c.dims[k] << "x" << c.dims[k + 1];
      return os.str();
    }
  }
  for (std::size_t k = 0; k + 1 < c.differentials.size(); ++k) {
    SparseMatrix sq = c.differentials[k].multiply(c.differentials[k + 1]);
    if (!sq.is_zero()) {
      std::ostringstream os;
      os << "d*d nonzero from degree " << c.min_degree + static_cast<int>(k) + 2;
      auto it = sq.entries().begin();
      os << " (entry " << it->first.first << "," << it->first.second << " = "
         << rational_to_string(it->second) << ")";
      return os.str();
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> homology_dims(const FiniteComplex& c) {
  std::vector<std::size_t> out(c.dims.size(), 0);
  if (c.dims.empty()) return out;
  // rank_out[k] = rank of differential leaving degree k; rank_in[k] = rank of
  // differential entering degree k.
  std::vector<std::size_t> rk(c.differentials.size(), 0);
  for (std::size_t k = 0; k < c.differentials.size(); ++k) rk[k] = rank(c.differentials[k]);
  for (std::size_t k = 0; k < c.dims.size(); ++k) {
    std::size_t rank_out = (k > 0) ? rk[k - 1] : 0;            // d: C_k -> C_{k-1}
    std::size_t rank_in = (k < rk.size()) ? rk[k] : 0;         // d: C_{k+1} -> C_k
    out[k] = c.dims[k] - rank_out - rank_in;
  }
  return out;
}

}  // namespace klein
