#pragma once

#include <map>
#include <vector>

#include "klein/category.hpp"
#include "klein/complex.hpp"
#include "klein/report.hpp"

namespace klein {

// An A∞-category with involution, truncated at arity n_max: products m_n for
// 1 <= n <= n_max, with m_n of degree n-2; all longer products are zero.
struct AInfinityCategory {
  std::vector<std::string> branes;
  std::vector<std::vector<HomBasis>> homs;  // homs[a][b]
  // products[n] maps an object sequence (c_0,...,c_n) to a table from basis
  // index words (i_1,...,i_n), i_k in Hom(c_{k-1},c_k), to the coordinates of
  // m_n(f_{i_1} ⊗ ... ⊗ f_{i_n}) in Hom(c_0,c_n). Missing entries are zero.
  std::map<std::size_t,
           std::map<std::vector<std::size_t>, std::map<std::vector<std::size_t>, SparseVector>>>
      products;
  std::vector<SparseVector> units;                                  // 1_a in Hom(a,a)
  std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> star;  // Hom(a,b)->Hom(b,a)
  std::size_t n_max = 2;

  std::size_t brane_count() const { return branes.size(); }
  std::size_t dim(std::size_t a, std::size_t b) const { return homs[a][b].dim(); }
  int degree_of(std::size_t a, std::size_t b, std::size_t i) const { return homs[a][b].degrees[i]; }

  // m_n on a basis index word along the object sequence objs (length n+1).
  SparseVector product_basis(std::size_t n, const std::vector<std::size_t>& objs,
                             const std::vector<std::size_t>& word) const;
  SparseVector apply_star_vec(std::size_t a, std::size_t b, const SparseVector& f) const;
};

// Trace functionals Tr : Hom(e,e) -> Q, one row vector per object.
struct CalabiYauData {
  std::vector<SparseVector> trace;  // trace[e][i] = Tr of i-th basis element of Hom(e,e)
  int degree = 0;
};

// The quadratic A∞ relations: for every n <= n_max + 1 and basis word,
// sum over i+j+l=n of (-1)^{i+jl} m_{i+1+l}(id^i ⊗ m_j ⊗ id^l) vanishes, with
// the Koszul sign taken against the arguments to the right of the inner m_j.
Report check_ainfty_relations(const AInfinityCategory& c);

// (m_n(f_1⊗...⊗f_n))⋆ = ε · m_n(f_n⋆⊗...⊗f_1⋆) with the Koszul reversal sign
// ε = (-1)^{Σ_{i<j}|f_i||f_j|}, on all basis words up to n_max.
Report check_involution_compatibility(const AInfinityCategory& c);

// Trace star-invariance, pairing symmetry, non-degeneracy on homology,
// star-compatibility ⟨f,g⟩ = ⟨g⋆,f⋆⟩, and the cyclic identity.
Report check_calabi_yau(const AInfinityCategory& c, const CalabiYauData& cy);

// m_1 = d, m_2 = composition, higher products zero.
AInfinityCategory from_dg(const InvolutiveCategory& c);

}  // namespace klein
