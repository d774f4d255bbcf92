#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "klein/report.hpp"
#include "klein/sparse_matrix.hpp"

namespace klein {

// Graded basis of one hom space Hom(a,b).
struct HomBasis {
  std::vector<std::string> names;
  std::vector<int> degrees;

  std::size_t dim() const { return names.size(); }
};

// An element of a single hom space, as coordinates in its basis.
struct Element {
  std::size_t source = 0;
  std::size_t target = 0;
  SparseVector coords;
};

// A differential graded category with involution, given by explicit bases and
// structure constants over Q. Object set is a finite list of brane names; the
// involution fixes objects and reverses hom directions.
struct InvolutiveCategory {
  std::vector<std::string> branes;
  // homs[a][b] = basis of Hom(a,b)
  std::vector<std::vector<HomBasis>> homs;
  // compose_table[{a,b,c}][i][j] = coordinates of g_j ∘ f_i in Hom(a,c),
  // for f_i basis of Hom(a,b) and g_j basis of Hom(b,c). Missing key = zero.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>,
           std::vector<std::vector<SparseVector>>>
      compose_table;
  // units[a] = coordinates of 1_a in Hom(a,a); may be a combination.
  std::vector<SparseVector> units;
  // diff[{a,b}] = matrix of d on Hom(a,b) (degree -1). Missing key = zero.
  std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> diff;
  // star[{a,b}] = matrix of ⋆ : Hom(a,b) -> Hom(b,a). Missing key = zero map.
  std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> star;

  std::size_t brane_count() const { return branes.size(); }
  std::size_t dim(std::size_t a, std::size_t b) const { return homs[a][b].dim(); }
  int degree_of(std::size_t a, std::size_t b, std::size_t i) const { return homs[a][b].degrees[i]; }

  // g ∘ f for basis indices f_i in Hom(a,b), g_j in Hom(b,c).
  SparseVector compose_basis(std::size_t a, std::size_t b, std::size_t c, std::size_t i,
                             std::size_t j) const;
  // Bilinear extension: compose(f: a->b, g: b->c) = g ∘ f in Hom(a,c).
  SparseVector compose(std::size_t a, std::size_t b, std::size_t c, const SparseVector& f,
                       const SparseVector& g) const;
  SparseVector apply_diff(std::size_t a, std::size_t b, const SparseVector& f) const;
  SparseVector apply_star_vec(std::size_t a, std::size_t b, const SparseVector& f) const;

  std::string basis_name(std::size_t a, std::size_t b, std::size_t i) const;
};

// Shape consistency, degree bookkeeping, d² = 0, Leibniz, associativity, unit
// laws. Star laws are checked separately by check_involution_axioms.
Report check_dg_axioms(const InvolutiveCategory& c);

// Anti-homomorphism (g∘f)⋆ = f⋆∘g⋆, involutivity ⋆⋆ = id, unit fixing,
// d-compatibility d(f⋆) = (d f)⋆, and degree preservation.
Report check_involution_axioms(const InvolutiveCategory& c);

// Image of an element under ⋆; lands in the reversed hom space.
// Throws std::invalid_argument (UnknownElement) on out-of-range data.
Element apply_star(const InvolutiveCategory& c, const Element& e);

}  // namespace klein
