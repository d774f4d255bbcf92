#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "klein/ainfinity.hpp"
#include "klein/category.hpp"

namespace klein {

struct ExampleCategory {
  std::string name;
  InvolutiveCategory cat;
  std::optional<CalabiYauData> cy;
};

// One-object category from an associative unital algebra: basis names/degrees,
// algebra products mult[i][j] = e_i · e_j, a unit vector, a star matrix, and a
// differential. compose(f,g) = g∘f is the algebra product g·f.
InvolutiveCategory one_object_category(std::vector<std::string> names, std::vector<int> degrees,
                                       std::vector<std::vector<SparseVector>> mult,
                                       SparseVector unit, SparseMatrix star, SparseMatrix diff);

// Ground field Q as a one-object category, trivial structure.
ExampleCategory make_ground_field();
// Group algebra Q[Z/n], star g -> g^{-1}, trace = coefficient of the identity.
ExampleCategory make_cyclic_group_algebra(std::size_t n);
// n x n matrix algebra, star = transpose, trace = matrix trace.
ExampleCategory make_matrix_algebra(std::size_t n);
// Dual numbers Q[x]/x² with ⋆(x) = ±x; a trace exists only for ⋆(x) = +x.
ExampleCategory make_dual_numbers(int star_sign);
// Square-zero DG algebra on {1, x, y, z} with |y| = |z| = 1, dy = x, xy = z;
// trace = coefficient of z, star = identity.
ExampleCategory make_dg_square_zero();
// Two-object category Q x Q with zero cross homs.
ExampleCategory make_two_branes();

// All bundled examples in a fixed order.
std::vector<ExampleCategory> bundled_examples();

// Conjugates the whole structure by random invertible degree-preserving basis
// changes of each hom space; axioms and CY data are preserved exactly.
void random_basis_change(ExampleCategory& ex, std::mt19937& rng);

// A random valid involutive (CY when available) category: picks a family and
// applies a random basis change. Deterministic given the rng state.
ExampleCategory random_involutive_category(std::mt19937& rng);

}  // namespace klein
