#include "klein/examples.hpp"

#include <stdexcept>

namespace klein {

InvolutiveCategory one_object_category(std::vector<std::string> names, std::vector<int> degrees,
                                       std::vector<std::vector<SparseVector>> mult,
                                       SparseVector unit, SparseMatrix star, SparseMatrix diff) {
  InvolutiveCategory c;
  c.branes = {"a"};
  c.homs = {{HomBasis{std::move(names), std::move(degrees)}}};
  std::size_t n = c.homs[0][0].dim();
  std::vector<std::vector<SparseVector>> table(n, std::vector<SparseVector>(n));
  // compose(f_i, g_j) = g_j ∘ f_i = g_j · f_i in the algebra.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = mult[j][i];
  c.compose_table[{0, 0, 0}] = std::move(table);
  c.units = {std::move(unit)};
  if (!diff.is_zero()) c.diff[{0, 0}] = std::move(diff);
  c.star[{0, 0}] = std::move(star);
  return c;
}

ExampleCategory make_ground_field() {
  ExampleCategory ex;
  ex.name = "ground_field";
  std::vector<std::vector<SparseVector>> mult{{{{0, Rational(1)}}}};
  ex.cat = one_object_category({"1"}, {0}, mult, {{0, Rational(1)}}, SparseMatrix::identity(1),
                               SparseMatrix(1, 1));
  CalabiYauData cy;
  cy.trace = {{{0, Rational(1)}}};
  ex.cy = cy;
  return ex;
}

ExampleCategory make_cyclic_group_algebra(std::size_t n) {
  ExampleCategory ex;
  ex.name = "group_Z" + std::to_string(n);
  std::vector<std::string> names;
  std::vector<int> degrees(n, 0);
  for (std::size_t g = 0; g < n; ++g) names.push_back("g" + std::to_string(g));
  std::vector<std::vector<SparseVector>> mult(n, std::vector<SparseVector>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) mult[g][h] = {{(g + h) % n, Rational(1)}};
  SparseMatrix star(n, n);
  for (std::size_t g = 0; g < n; ++g) star.set((n - g) % n, g, 1);
  ex.cat = one_object_category(std::move(names), std::move(degrees), mult, {{0, Rational(1)}},
                               std::move(star), SparseMatrix(n, n));
  CalabiYauData cy;
  SparseVector tr;
  tr[0] = 1;
  cy.trace = {tr};
  ex.cy = cy;
  return ex;
}

ExampleCategory make_matrix_algebra(std::size_t n) {
  ExampleCategory ex;
  ex.name = "matrix_M" + std::to_string(n);
  std::size_t dim = n * n;
  auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };
  std::vector<std::string> names;
  std::vector<int> degrees(dim, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
  std::vector<std::vector<SparseVector>> mult(dim, std::vector<SparseVector>(dim));
  // E_ij · E_kl = δ_jk E_il
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          if (j == k) mult[idx(i, j)][idx(k, l)] = {{idx(i, l), Rational(1)}};
  SparseMatrix star(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) star.set(idx(j, i), idx(i, j), 1);
  SparseVector unit, tr;
  for (std::size_t i = 0; i < n; ++i) {
    unit[idx(i, i)] = 1;
    tr[idx(i, i)] = 1;
  }
  ex.cat = one_object_category(std::move(names), std::move(degrees), mult, std::move(unit),
                               std::move(star), SparseMatrix(dim, dim));
  CalabiYauData cy;
  cy.trace = {tr};
  ex.cy = cy;
  return ex;
}

ExampleCategory make_dual_numbers(int star_sign) {
  if (star_sign != 1 && star_sign != -1) throw std::invalid_argument("star_sign must be ±1");
  ExampleCategory ex;
  ex.name = star_sign == 1 ? "dual_numbers_plus" : "dual_numbers_minus";
  std::vector<std::vector<SparseVector>> mult(2, std::vector<SparseVector>(2));
  mult[0][0] = {{0, Rational(1)}};
  mult[0][1] = {{1, Rational(1)}};
  mult[1][0] = {{1, Rational(1)}};
  // x·x = 0
  SparseMatrix star(2, 2);
  star.set(0, 0, 1);
  star.set(1, 1, star_sign);
  ex.cat = one_object_category({"1", "x"}, {0, 0}, mult, {{0, Rational(1)}}, std::move(star),
                               SparseMatrix(2, 2));
  if (star_sign == 1) {
    // Tr = coefficient of x: ⟨1,x⟩ = 1 makes the pairing nondegenerate.
    CalabiYauData cy;
    cy.trace = {{{1, Rational(1)}}};
    ex.cy = cy;
  }
  return ex;
}

ExampleCategory make_dg_square_zero() {
  ExampleCategory ex;
  ex.name = "dg_square_zero";
  std::size_t dim = 4;  // 1, x, y, z with xy = yx = z, dy = x
  std::vector<std::vector<SparseVector>> mult(dim, std::vector<SparseVector>(dim));
  mult[0][0] = {{0, Rational(1)}};
  for (std::size_t i = 1; i < dim; ++i) {
    mult[0][i] = {{i, Rational(1)}};
    mult[i][0] = {{i, Rational(1)}};
  }
  mult[1][2] = {{3, Rational(1)}};  // x·y = z
  mult[2][1] = {{3, Rational(1)}};  // y·x = z
  SparseMatrix diff(dim, dim);
  diff.set(1, 2, 1);  // dy = x
  ex.cat = one_object_category({"1", "x", "y", "z"}, {0, 0, 1, 1}, mult, {{0, Rational(1)}},
                               SparseMatrix::identity(dim), std::move(diff));
  CalabiYauData cy;
  cy.trace = {{{3, Rational(1)}}};  // Tr = coefficient of z; vanishes on im d
  cy.degree = 1;
  ex.cy = cy;
  return ex;
}

ExampleCategory make_two_branes() {
  ExampleCategory ex;
  ex.name = "two_branes";
  InvolutiveCategory c;
  c.branes = {"a", "b"};
  c.homs.resize(2, std::vector<HomBasis>(2));
  c.homs[0][0] = {{"1a"}, {0}};
  c.homs[1][1] = {{"1b"}, {0}};
  c.compose_table[{0, 0, 0}] = {{{{0, Rational(1)}}}};
  c.compose_table[{1, 1, 1}] = {{{{0, Rational(1)}}}};
  c.units = {{{0, Rational(1)}}, {{0, Rational(1)}}};
  c.star[{0, 0}] = SparseMatrix::identity(1);
  c.star[{1, 1}] = SparseMatrix::identity(1);
  ex.cat = std::move(c);
  CalabiYauData cy;
  cy.trace = {{{0, Rational(1)}}, {{0, Rational(1)}}};
  ex.cy = cy;
  return ex;
}

std::vector<ExampleCategory> bundled_examples() {
  std::vector<ExampleCategory> out;
  out.push_back(make_ground_field());
  out.push_back(make_cyclic_group_algebra(2));
  out.push_back(make_matrix_algebra(2));
  out.push_back(make_dual_numbers(1));
  out.push_back(make_dual_numbers(-1));
  out.push_back(make_dg_square_zero());
  return out;
}

namespace {

// Random invertible matrix preserving the degree decomposition: unitriangular
// lower times unitriangular upper within each degree block, small entries.
SparseMatrix random_degree_preserving_change(const HomBasis& basis, std::mt19937& rng) {
  std::size_t n = basis.dim();
  std::uniform_int_distribution<int> entry(-2, 2);
  SparseMatrix lo = SparseMatrix::identity(n), up = SparseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (basis.degrees[i] != basis.degrees[j]) continue;
      lo.set(i, j, entry(rng));
      up.set(j, i, entry(rng));
    }
  return lo.multiply(up);
}

}  // namespace

void random_basis_change(ExampleCategory& ex, std::mt19937& rng) {
  InvolutiveCategory& c = ex.cat;
  std::size_t nb = c.brane_count();
  std::vector<std::vector<SparseMatrix>> u(nb, std::vector<SparseMatrix>(nb));
  std::vector<std::vector<SparseMatrix>> uinv(nb, std::vector<SparseMatrix>(nb));
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      u[a][b] = random_degree_preserving_change(c.homs[a][b], rng);
      uinv[a][b] = *inverse(u[a][b]);
    }
  InvolutiveCategory out = c;
  out.compose_table.clear();
  for (const auto& [key, table] : c.compose_table) {
    auto [a, b, cc] = key;
    std::vector<std::vector<SparseVector>> nt(c.dim(a, b),
                                              std::vector<SparseVector>(c.dim(b, cc)));
    for (std::size_t i = 0; i < c.dim(a, b); ++i)
      for (std::size_t j = 0; j < c.dim(b, cc); ++j) {
        SparseVector f = uinv[a][b].apply({{i, Rational(1)}});
        SparseVector g = uinv[b][cc].apply({{j, Rational(1)}});
        nt[i][j] = u[a][cc].apply(c.compose(a, b, cc, f, g));
      }
    out.compose_table[key] = std::move(nt);
  }
  for (std::size_t a = 0; a < nb; ++a) out.units[a] = u[a][a].apply(c.units[a]);
  out.diff.clear();
  for (const auto& [key, d] : c.diff) {
    auto [a, b] = key;
    out.diff[key] = u[a][b].multiply(d.multiply(uinv[a][b]));
  }
  out.star.clear();
  for (const auto& [key, s] : c.star) {
    auto [a, b] = key;
    out.star[key] = u[b][a].multiply(s.multiply(uinv[a][b]));
  }
  if (ex.cy) {
    // Tr'(v) = Tr(U^{-1} v): row vector times U^{-1}.
    for (std::size_t e = 0; e < nb; ++e) {
      SparseVector nt;
      for (std::size_t j = 0; j < c.dim(e, e); ++j) {
        Rational t = 0;
        for (const auto& [i, x] : ex.cy->trace[e]) t += x * uinv[e][e].get(i, j);
        if (t != 0) nt[j] = t;
      }
      ex.cy->trace[e] = std::move(nt);
    }
  }
  ex.cat = std::move(out);
}

ExampleCategory random_involutive_category(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 5);
  ExampleCategory ex;
  switch (pick(rng)) {
    case 0: ex = make_ground_field(); break;
    case 1: ex = make_cyclic_group_algebra(2); break;
    case 2: ex = make_cyclic_group_algebra(3); break;
    case 3: ex = make_matrix_algebra(2); break;
    case 4: ex = make_dual_numbers(1); break;
    default: ex = make_dg_square_zero(); break;
  }
  random_basis_change(ex, rng);
  return ex;
}

}  // namespace klein
