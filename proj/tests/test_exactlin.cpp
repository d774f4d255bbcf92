#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klein/complex.hpp"
#include "klein/sparse_matrix.hpp"

using namespace klein;

TEST_CASE("rational parsing") {
  CHECK(rational_from_string("3/4") == Rational(3, 4));
  CHECK(rational_from_string("-2") == Rational(-2));
  CHECK(rational_from_string("6/4") == Rational(3, 2));
  CHECK(rational_to_string(Rational(3, 2)) == "3/2");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string("abc"), std::invalid_argument);
}

TEST_CASE("rank of simple matrices") {
  SparseMatrix id = SparseMatrix::identity(3);
  CHECK(rank(id) == 3);
  SparseMatrix zero(4, 5);
  CHECK(rank(zero) == 0);
  SparseMatrix m(2, 2);  // [[1,2],[2,4]] has rank 1
  m.set(0, 0, 1);
  m.set(0, 1, 2);
  m.set(1, 0, 2);
  m.set(1, 1, 4);
  CHECK(rank(m) == 1);
}

TEST_CASE("kernel basis") {
  SparseMatrix m(1, 2);  // [1 1], kernel spanned by (1,-1)
  m.set(0, 0, 1);
  m.set(0, 1, 1);
  auto ker = kernel_basis(m);
  REQUIRE(ker.size() == 1);
  // Membership check: m * v == 0 and v != 0.
  CHECK(m.apply(ker[0]).empty());
  CHECK(!ker[0].empty());

  SparseMatrix inj = SparseMatrix::identity(3);
  CHECK(kernel_basis(inj).empty());

  SparseMatrix zero(3, 2);
  CHECK(kernel_basis(zero).size() == 2);
}

TEST_CASE("matrix multiply and apply agree") {
  SparseMatrix a(2, 3), b(3, 2);
  a.set(0, 0, Rational(1, 2));
  a.set(0, 2, 3);
  a.set(1, 1, -1);
  b.set(0, 0, 2);
  b.set(1, 0, 1);
  b.set(2, 1, Rational(1, 3));
  SparseMatrix ab = a.multiply(b);
  CHECK(ab.get(0, 0) == Rational(1));
  CHECK(ab.get(0, 1) == Rational(1));
  CHECK(ab.get(1, 0) == Rational(-1));
  CHECK(ab.get(1, 1) == Rational(0));
  SparseVector v{{0, Rational(1)}, {1, Rational(2)}};
  SparseVector bv = b.apply(v);
  SparseVector abv = a.apply(bv);
  SparseVector direct = ab.apply(v);
  CHECK(abv == direct);
}

TEST_CASE("quotient presentation") {
  // Q^3 modulo e0 - e1: quotient dim 2, projection sends e0 and e1 to the
  // same class, and projection * section = identity.
  std::vector<SparseVector> rels{{{0, Rational(1)}, {1, Rational(-1)}}};
  auto q = quotient_presentation(3, rels);
  CHECK(q.dim == 2);
  SparseVector e0{{0, Rational(1)}}, e1{{1, Rational(1)}};
  CHECK(q.projection.apply(e0) == q.projection.apply(e1));
  CHECK(q.projection.multiply(q.section) == SparseMatrix::identity(2));

  auto qz = quotient_presentation(2, {});
  CHECK(qz.dim == 2);

  std::vector<SparseVector> full{{{0, Rational(1)}}, {{1, Rational(1)}}};
  CHECK(quotient_presentation(2, full).dim == 0);
}

TEST_CASE("complex verification and homology") {
  // Zero differentials: homology = dims.
  FiniteComplex c;
  c.min_degree = 0;
  c.dims = {2, 3};
  c.differentials = {SparseMatrix(2, 3)};
  CHECK(!verify_complex(c).has_value());
  CHECK(homology_dims(c) == std::vector<std::size_t>{2, 3});

  // Acyclic: 0 -> Q -> Q -> 0 with d = id.
  FiniteComplex acyc;
  acyc.dims = {1, 1};
  acyc.differentials = {SparseMatrix::identity(1)};
  CHECK(homology_dims(acyc) == std::vector<std::size_t>{0, 0});

  // d*d != 0 is rejected.
  FiniteComplex bad;
  bad.dims = {1, 1, 1};
  bad.differentials = {SparseMatrix::identity(1), SparseMatrix::identity(1)};
  auto err = verify_complex(bad);
  REQUIRE(err.has_value());
  CHECK(err->find("d*d") != std::string::npos);

  // Shape mismatch is rejected.
  FiniteComplex shapes;
  shapes.dims = {2, 3};
  shapes.differentials = {SparseMatrix(2, 2)};
  CHECK(verify_complex(shapes).has_value());
}

TEST_CASE("homology of a length-3 complex") {
  // 0 -> Q -> Q^2 -> Q -> 0 with d1 = [1 1], d2 = (1,-1)^T: exact in middle,
  // H = (0, 0, 0) except H0 = 0 since d1 surjective, H2 = 0 since d2 injective.
  FiniteComplex c;
  c.dims = {1, 2, 1};
  SparseMatrix d1(1, 2), d2(2, 1);
  d1.set(0, 0, 1);
  d1.set(0, 1, 1);
  d2.set(0, 0, 1);
  d2.set(1, 0, -1);
  c.differentials = {d1, d2};
  CHECK(!verify_complex(c).has_value());
  CHECK(homology_dims(c) == std::vector<std::size_t>{0, 0, 0});
}
