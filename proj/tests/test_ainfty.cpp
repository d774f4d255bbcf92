#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klein/ainfinity.hpp"
#include "klein/examples.hpp"

using namespace klein;

TEST_CASE("from_dg of bundled examples passes the quadratic relations") {
  for (auto& ex : bundled_examples()) {
    CAPTURE(ex.name);
    AInfinityCategory a = from_dg(ex.cat);
    Report r = check_ainfty_relations(a);
    for (auto& v : r.violations) { CAPTURE(v.rule); CAPTURE(v.detail); }
    CHECK(r.pass);
    Report ic = check_involution_compatibility(a);
    for (auto& v : ic.violations) { CAPTURE(v.rule); CAPTURE(v.detail); }
    CHECK(ic.pass);
  }
}

TEST_CASE("zero products pass trivially") {
  AInfinityCategory a;
  a.branes = {"a"};
  a.homs = {{HomBasis{{"e"}, {0}}}};
  a.units = {{{0, Rational(1)}}};
  a.n_max = 3;
  CHECK(check_ainfty_relations(a).pass);
}

TEST_CASE("perturbed m2 fails at n=3") {
  auto ex = make_matrix_algebra(2);
  AInfinityCategory a = from_dg(ex.cat);
  std::vector<std::size_t> objs{0, 0, 0};
  a.products[2][objs][{1, 2}][0] += 1;  // perturb m2(E12 ⊗ E21)
  Report r = check_ainfty_relations(a);
  CHECK(!r.pass);
  bool at3 = false;
  for (auto& v : r.violations)
    if (v.detail.find("n=3") != std::string::npos) at3 = true;
  CHECK(at3);
}

TEST_CASE("star = identity on matrix algebra fails involution compatibility") {
  auto ex = make_matrix_algebra(2);
  AInfinityCategory a = from_dg(ex.cat);
  a.star[{0, 0}] = SparseMatrix::identity(4);
  CHECK(!check_involution_compatibility(a).pass);
}

TEST_CASE("Calabi-Yau data of bundled examples verifies") {
  for (auto& ex : bundled_examples()) {
    if (!ex.cy) continue;
    CAPTURE(ex.name);
    AInfinityCategory a = from_dg(ex.cat);
    Report r = check_calabi_yau(a, *ex.cy);
    for (auto& v : r.violations) { CAPTURE(v.rule); CAPTURE(v.detail); }
    CHECK(r.pass);
  }
}

TEST_CASE("group algebra pairing matrix is the identity in the group basis") {
  auto ex = make_cyclic_group_algebra(2);
  AInfinityCategory a = from_dg(ex.cat);
  // ⟨1,1⟩ = 1, ⟨1,σ⟩ = 0, ⟨σ,σ⟩ = Tr(σ²) = 1.
  auto pair = [&](std::size_t i, std::size_t j) {
    SparseVector p = a.product_basis(2, {0, 0, 0}, {i, j});
    Rational t = 0;
    for (auto& [k, x] : p)
      if (k == 0) t += x;
    return t;
  };
  CHECK(pair(0, 0) == 1);
  CHECK(pair(0, 1) == 0);
  CHECK(pair(1, 0) == 0);
  CHECK(pair(1, 1) == 1);
}

TEST_CASE("zero trace fails nondegeneracy") {
  auto ex = make_cyclic_group_algebra(2);
  AInfinityCategory a = from_dg(ex.cat);
  CalabiYauData cy;
  cy.trace = {SparseVector{}};
  Report r = check_calabi_yau(a, cy);
  CHECK(!r.pass);
  bool degen = false;
  for (auto& v : r.violations)
    if (v.rule == "DegeneratePairing") degen = true;
  CHECK(degen);
}

TEST_CASE("fuzzed categories keep CY structure under basis change") {
  std::mt19937 rng(777);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto ex = random_involutive_category(rng);
    CAPTURE(ex.name);
    AInfinityCategory a = from_dg(ex.cat);
    CHECK(check_ainfty_relations(a).pass);
    CHECK(check_involution_compatibility(a).pass);
    if (ex.cy) {
      Report r = check_calabi_yau(a, *ex.cy);
      for (auto& v : r.violations) { CAPTURE(v.rule); CAPTURE(v.detail); }
      CHECK(r.pass);
      ++checked;
    }
  }
  CHECK(checked > 0);
}
