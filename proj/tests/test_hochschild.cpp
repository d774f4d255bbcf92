#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dense_oracle.hpp"
#include "klein/examples.hpp"
#include "klein/hochschild.hpp"

using namespace klein;

namespace {

std::vector<std::size_t> sparse_h(const TruncatedComplex& tc) { return homology_dims(tc.complex); }

}  // namespace

TEST_CASE("all three complexes build with d² = 0 for bundled examples") {
  for (auto& ex : bundled_examples()) {
    CAPTURE(ex.name);
    CHECK_NOTHROW(build_ordinary(ex.cat, 4));
    CHECK_NOTHROW(build_involutive(ex.cat, 4));
    CHECK_NOTHROW(build_normalized_involutive(ex.cat, 4));
  }
}

TEST_CASE("chain involution squares to one and commutes with d") {
  for (auto& ex : bundled_examples()) {
    CAPTURE(ex.name);
    TruncatedComplex tc = build_ordinary(ex.cat, 4);
    std::vector<SparseMatrix> iotas;
    for (auto& ws : tc.words) iotas.push_back(chain_involution_matrix(ex.cat, ws));
    for (std::size_t k = 0; k < iotas.size(); ++k)
      CHECK(iotas[k].multiply(iotas[k]) == SparseMatrix::identity(tc.words[k].size()));
    for (std::size_t k = 0; k + 1 < iotas.size(); ++k) {
      SparseMatrix lhs = iotas[k].multiply(tc.ambient_differentials[k]);
      SparseMatrix rhs = tc.ambient_differentials[k].multiply(iotas[k + 1]);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("quotient maps are chain maps") {
  for (auto& ex : bundled_examples()) {
    CAPTURE(ex.name);
    for (auto tc : {build_involutive(ex.cat, 4), build_normalized_involutive(ex.cat, 4)}) {
      for (std::size_t k = 0; k + 1 < tc.words.size(); ++k) {
        SparseMatrix lhs = tc.quotients[k].projection.multiply(tc.ambient_differentials[k]);
        SparseMatrix rhs = tc.complex.differentials[k].multiply(tc.quotients[k + 1].projection);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("ground field homology") {
  auto ex = make_ground_field();
  TruncatedComplex tc = build_ordinary(ex.cat, 6);
  auto h = sparse_h(tc);
  CHECK(h[0] == 1);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(h[k] == 0);
  // Normalized: all higher chain groups vanish.
  TruncatedComplex nm = build_normalized_involutive(ex.cat, 6);
  CHECK(nm.complex.dims[0] == 1);
  for (std::size_t k = 1; k < nm.complex.dims.size(); ++k) CHECK(nm.complex.dims[k] == 0);
}

TEST_CASE("matrix algebra ordinary homology at trunc 4") {
  auto ex = make_matrix_algebra(2);
  auto h = sparse_h(build_ordinary(ex.cat, 4));
  CHECK(h[0] == 1);
  CHECK(h[1] == 0);
  CHECK(h[2] == 0);
}

TEST_CASE("length-1 quotients reflect the involution") {
  // Trivial involution: nothing identified in degree 0.
  auto z2 = make_cyclic_group_algebra(2);
  TruncatedComplex tc = build_involutive(z2.cat, 1);
  CHECK(tc.complex.dims[0] == 2);
  // ⋆(x) = -x: the class of x dies.
  auto dm = make_dual_numbers(-1);
  TruncatedComplex td = build_involutive(dm.cat, 1);
  CHECK(td.complex.dims[0] == 1);
}

TEST_CASE("normalized quotient kills unit insertions in tail slots") {
  auto z2 = make_cyclic_group_algebra(2);
  TruncatedComplex tc = build_normalized_involutive(z2.cat, 3);
  // Word (σ, 1) has chain degree 1; its class must vanish.
  CyclicWord w;
  w.objects = {0, 0};
  w.basis = {1, 0};
  std::size_t at = tc.words[1].size();
  for (std::size_t i = 0; i < tc.words[1].size(); ++i)
    if (tc.words[1][i] == w) at = i;
  REQUIRE(at < tc.words[1].size());
  CHECK(tc.quotients[1].projection.apply({{at, Rational(1)}}).empty());
}

TEST_CASE("homology rows carry the reliability window") {
  auto ex = make_ground_field();
  TruncatedComplex tc = build_ordinary(ex.cat, 4);
  auto rows = homology(tc, 2);
  REQUIRE(rows.size() >= 4);
  CHECK(rows[0].reliable);
  CHECK(rows[2].reliable);
  CHECK(!rows[3].reliable);
  CHECK(rows[0].homology_dim == 1);
}

TEST_CASE("sparse homology equals the dense oracle on bundled examples") {
  for (auto& ex : bundled_examples()) {
    CAPTURE(ex.name);
    std::size_t trunc = 4;
    TruncatedComplex ord = build_ordinary(ex.cat, trunc);
    CHECK(sparse_h(ord) ==
          dense_oracle::homology_dims(ex.cat, ord.words, dense_oracle::Variant::Ordinary));
    TruncatedComplex inv = build_involutive(ex.cat, trunc);
    CHECK(sparse_h(inv) ==
          dense_oracle::homology_dims(ex.cat, inv.words, dense_oracle::Variant::Involutive));
    TruncatedComplex nrm = build_normalized_involutive(ex.cat, trunc);
    CHECK(sparse_h(nrm) ==
          dense_oracle::homology_dims(ex.cat, nrm.words, dense_oracle::Variant::Normalized));
  }
}

TEST_CASE("fuzzed algebras: d² = 0 and involution commutes, all variants") {
  std::mt19937 rng(31337);
  for (int t = 0; t < 10; ++t) {
    auto ex = random_involutive_category(rng);
    CAPTURE(ex.name);
    TruncatedComplex ord = build_ordinary(ex.cat, 4);
    for (std::size_t k = 0; k + 1 < ord.words.size(); ++k) {
      SparseMatrix i0 = chain_involution_matrix(ex.cat, ord.words[k]);
      SparseMatrix i1 = chain_involution_matrix(ex.cat, ord.words[k + 1]);
      CHECK(i0.multiply(ord.ambient_differentials[k]) ==
            ord.ambient_differentials[k].multiply(i1));
    }
    CHECK_NOTHROW(build_involutive(ex.cat, 4));
    CHECK_NOTHROW(build_normalized_involutive(ex.cat, 4));
  }
}
