// Acceptance gate: one line per criterion, exit 0 only if all pass.
// Every check is exact rational arithmetic; no tolerances anywhere.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "diagram_oracle.hpp"
#include "klein/ainfinity.hpp"
#include "klein/examples.hpp"
#include "klein/graphs.hpp"
#include "klein/hochschild.hpp"
#include "klein/surface.hpp"

using namespace klein;

namespace {

std::ostringstream errs;
int checks_run = 0;

void expect(bool ok, const std::string& what) {
  ++checks_run;
  if (!ok) errs << "    " << what << "\n";
}

Report full_check(const ExampleCategory& ex) {
  Report r = check_dg_axioms(ex.cat);
  r.merge(check_involution_axioms(ex.cat));
  AInfinityCategory ai = from_dg(ex.cat);
  r.merge(check_ainfty_relations(ai));
  r.merge(check_involution_compatibility(ai));
  if (ex.cy) r.merge(check_calabi_yau(ai, *ex.cy));
  return r;
}

// ---- criterion 1: axiom suites and perturbation witnesses ----

void criterion_axiom_suites() {
  for (const auto& ex : bundled_examples()) {
    Report r = full_check(ex);
    expect(r.pass, ex.name + " unexpectedly fails: " +
                       (r.violations.empty() ? "" : r.violations[0].rule));
  }
  // Single-constant perturbations must each fail with a witness.
  auto expect_fails = [](ExampleCategory ex, const std::string& what) {
    Report r = full_check(ex);
    expect(!r.pass && !r.violations.empty(), what + " not caught with a witness");
  };
  for (const auto& base : bundled_examples()) {
    // A composition structure constant.
    {
      ExampleCategory ex = base;
      bool done = false;
      for (auto& [key, table] : ex.cat.compose_table) {
        for (auto& row : table)
          for (auto& cell : row)
            if (!cell.empty() && !done) {
              cell.begin()->second += 1;
              done = true;
            }
        if (done) break;
      }
      if (done) expect_fails(ex, base.name + ": perturbed composition constant");
    }
    // An involution matrix entry.
    {
      ExampleCategory ex = base;
      for (auto& [ab, m] : ex.cat.star)
        if (!m.is_zero()) {
          auto e = *m.entries().begin();
          m.set(e.first.first, e.first.second, e.second + 1);
          expect_fails(ex, base.name + ": perturbed involution entry");
          break;
        }
    }
    // A differential entry: a diagonal entry cannot lower the degree.
    {
      ExampleCategory ex = base;
      for (auto& [ab, m] : ex.cat.diff)
        if (!m.is_zero()) {
          m.set(0, 0, m.get(0, 0) + 1);
          expect_fails(ex, base.name + ": perturbed differential entry");
          break;
        }
    }
    // A trace coordinate: zeroing a nonzero one breaks non-degeneracy or
    // pairing symmetry.
    if (base.cy) {
      ExampleCategory ex = base;
      for (auto& row : ex.cy->trace)
        if (!row.empty()) {
          row.erase(row.begin());
          expect_fails(ex, base.name + ": perturbed trace coordinate");
          break;
        }
    }
  }
}

// ---- criterion 2: cyclic-word differential properties, fuzzed ----

void criterion_fuzzed_differential() {
  std::mt19937 rng(424242);
  for (int t = 0; t < 50; ++t) {
    ExampleCategory ex = random_involutive_category(rng);
    std::size_t max_dim = 0;
    for (const auto& row : ex.cat.homs)
      for (const auto& h : row) max_dim = std::max(max_dim, h.dim());
    std::size_t trunc = max_dim <= 2 ? 6 : 4;
    TruncatedComplex tc = build_ordinary(ex.cat, trunc);
    std::vector<SparseMatrix> iota;
    for (const auto& ws : tc.words) iota.push_back(chain_involution_matrix(ex.cat, ws));
    for (std::size_t k = 0; k < tc.ambient_differentials.size(); ++k) {
      const SparseMatrix& d = tc.ambient_differentials[k];
      if (k + 1 < tc.ambient_differentials.size())
        expect(d.multiply(tc.ambient_differentials[k + 1]).is_zero(),
               ex.name + ": d*d != 0 at degree " + std::to_string(k));
      expect(iota[k].multiply(d) == d.multiply(iota[k + 1]),
             ex.name + ": involution does not commute with d at degree " + std::to_string(k));
    }
  }
}

// ---- criterion 3: sparse homology vs the dense oracle ----

void criterion_dense_oracle() {
  for (const auto& ex : bundled_examples()) {
    std::size_t max_dim = 0;
    for (const auto& row : ex.cat.homs)
      for (const auto& h : row) max_dim = std::max(max_dim, h.dim());
    std::size_t trunc = max_dim <= 2 ? 5 : 3;
    struct Case {
      TruncatedComplex tc;
      dense_oracle::Variant v;
      const char* tag;
    };
    std::vector<Case> cases;
    cases.push_back({build_ordinary(ex.cat, trunc), dense_oracle::Variant::Ordinary, "ordinary"});
    cases.push_back(
        {build_involutive(ex.cat, trunc), dense_oracle::Variant::Involutive, "involutive"});
    cases.push_back({build_normalized_involutive(ex.cat, trunc),
                     dense_oracle::Variant::Normalized, "normalized"});
    for (const auto& c : cases)
      expect(homology_dims(c.tc.complex) == dense_oracle::homology_dims(ex.cat, c.tc.words, c.v),
             ex.name + " " + c.tag + ": sparse and dense homology dims differ");
  }
}

// ---- criterion 4: frozen regression value for the 2x2 matrix algebra ----

void criterion_matrix_regression() {
  ExampleCategory ex = make_matrix_algebra(2);
  TruncatedComplex tc = build_ordinary(ex.cat, 4);
  auto rows = homology(tc, 2);
  expect(rows.size() >= 3, "matrix algebra complex too short");
  if (rows.size() >= 3) {
    expect(rows[0].homology_dim == 1 && rows[0].reliable, "H0 != 1 in the reliable window");
    expect(rows[1].homology_dim == 0 && rows[1].reliable, "H1 != 0 in the reliable window");
    expect(rows[2].homology_dim == 0 && rows[2].reliable, "H2 != 0 in the reliable window");
  }
}

// ---- criterion 5: graph suite ----

void criterion_graphs() {
  auto annulus = thicken_type(loop_graph(0, 0));
  auto moebius = thicken_type(loop_graph(0, 1));
  expect(annulus == TopologicalType{0, 0, 2}, "annulus loop type != (0,0,2)");
  expect(moebius == TopologicalType{0, 1, 1}, "crosscap loop type != (0,1,1)");

  std::mt19937 rng(777);
  int commuted = 0, confluent = 0;
  for (int t = 0; t < 200; ++t) {
    MobiusGraph g = random_mobius_graph(rng, 12);
    // Colour-gauge invariance of the thickened type.
    MobiusGraph flipped = g;
    vertex_flip(flipped, t % g.vertex_count());
    expect(thicken_type(g) == thicken_type(flipped), "vertex flip changed the thickened type");
    expect(is_isomorphic(g, flipped), "vertex flip broke isomorphism");
    // Contraction commutativity on two distinct non-loop edges.
    std::vector<std::size_t> cand;
    for (std::size_t h = 0; h < g.half_edge_count(); ++h)
      if (h < g.iota[h] && g.vertex[h] != g.vertex[g.iota[h]]) cand.push_back(h);
    auto shift = [](std::size_t h, std::size_t a, std::size_t b) {
      return h - (h > a ? 1 : 0) - (h > b ? 1 : 0);
    };
    if (cand.size() >= 2) {
      std::size_t e1 = cand[0], e2 = cand[1];
      MobiusGraph g1 = contract_edge(g, e1);
      std::size_t e2s = shift(e2, e1, g.iota[e1]);
      MobiusGraph g2 = contract_edge(g, e2);
      std::size_t e1s = shift(e1, e2, g.iota[e2]);
      if (g1.vertex[e2s] != g1.vertex[g1.iota[e2s]] && g2.vertex[e1s] != g2.vertex[g2.iota[e1s]]) {
        expect(is_isomorphic(contract_edge(g1, e2s), contract_edge(g2, e1s)),
               "edge contractions do not commute");
        ++commuted;
      }
    }
    // Reduce-confluence: contracting one bivalent vertex by hand first must
    // not change the fully reduced graph up to isomorphism.
    try {
      MobiusGraph r = reduce(g);
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (g.valence(v) != 2) continue;
        std::size_t h = g.cyclic[v][0];
        if (g.vertex[h] == g.vertex[g.iota[h]]) h = g.cyclic[v][1];
        if (g.vertex[h] == g.vertex[g.iota[h]]) continue;
        expect(is_isomorphic(reduce(contract_edge(g, h)), r),
               "reduction is not confluent after a manual contraction");
        ++confluent;
        break;
      }
    } catch (const std::runtime_error&) {
      // Irreducible (e.g. pure bivalent cycle): outside this property.
    }
  }
  expect(commuted >= 50, "too few commuting-contraction instances exercised");
  expect(confluent >= 50, "too few reduce-confluence instances exercised");
}

// ---- criterion 6: moduli emptiness table ----

void criterion_moduli() {
  const std::vector<std::array<long, 4>> empty = {
      {0, 0, 1, 0}, {0, 0, 1, 1}, {0, 0, 1, 2}, {0, 0, 2, 0}, {0, 1, 1, 0}};
  for (long g = 0; g <= 3; ++g)
    for (long u = 0; u <= 2; ++u)
      for (long h = 0; h <= 3; ++h)
        for (long n = 0; n <= 3; ++n) {
          bool expected = true;
          for (const auto& e : empty)
            if (e == std::array<long, 4>{g, u, h, n}) expected = false;
          expect(is_moduli_nonempty(g, u, h, n) == expected,
                 "moduli predicate wrong at (" + std::to_string(g) + "," + std::to_string(u) + "," +
                     std::to_string(h) + "," + std::to_string(n) + ")");
        }
}

// ---- criterion 7: rewrite rules are sound under evaluation ----

void rule_soundness(const ExampleCategory& ex) {
  AInfinityCategory c = from_dg(ex.cat);
  const CalabiYauData& cy = *ex.cy;
  auto pts = [](std::vector<OpenPoint> v) { return ObjectLabel{std::move(v), 0}; };
  for (Brane a = 0; a < c.brane_count(); ++a) {
    for (Brane b = 0; b < c.brane_count(); ++b) {
      if (c.dim(a, b) == 0 || c.dim(b, a) == 0) continue;
      SparseMatrix id = SparseMatrix::identity(c.dim(a, b));
      MorphismWord tw = compose(word_of(twisted_disc(a, b)), word_of(twisted_disc(b, a)));
      expect(evaluate(tw, c, cy) == id, ex.name + ": twisted-disc square != Id");
      ObjectLabel p = pts({{a, b}});
      MorphismWord s1 = compose(tensor(word_of(identity_gen(p)), word_of(disc_out2(b, a))),
                                tensor(word_of(disc_in2(a, b)), word_of(identity_gen(p))));
      expect(evaluate(s1, c, cy) == id, ex.name + ": zig-zag != Id");
      MorphismWord u3 = compose(tensor(word_of(disc_plus({a})), word_of(identity_gen(p))),
                                word_of(disc_plus({a, a, b})));
      expect(evaluate(u3, c, cy) == id, ex.name + ": unit into 3-point disc != Id");
      MorphismWord u4 =
          compose(tensor(tensor(word_of(identity_gen(p)), word_of(disc_plus({b}))),
                         word_of(identity_gen(pts({{b, a}})))),
                  word_of(disc_plus({a, b, b, a})));
      expect(evaluate(u4, c, cy).is_zero(), ex.name + ": unit into 4-point disc != 0");
      MorphismWord lhs =
          compose(compose(tensor(word_of(twisted_disc(a, b)), word_of(twisted_disc(b, a))),
                          word_of(permute_gen(pts({{b, a}, {a, b}}), {1, 0}))),
                  word_of(disc_plus({a, b, a})));
      MorphismWord rhs = compose(word_of(disc_plus({a, b, a})), word_of(twisted_disc(a, a)));
      expect(evaluate(lhs, c, cy) == evaluate(rhs, c, cy),
             ex.name + ": involution-compatibility relation unequal");
      expect(evaluate(lhs, c, cy) == evaluate(normalize(lhs), c, cy),
             ex.name + ": rewriter changed the evaluation of the relation");
      MorphismWord cyc = word_of(disc_all_in({b, a, a}));
      bool defined = c.dim(b, a) && c.dim(a, a) && c.dim(a, b);
      if (defined)
        expect(evaluate(cyc, c, cy) == evaluate(normalize(cyc), c, cy),
               ex.name + ": cyclic normal form changed the evaluation");
    }
  }
}

void criterion_rule_soundness() {
  std::mt19937 rng(271828);
  int tested = 0;
  while (tested < 20) {
    ExampleCategory ex = random_involutive_category(rng);
    if (!ex.cy) continue;
    if (!full_check(ex).pass) continue;
    rule_soundness(ex);
    ++tested;
  }
}

// ---- criterion 8: closed-state complex equals the normalized complex ----

void criterion_closed_state() {
  for (const auto& ex : bundled_examples()) {
    for (std::size_t trunc = 1; trunc <= 4; ++trunc) {
      TruncatedComplex cs = closed_state_complex(ex.cat, trunc);
      TruncatedComplex hh = build_normalized_involutive(ex.cat, trunc);
      expect(cs.complex.dims == hh.complex.dims,
             ex.name + " trunc " + std::to_string(trunc) + ": dimension mismatch");
      expect(cs.complex.differentials == hh.complex.differentials,
             ex.name + " trunc " + std::to_string(trunc) + ": differential mismatch");
    }
  }
}

// ---- criterion 9: surface differential squares to zero symbolically ----

void criterion_surface_differential() {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<Brane> lab(n);
      for (std::size_t i = 0; i < n; ++i) lab[i] = rep ? (i % 2) : i;
      std::string tag = " (n=" + std::to_string(n) + ", rep=" + std::to_string(rep) + ")";
      expect(testing::canonical_coords(differential(differential(word_of(disc_plus(lab)))))
                 .empty(),
             "d^2 != 0 on the one-outgoing disc" + tag);
      if (n >= 3)
        expect(testing::canonical_coords(differential(differential(word_of(disc_all_in(lab)))))
                   .empty(),
               "d^2 != 0 on the all-incoming disc" + tag);
      expect(testing::canonical_coords(differential(differential(word_of(annulus_gen(lab)))))
                 .empty(),
             "d^2 != 0 on the annulus" + tag);
    }
  }
}

bool run(int num, const std::string& name, double budget_seconds,
         const std::function<void()>& body) {
  errs.str("");
  checks_run = 0;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    errs << "    exception: " << e.what() << "\n";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0 && secs > budget_seconds)
    errs << "    runtime " << secs << "s exceeds budget " << budget_seconds << "s\n";
  bool ok = errs.str().empty();
  std::printf("criterion %d [%s]: %s (%d checks, %.2fs)\n", num, name.c_str(),
              ok ? "pass" : "FAIL", checks_run, secs);
  if (!ok) std::fputs(errs.str().c_str(), stdout);
  return ok;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run(1, "axiom suites and perturbation witnesses", 5, criterion_axiom_suites);
  ok &= run(2, "fuzzed cyclic-word differential properties", 60, criterion_fuzzed_differential);
  ok &= run(3, "sparse homology vs dense oracle", 0, criterion_dense_oracle);
  ok &= run(4, "matrix-algebra homology regression", 0, criterion_matrix_regression);
  ok &= run(5, "graph suite", 30, criterion_graphs);
  ok &= run(6, "moduli emptiness table", 0, criterion_moduli);
  ok &= run(7, "rewrite-rule soundness under evaluation", 60, criterion_rule_soundness);
  ok &= run(8, "closed-state vs normalized cyclic-word complex", 30, criterion_closed_state);
  ok &= run(9, "surface differential squares to zero", 0, criterion_surface_differential);
  return ok ? 0 : 1;
}
