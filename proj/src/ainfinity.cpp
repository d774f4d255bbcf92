#include "klein/ainfinity.hpp"

#include <functional>
#include <sstream>

namespace klein {

namespace {

std::string vec_to_string(const SparseVector& v) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) os << " + ";
    os << rational_to_string(c) << "*e" << i;
    first = false;
  }
  return os.str();
}

std::string word_to_string(const AInfinityCategory& c, const std::vector<std::size_t>& objs,
                           const std::vector<std::size_t>& word) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) os << ", ";
    os << c.homs[objs[k]][objs[k + 1]].names[word[k]];
  }
  os << ")";
  return os.str();
}

// All object sequences c_0..c_n with every Hom(c_{k-1},c_k) nonzero.
void enumerate_object_sequences(const AInfinityCategory& c, std::size_t n,
                                const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> objs;
  std::function<void()> rec = [&] {
    if (objs.size() == n + 1) {
      fn(objs);
      return;
    }
    for (std::size_t b = 0; b < c.brane_count(); ++b) {
      if (!objs.empty() && c.dim(objs.back(), b) == 0) continue;
      objs.push_back(b);
      rec();
      objs.pop_back();
    }
  };
  rec();
}

// All basis index words along a fixed object sequence.
void enumerate_words(const AInfinityCategory& c, const std::vector<std::size_t>& objs,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::size_t n = objs.size() - 1;
  std::vector<std::size_t> word(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      fn(word);
      return;
    }
    for (std::size_t i = 0; i < c.dim(objs[k], objs[k + 1]); ++i) {
      word[k] = i;
      rec(k + 1);
    }
  };
  rec(0);
}

int word_degree(const AInfinityCategory& c, const std::vector<std::size_t>& objs,
                const std::vector<std::size_t>& word, std::size_t from, std::size_t to) {
  int d = 0;
  for (std::size_t k = from; k < to; ++k) d += c.degree_of(objs[k], objs[k + 1], word[k]);
  return d;
}

// Multilinear extension of m_n to arguments given as coordinate vectors.
SparseVector apply_product_multi(const AInfinityCategory& c, std::size_t n,
                                 const std::vector<std::size_t>& objs,
                                 const std::vector<SparseVector>& args) {
  SparseVector out;
  std::vector<std::size_t> word(n);
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t k, const Rational& coef) {
    if (k == n) {
      add_scaled(out, c.product_basis(n, objs, word), coef);
      return;
    }
    for (const auto& [i, x] : args[k]) {
      word[k] = i;
      rec(k + 1, coef * x);
    }
  };
  rec(0, Rational(1));
  return out;
}

}  // namespace

SparseVector AInfinityCategory::product_basis(std::size_t n, const std::vector<std::size_t>& objs,
                                              const std::vector<std::size_t>& word) const {
  auto nit = products.find(n);
  if (nit == products.end()) return {};
  auto oit = nit->second.find(objs);
  if (oit == nit->second.end()) return {};
  auto wit = oit->second.find(word);
  if (wit == oit->second.end()) return {};
  return wit->second;
}

SparseVector AInfinityCategory::apply_star_vec(std::size_t a, std::size_t b,
                                               const SparseVector& f) const {
  auto it = star.find({a, b});
  if (it == star.end()) return {};
  return it->second.apply(f);
}

Report check_ainfty_relations(const AInfinityCategory& c) {
  Report r;
  for (std::size_t n = 1; n <= c.n_max + 1; ++n) {
    enumerate_object_sequences(c, n, [&](const std::vector<std::size_t>& objs) {
      enumerate_words(c, objs, [&](const std::vector<std::size_t>& word) {
        // Residual of the quadratic relation at (objs, word).
        SparseVector residual;
        for (std::size_t j = 1; j <= n; ++j) {
          for (std::size_t i = 0; i + j <= n; ++i) {
            std::size_t l = n - i - j;
            // sign (-1)^{i+jl}, then the Koszul sign of moving m_j (degree
            // j-2) past the arguments in slots i+j+1..n.
            int exponent = static_cast<int>(i + j * l) +
                           static_cast<int>(j) *
                               word_degree(c, objs, word, i + j, n);
            Rational sign = (exponent % 2 == 0) ? 1 : -1;
            std::vector<std::size_t> inner_objs(objs.begin() + i, objs.begin() + i + j + 1);
            std::vector<std::size_t> inner_word(word.begin() + i, word.begin() + i + j);
            SparseVector inner = c.product_basis(j, inner_objs, inner_word);
            if (inner.empty()) continue;
            std::vector<std::size_t> outer_objs;
            outer_objs.insert(outer_objs.end(), objs.begin(), objs.begin() + i + 1);
            outer_objs.insert(outer_objs.end(), objs.begin() + i + j, objs.end());
            for (const auto& [k, x] : inner) {
              std::vector<std::size_t> outer_word;
              outer_word.insert(outer_word.end(), word.begin(), word.begin() + i);
              outer_word.push_back(k);
              outer_word.insert(outer_word.end(), word.begin() + i + j, word.end());
              add_scaled(residual, c.product_basis(i + 1 + l, outer_objs, outer_word), sign * x);
            }
          }
        }
        if (!residual.empty())
          r.fail("AInftyRelation", "n=" + std::to_string(n) + " word " +
                                       word_to_string(c, objs, word) + " residual " +
                                       vec_to_string(residual));
      });
    });
  }
  return r;
}

Report check_involution_compatibility(const AInfinityCategory& c) {
  Report r;
  for (const auto& [n, by_objs] : c.products) {
    (void)by_objs;
    enumerate_object_sequences(c, n, [&](const std::vector<std::size_t>& objs) {
      enumerate_words(c, objs, [&](const std::vector<std::size_t>& word) {
        SparseVector mn = c.product_basis(n, objs, word);
        SparseVector lhs = c.apply_star_vec(objs.front(), objs.back(), mn);
        // Koszul sign of fully reversing the word.
        int exponent = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            exponent += c.degree_of(objs[i], objs[i + 1], word[i]) *
                        c.degree_of(objs[j], objs[j + 1], word[j]);
        Rational sign = (exponent % 2 == 0) ? 1 : -1;
        std::vector<std::size_t> rev_objs(objs.rbegin(), objs.rend());
        std::vector<SparseVector> args;
        for (std::size_t k = n; k-- > 0;)
          args.push_back(c.apply_star_vec(objs[k], objs[k + 1], {{word[k], Rational(1)}}));
        SparseVector rhs = apply_product_multi(c, n, rev_objs, args);
        for (auto& [i, x] : rhs) x *= sign;
        if (lhs != rhs)
          r.fail("StarProductCompat", "n=" + std::to_string(n) + " word " +
                                          word_to_string(c, objs, word) + ": ⋆m = " +
                                          vec_to_string(lhs) + " but reversed = " +
                                          vec_to_string(rhs));
      });
    });
  }
  return r;
}

namespace {

// Basis of homology of (V, d) as representative vectors: kernel vectors
// independent modulo the image of d.
std::vector<SparseVector> homology_representatives(const SparseMatrix& d) {
  std::vector<SparseVector> image;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    SparseVector col;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      Rational v = d.get(i, j);
      if (v != 0) col[i] = v;
    }
    if (!col.empty()) image.push_back(std::move(col));
  }
  // Echelonize image.
  std::vector<SparseVector> ech;
  auto reduce = [&](SparseVector& v) {
    for (const auto& p : ech) {
      auto it = v.find(p.begin()->first);
      if (it != v.end()) add_scaled(v, p, -it->second);
    }
  };
  auto insert = [&](SparseVector v) -> bool {
    reduce(v);
    if (v.empty()) return false;
    Rational inv = Rational(1) / v.begin()->second;
    for (auto& [i, x] : v) x *= inv;
    ech.push_back(std::move(v));
    return true;
  };
  for (auto& v : image) insert(std::move(v));
  std::vector<SparseVector> reps;
  for (auto& k : kernel_basis(d)) {
    SparseVector probe = k;
    if (insert(probe)) reps.push_back(std::move(k));
  }
  return reps;
}

Rational trace_of(const CalabiYauData& cy, std::size_t e, const SparseVector& v) {
  Rational t = 0;
  for (const auto& [i, x] : v) {
    auto it = cy.trace[e].find(i);
    if (it != cy.trace[e].end()) t += it->second * x;
  }
  return t;
}

}  // namespace

Report check_calabi_yau(const AInfinityCategory& c, const CalabiYauData& cy) {
  Report r;
  std::size_t nb = c.brane_count();
  if (cy.trace.size() != nb) {
    r.fail("ShapeMismatch", "trace table size != brane count");
    return r;
  }
  // m_1 as a matrix per hom space.
  auto m1_matrix = [&](std::size_t a, std::size_t b) {
    SparseMatrix d(c.dim(a, b), c.dim(a, b));
    for (std::size_t i = 0; i < c.dim(a, b); ++i) {
      SparseVector out = c.product_basis(1, {a, b}, {i});
      for (const auto& [k, x] : out) d.add(k, i, x);
    }
    return d;
  };
  auto pair_vec = [&](std::size_t a, std::size_t b, const SparseVector& f,
                      const SparseVector& g) {
    // ⟨f,g⟩ = Tr(g ∘ f) = Tr(m_2(f ⊗ g)) in Hom(a,a).
    return trace_of(cy, a, apply_product_multi(c, 2, {a, b, a}, {f, g}));
  };

  // (a) Tr(f⋆) = Tr(f); and Tr vanishes on boundaries so the pairing descends.
  for (std::size_t e = 0; e < nb; ++e) {
    for (std::size_t i = 0; i < c.dim(e, e); ++i) {
      SparseVector f{{i, Rational(1)}};
      Rational lhs = trace_of(cy, e, c.apply_star_vec(e, e, f));
      Rational rhs = trace_of(cy, e, f);
      if (lhs != rhs)
        r.fail("TraceStar", "Tr(⋆" + c.homs[e][e].names[i] + ") = " + rational_to_string(lhs) +
                                " != " + rational_to_string(rhs));
      Rational td = trace_of(cy, e, c.product_basis(1, {e, e}, {i}));
      if (td != 0)
        r.fail("TraceClosed", "Tr(d " + c.homs[e][e].names[i] + ") = " + rational_to_string(td));
    }
  }

  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < c.dim(a, b); ++i)
        for (std::size_t j = 0; j < c.dim(b, a); ++j) {
          SparseVector f{{i, Rational(1)}}, g{{j, Rational(1)}};
          Rational fg = pair_vec(a, b, f, g);
          Rational gf = pair_vec(b, a, g, f);
          int exponent = c.degree_of(a, b, i) * c.degree_of(b, a, j);
          Rational sign = (exponent % 2 == 0) ? 1 : -1;
          // (b) graded symmetry.
          if (fg != sign * gf)
            r.fail("PairingSymmetry",
                   "⟨" + c.homs[a][b].names[i] + "," + c.homs[b][a].names[j] + "⟩ = " +
                       rational_to_string(fg) + " vs ±⟨g,f⟩ = " +
                       rational_to_string(sign * gf));
          // (d) star compatibility ⟨f,g⟩ = ⟨g⋆,f⋆⟩.
          SparseVector gs = c.apply_star_vec(b, a, g);
          SparseVector fs = c.apply_star_vec(a, b, f);
          Rational tw = trace_of(cy, a, apply_product_multi(c, 2, {a, b, a}, {gs, fs}));
          if (fg != tw)
            r.fail("PairingStar", "⟨" + c.homs[a][b].names[i] + "," + c.homs[b][a].names[j] +
                                      "⟩ = " + rational_to_string(fg) + " but ⟨g⋆,f⋆⟩ = " +
                                      rational_to_string(tw));
        }
      // (c) non-degeneracy on homology.
      if (a <= b) {
        auto reps_ab = homology_representatives(m1_matrix(a, b));
        auto reps_ba = homology_representatives(m1_matrix(b, a));
        if (reps_ab.size() != reps_ba.size()) {
          r.fail("DegeneratePairing",
                 "homology dims differ for Hom(" + c.branes[a] + "," + c.branes[b] + ") pair: " +
                     std::to_string(reps_ab.size()) + " vs " + std::to_string(reps_ba.size()));
        } else {
          SparseMatrix p(reps_ab.size(), reps_ba.size());
          for (std::size_t i = 0; i < reps_ab.size(); ++i)
            for (std::size_t j = 0; j < reps_ba.size(); ++j)
              p.set(i, j, pair_vec(a, b, reps_ab[i], reps_ba[j]));
          if (rank(p) != reps_ab.size())
            r.fail("DegeneratePairing", "induced pairing on H(Hom(" + c.branes[a] + "," +
                                            c.branes[b] + ")) has rank " +
                                            std::to_string(rank(p)) + " < " +
                                            std::to_string(reps_ab.size()));
        }
      }
    }

  // (e) cyclic identity for words e_0..e_{n-1}, 3 <= n <= n_max + 1:
  // ⟨m_{n-1}(e_0..e_{n-2}), e_{n-1}⟩ = (-1)^{(n+1)+|e_0|Σ_{i>=1}|e_i|} ⟨m_{n-1}(e_1..e_{n-1}), e_0⟩.
  for (std::size_t n = 3; n <= c.n_max + 1; ++n) {
    enumerate_object_sequences(c, n - 1, [&](const std::vector<std::size_t>& seq) {
      // seq = c_0..c_{n-1}; close up cyclically: e_{n-1} in Hom(c_{n-1}, c_0).
      if (c.dim(seq.back(), seq.front()) == 0) return;
      std::vector<std::size_t> objs = seq;
      objs.push_back(seq.front());  // c_0..c_{n-1},c_0 for word enumeration
      enumerate_words(c, objs, [&](const std::vector<std::size_t>& word) {
        std::vector<std::size_t> head_objs(objs.begin(), objs.end() - 1);
        std::vector<std::size_t> head_word(word.begin(), word.end() - 1);
        SparseVector m_head = c.product_basis(n - 1, head_objs, head_word);
        SparseVector last{{word.back(), Rational(1)}};
        Rational lhs = trace_of(
            cy, objs[0],
            apply_product_multi(c, 2, {objs[0], objs[n - 1], objs[0]}, {m_head, last}));
        std::vector<std::size_t> rot_objs(objs.begin() + 1, objs.end());
        std::vector<std::size_t> rot_word(word.begin() + 1, word.end());
        SparseVector m_rot = c.product_basis(n - 1, rot_objs, rot_word);
        SparseVector first{{word.front(), Rational(1)}};
        Rational rhs_pair = trace_of(
            cy, objs[1], apply_product_multi(c, 2, {objs[1], objs[0], objs[1]}, {m_rot, first}));
        int deg0 = c.degree_of(objs[0], objs[1], word[0]);
        int rest = 0;
        for (std::size_t k = 1; k < n; ++k) rest += c.degree_of(objs[k], objs[k + 1], word[k]);
        int exponent = static_cast<int>(n + 1) + deg0 * rest;
        Rational sign = (exponent % 2 == 0) ? 1 : -1;
        if (lhs != sign * rhs_pair)
          r.fail("CyclicPairing", "n=" + std::to_string(n) + " word " +
                                      word_to_string(c, objs, word) + ": " +
                                      rational_to_string(lhs) + " vs " +
                                      rational_to_string(sign * rhs_pair));
      });
    });
  }
  return r;
}

AInfinityCategory from_dg(const InvolutiveCategory& c) {
  AInfinityCategory a;
  a.branes = c.branes;
  a.homs = c.homs;
  a.units = c.units;
  a.star = c.star;
  a.n_max = 2;
  for (const auto& [key, d] : c.diff) {
    auto [x, y] = key;
    std::vector<std::size_t> objs{x, y};
    for (std::size_t i = 0; i < c.dim(x, y); ++i) {
      SparseVector out = d.apply({{i, Rational(1)}});
      if (!out.empty()) a.products[1][objs][{i}] = std::move(out);
    }
  }
  for (const auto& [key, table] : c.compose_table) {
    auto [x, y, z] = key;
    std::vector<std::size_t> objs{x, y, z};
    for (std::size_t i = 0; i < table.size(); ++i)
      for (std::size_t j = 0; j < table[i].size(); ++j)
        if (!table[i][j].empty()) a.products[2][objs][{i, j}] = table[i][j];
  }
  return a;
}

}  // namespace klein
