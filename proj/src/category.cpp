#include "klein/category.hpp"

#include <sstream>
#include <stdexcept>

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

}  // namespace

SparseVector InvolutiveCategory::compose_basis(std::size_t a, std::size_t b, std::size_t c,
                                               std::size_t i, std::size_t j) const {
  auto it = compose_table.find({a, b, c});
  if (it == compose_table.end()) return {};
  return it->second[i][j];
}

SparseVector InvolutiveCategory::compose(std::size_t a, std::size_t b, std::size_t c,
                                         const SparseVector& f, const SparseVector& g) const {
  SparseVector out;
  auto it = compose_table.find({a, b, c});
  if (it == compose_table.end()) return out;
  for (const auto& [i, x] : f)
    for (const auto& [j, y] : g) add_scaled(out, it->second[i][j], x * y);
  return out;
}

SparseVector InvolutiveCategory::apply_diff(std::size_t a, std::size_t b,
                                            const SparseVector& f) const {
  auto it = diff.find({a, b});
  if (it == diff.end()) return {};
  return it->second.apply(f);
}

SparseVector InvolutiveCategory::apply_star_vec(std::size_t a, std::size_t b,
                                                const SparseVector& f) const {
  auto it = star.find({a, b});
  if (it == star.end()) return {};
  return it->second.apply(f);
}

std::string InvolutiveCategory::basis_name(std::size_t a, std::size_t b, std::size_t i) const {
  std::ostringstream os;
  os << homs[a][b].names[i] << "[" << branes[a] << "->" << branes[b] << "]";
  return os.str();
}

namespace {

// Degree of a homogeneous vector; returns false if mixed or checks nothing for zero.
bool homogeneous_degree(const InvolutiveCategory& c, std::size_t a, std::size_t b,
                        const SparseVector& v, int expected) {
  for (const auto& [i, x] : v) {
    (void)x;
    if (c.degree_of(a, b, i) != expected) return false;
  }
  return true;
}

Report check_shapes(const InvolutiveCategory& c) {
  Report r;
  std::size_t n = c.brane_count();
  if (c.homs.size() != n) {
    r.fail("ShapeMismatch", "homs table size != brane count");
    return r;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (c.homs[a].size() != n) {
      r.fail("ShapeMismatch", "homs row size != brane count");
      return r;
    }
    for (std::size_t b = 0; b < n; ++b)
      if (c.homs[a][b].names.size() != c.homs[a][b].degrees.size()) {
        r.fail("ShapeMismatch", "basis names/degrees length mismatch in Hom(" + c.branes[a] +
                                    "," + c.branes[b] + ")");
        return r;
      }
  }
  if (c.units.size() != n) {
    r.fail("ShapeMismatch", "units table size != brane count");
    return r;
  }
  for (const auto& [key, table] : c.compose_table) {
    auto [a, b, cc] = key;
    if (a >= n || b >= n || cc >= n || table.size() != c.dim(a, b)) {
      r.fail("ShapeMismatch", "compose tensor shape");
      return r;
    }
    for (const auto& row : table)
      if (row.size() != c.dim(b, cc)) {
        r.fail("ShapeMismatch", "compose tensor shape");
        return r;
      }
  }
  for (const auto& [key, m] : c.diff)
    if (m.rows() != c.dim(key.first, key.second) || m.cols() != c.dim(key.first, key.second)) {
      r.fail("ShapeMismatch", "differential matrix shape");
      return r;
    }
  for (const auto& [key, m] : c.star)
    if (m.cols() != c.dim(key.first, key.second) || m.rows() != c.dim(key.second, key.first)) {
      r.fail("ShapeMismatch", "star matrix shape");
      return r;
    }
  return r;
}

}  // namespace

Report check_dg_axioms(const InvolutiveCategory& c) {
  Report r = check_shapes(c);
  if (!r.pass) return r;
  std::size_t n = c.brane_count();

  // Degree bookkeeping: compose additive, d lowers by 1.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t i = 0; i < c.dim(a, b); ++i)
          for (std::size_t j = 0; j < c.dim(b, cc); ++j) {
            SparseVector gf = c.compose_basis(a, b, cc, i, j);
            int want = c.degree_of(a, b, i) + c.degree_of(b, cc, j);
            if (!homogeneous_degree(c, a, cc, gf, want))
              r.fail("DegreeAdditivity", c.basis_name(b, cc, j) + " ∘ " + c.basis_name(a, b, i) +
                                             " not concentrated in degree " + std::to_string(want));
          }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < c.dim(a, b); ++i) {
        SparseVector e{{i, Rational(1)}};
        SparseVector df = c.apply_diff(a, b, e);
        if (!homogeneous_degree(c, a, b, df, c.degree_of(a, b, i) - 1))
          r.fail("DifferentialDegree", "d(" + c.basis_name(a, b, i) + ") not of degree " +
                                           std::to_string(c.degree_of(a, b, i) - 1));
      }

  // d² = 0.
  for (const auto& [key, d] : c.diff) {
    SparseMatrix sq = d.multiply(d);
    if (!sq.is_zero())
      r.fail("DSquared", "d∘d != 0 on Hom(" + c.branes[key.first] + "," +
                             c.branes[key.second] + ")");
  }

  // Leibniz: d(g∘f) = d(g)∘f + (-1)^{|g|} g∘d(f).
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t i = 0; i < c.dim(a, b); ++i)
          for (std::size_t j = 0; j < c.dim(b, cc); ++j) {
            SparseVector f{{i, Rational(1)}}, g{{j, Rational(1)}};
            SparseVector lhs = c.apply_diff(a, cc, c.compose(a, b, cc, f, g));
            Rational sign = (c.degree_of(b, cc, j) % 2 == 0) ? 1 : -1;
            SparseVector rhs = c.compose(a, b, cc, f, c.apply_diff(b, cc, g));  // d(g)∘f
            add_scaled(rhs, c.compose(a, b, cc, c.apply_diff(a, b, f), g), sign);  // ± g∘d(f)
            SparseVector delta = lhs;
            add_scaled(delta, rhs, Rational(-1));
            if (!delta.empty())
              r.fail("Leibniz", "d(" + c.basis_name(b, cc, j) + " ∘ " + c.basis_name(a, b, i) +
                                    "): lhs = " + vec_to_string(lhs) + ", rhs = " +
                                    vec_to_string(rhs));
          }

  // Associativity: (h∘g)∘f = h∘(g∘f) for f: a->b, g: b->c, h: c->e.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t e = 0; e < n; ++e)
          for (std::size_t i = 0; i < c.dim(a, b); ++i)
            for (std::size_t j = 0; j < c.dim(b, cc); ++j)
              for (std::size_t k = 0; k < c.dim(cc, e); ++k) {
                SparseVector f{{i, Rational(1)}}, g{{j, Rational(1)}}, h{{k, Rational(1)}};
                SparseVector left =
                    c.compose(a, cc, e, c.compose(a, b, cc, f, g), h);
                SparseVector right =
                    c.compose(a, b, e, f, c.compose(b, cc, e, g, h));
                if (left != right)
                  r.fail("Associativity",
                         c.basis_name(cc, e, k) + " ∘ " + c.basis_name(b, cc, j) + " ∘ " +
                             c.basis_name(a, b, i) + ": " + vec_to_string(left) + " vs " +
                             vec_to_string(right));
              }

  // Unit laws: 1_b ∘ f = f = f ∘ 1_a, and units of degree 0 with d(1) = 0.
  for (std::size_t a = 0; a < n; ++a) {
    if (!homogeneous_degree(c, a, a, c.units[a], 0))
      r.fail("UnitDegree", "unit of " + c.branes[a] + " not degree 0");
    if (!c.apply_diff(a, a, c.units[a]).empty())
      r.fail("UnitClosed", "d(1_" + c.branes[a] + ") != 0");
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < c.dim(a, b); ++i) {
        SparseVector f{{i, Rational(1)}};
        SparseVector left = c.compose(a, a, b, c.units[a], f);   // f ∘ 1_a
        SparseVector right = c.compose(a, b, b, f, c.units[b]);  // 1_b ∘ f
        if (left != f)
          r.fail("UnitLaw", c.basis_name(a, b, i) + " ∘ 1_" + c.branes[a] + " = " +
                                vec_to_string(left));
        if (right != f)
          r.fail("UnitLaw", "1_" + c.branes[b] + " ∘ " + c.basis_name(a, b, i) + " = " +
                                vec_to_string(right));
      }
  }
  return r;
}

Report check_involution_axioms(const InvolutiveCategory& c) {
  Report r = check_shapes(c);
  if (!r.pass) return r;
  std::size_t n = c.brane_count();

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      // Degree preservation and involutivity ⋆⋆ = id.
      for (std::size_t i = 0; i < c.dim(a, b); ++i) {
        SparseVector e{{i, Rational(1)}};
        SparseVector se = c.apply_star_vec(a, b, e);
        if (!homogeneous_degree(c, b, a, se, c.degree_of(a, b, i)))
          r.fail("StarDegree", "⋆(" + c.basis_name(a, b, i) + ") changes degree");
        SparseVector sse = c.apply_star_vec(b, a, se);
        if (sse != e)
          r.fail("StarInvolutive", "⋆⋆(" + c.basis_name(a, b, i) + ") = " + vec_to_string(sse));
        // d-compatibility: d(f⋆) = (d f)⋆.
        SparseVector lhs = c.apply_diff(b, a, se);
        SparseVector rhs = c.apply_star_vec(a, b, c.apply_diff(a, b, e));
        if (lhs != rhs)
          r.fail("StarDiff", "d(⋆ " + c.basis_name(a, b, i) + ") = " + vec_to_string(lhs) +
                                 " but ⋆(d ...) = " + vec_to_string(rhs));
      }
      // Anti-homomorphism: (g∘f)⋆ = f⋆ ∘ g⋆ for f: a->b, g: b->c.
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t i = 0; i < c.dim(a, b); ++i)
          for (std::size_t j = 0; j < c.dim(b, cc); ++j) {
            SparseVector f{{i, Rational(1)}}, g{{j, Rational(1)}};
            SparseVector lhs = c.apply_star_vec(a, cc, c.compose(a, b, cc, f, g));
            SparseVector rhs = c.compose(cc, b, a, c.apply_star_vec(b, cc, g),
                                         c.apply_star_vec(a, b, f));
            if (lhs != rhs)
              r.fail("StarAntiHom", "(" + c.basis_name(b, cc, j) + " ∘ " + c.basis_name(a, b, i) +
                                        ")⋆ = " + vec_to_string(lhs) + " but f⋆∘g⋆ = " +
                                        vec_to_string(rhs));
          }
    }
  // Unit fixing.
  for (std::size_t a = 0; a < n; ++a) {
    SparseVector su = c.apply_star_vec(a, a, c.units[a]);
    if (su != c.units[a])
      r.fail("StarUnit", "⋆(1_" + c.branes[a] + ") = " + vec_to_string(su));
  }
  return r;
}

Element apply_star(const InvolutiveCategory& c, const Element& e) {
  if (e.source >= c.brane_count() || e.target >= c.brane_count())
    throw std::invalid_argument("UnknownElement: brane index out of range");
  for (const auto& [i, x] : e.coords) {
    (void)x;
    if (i >= c.dim(e.source, e.target))
      throw std::invalid_argument("UnknownElement: basis index out of range");
  }
  Element out;
  out.source = e.target;
  out.target = e.source;
  out.coords = c.apply_star_vec(e.source, e.target, e.coords);
  return out;
}

}  // namespace klein
