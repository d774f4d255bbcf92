#include "klein/hochschild.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace klein {

namespace {

int internal_degree(const InvolutiveCategory& a, const CyclicWord& w) {
  int d = 0;
  std::size_t n = w.length();
  for (std::size_t i = 0; i < n; ++i)
    d += a.degree_of(w.objects[i], w.objects[(i + 1) % n], w.basis[i]);
  return d;
}

int shifted_degree(const InvolutiveCategory& a, const CyclicWord& w, std::size_t i) {
  std::size_t n = w.length();
  return a.degree_of(w.objects[i], w.objects[(i + 1) % n], w.basis[i]) + 1;
}

// All label-compatible words of length 1..trunc, bucketed by chain degree.
std::vector<std::vector<CyclicWord>> enumerate_words(const InvolutiveCategory& a,
                                                     std::size_t trunc) {
  std::vector<std::vector<CyclicWord>> buckets;
  std::size_t nb = a.brane_count();
  for (std::size_t n = 1; n <= trunc; ++n) {
    std::vector<std::size_t> objs(n);
    std::function<void(std::size_t)> rec_obj = [&](std::size_t k) {
      if (k == n) {
        if (a.dim(objs[n - 1], objs[0]) == 0) return;
        CyclicWord w;
        w.objects = objs;
        w.basis.assign(n, 0);
        std::function<void(std::size_t)> rec_basis = [&](std::size_t i) {
          if (i == n) {
            int deg = internal_degree(a, w) + static_cast<int>(n) - 1;
            if (deg < 0) return;  // negative chain degrees are out of scope
            if (buckets.size() <= static_cast<std::size_t>(deg))
              buckets.resize(deg + 1);
            buckets[deg].push_back(w);
            return;
          }
          for (std::size_t x = 0; x < a.dim(objs[i], objs[(i + 1) % n]); ++x) {
            w.basis[i] = x;
            rec_basis(i + 1);
          }
        };
        rec_basis(0);
        return;
      }
      for (std::size_t b = 0; b < nb; ++b) {
        if (k > 0 && a.dim(objs[k - 1], b) == 0) continue;
        objs[k] = b;
        rec_obj(k + 1);
      }
    };
    rec_obj(0);
  }
  for (auto& bucket : buckets) std::sort(bucket.begin(), bucket.end());
  return buckets;
}

using WordIndex = std::map<CyclicWord, std::size_t>;

std::vector<WordIndex> index_words(const std::vector<std::vector<CyclicWord>>& words) {
  std::vector<WordIndex> idx(words.size());
  for (std::size_t k = 0; k < words.size(); ++k)
    for (std::size_t i = 0; i < words[k].size(); ++i) idx[k][words[k][i]] = i;
  return idx;
}

// Accumulates coeff * (word) into the target degree's column entries.
void add_word(const std::vector<WordIndex>& idx, int deg, const CyclicWord& w,
              const Rational& coeff, SparseVector& out) {
  if (deg < 0 || static_cast<std::size_t>(deg) >= idx.size()) return;
  auto it = idx[deg].find(w);
  if (it == idx[deg].end()) return;  // dropped by truncation bookkeeping
  Rational& slot = out[it->second];
  slot += coeff;
  if (slot == 0) out.erase(it->second);
}

// The differential of a single word as a vector over the ambient words one
// chain degree down. Three families of terms; signs use shifted degrees
// |f|+1 and reduce to (-1)^i and (-1)^{n-1} for internal degree 0.
SparseVector word_differential(const InvolutiveCategory& a, const CyclicWord& w,
                               const std::vector<WordIndex>& idx) {
  SparseVector out;
  std::size_t n = w.length();
  int chain_deg = internal_degree(a, w) + static_cast<int>(n) - 1;
  // Internal differential on slot i: sign (-1)^{Σ_{k<i}(|f_k|+1)}.
  int prefix = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t src = w.objects[i], dst = w.objects[(i + 1) % n];
    SparseVector df = a.apply_diff(src, dst, {{w.basis[i], Rational(1)}});
    Rational sign = (prefix % 2 == 0) ? 1 : -1;
    for (const auto& [x, c] : df) {
      CyclicWord v = w;
      v.basis[i] = x;
      add_word(idx, chain_deg - 1, v, sign * c, out);
    }
    prefix += shifted_degree(a, w, i);
  }
  if (n >= 2) {
    // Composition terms: replace (f_i, f_{i+1}) by f_{i+1}∘f_i,
    // sign (-1)^{Σ_{k<=i}(|f_k|+1) - 1}.
    int acc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      acc += shifted_degree(a, w, i);
      std::size_t x = w.objects[i], y = w.objects[i + 1], z = w.objects[(i + 2) % n];
      SparseVector comp = a.compose(x, y, z, {{w.basis[i], Rational(1)}},
                                    {{w.basis[i + 1], Rational(1)}});
      Rational sign = ((acc - 1) % 2 == 0) ? 1 : -1;
      for (const auto& [c, coef] : comp) {
        CyclicWord v;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i + 1) continue;
          v.objects.push_back(w.objects[k]);
          v.basis.push_back(k == i ? c : w.basis[k]);
        }
        add_word(idx, chain_deg - 1, v, sign * coef, out);
      }
    }
    // Wrap-around term: (f_0∘f_{n-1}) ⊗ f_1 ⊗ ... ⊗ f_{n-2},
    // sign (-1)^{(|f_{n-1}|+1)·(Σ_{k<n-1}(|f_k|+1) + 1) + 1}.
    int last = shifted_degree(a, w, n - 1);
    int rest = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) rest += shifted_degree(a, w, k);
    Rational sign = ((last * (rest + 1) + 1) % 2 == 0) ? 1 : -1;
    std::size_t x = w.objects[n - 1], y = w.objects[0], z = w.objects[1 % n];
    SparseVector comp =
        a.compose(x, y, z, {{w.basis[n - 1], Rational(1)}}, {{w.basis[0], Rational(1)}});
    for (const auto& [c, coef] : comp) {
      CyclicWord v;
      v.objects.push_back(w.objects[n - 1]);
      v.basis.push_back(c);
      for (std::size_t k = 1; k + 1 < n; ++k) {
        v.objects.push_back(w.objects[k]);
        v.basis.push_back(w.basis[k]);
      }
      add_word(idx, chain_deg - 1, v, sign * coef, out);
    }
  }
  return out;
}

std::vector<SparseMatrix> ambient_differentials(const InvolutiveCategory& a,
                                                const std::vector<std::vector<CyclicWord>>& words,
                                                const std::vector<WordIndex>& idx) {
  std::vector<SparseMatrix> ds;
  if (words.empty()) return ds;
  for (std::size_t k = 0; k + 1 < words.size(); ++k) {
    SparseMatrix d(words[k].size(), words[k + 1].size());
    for (std::size_t j = 0; j < words[k + 1].size(); ++j) {
      SparseVector col = word_differential(a, words[k + 1][j], idx);
      for (const auto& [i, c] : col) d.set(i, j, c);
    }
    ds.push_back(std::move(d));
  }
  return ds;
}

}  // namespace

SparseMatrix chain_involution_matrix(const InvolutiveCategory& a,
                                     const std::vector<CyclicWord>& degree_words) {
  std::size_t m = degree_words.size();
  WordIndex idx;
  for (std::size_t i = 0; i < m; ++i) idx[degree_words[i]] = i;
  SparseMatrix out(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const CyclicWord& w = degree_words[j];
    std::size_t n = w.length();
    // Koszul reversal sign in shifted degrees over pairs 1 <= i < j (slot 0
    // stays put), plus a global parity n+1.
    int expo = static_cast<int>(n) + 1;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k)
        expo += shifted_degree(a, w, i) * shifted_degree(a, w, k);
    Rational sign = (((expo % 2) + 2) % 2 == 0) ? 1 : -1;
    // Target objects: b_0 = a_0, b_i = a_{n-i+1 mod n}; slot 0 gets f_0⋆,
    // slot i gets f_{n-i}⋆. Stars may be combinations: expand multilinearly.
    std::vector<std::size_t> tobj(n);
    for (std::size_t i = 0; i < n; ++i) tobj[i] = w.objects[(n - i + 1) % n];
    std::vector<SparseVector> slot(n);
    slot[0] = a.apply_star_vec(w.objects[0], w.objects[1 % n], {{w.basis[0], Rational(1)}});
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t srcpos = n - i;
      slot[i] = a.apply_star_vec(w.objects[srcpos], w.objects[(srcpos + 1) % n],
                                 {{w.basis[srcpos], Rational(1)}});
    }
    CyclicWord v;
    v.objects = tobj;
    v.basis.assign(n, 0);
    std::function<void(std::size_t, const Rational&)> expand = [&](std::size_t i,
                                                                   const Rational& coef) {
      if (i == n) {
        auto it = idx.find(v);
        if (it != idx.end()) out.add(it->second, j, coef);
        return;
      }
      for (const auto& [x, c] : slot[i]) {
        v.basis[i] = x;
        expand(i + 1, coef * c);
      }
    };
    expand(0, sign);
  }
  return out;
}

namespace {

TruncatedComplex build_with_relations(const InvolutiveCategory& a, std::size_t trunc,
                                      HochschildVariant variant) {
  TruncatedComplex tc;
  tc.variant = variant;
  tc.trunc = trunc;
  tc.words = enumerate_words(a, trunc);
  auto idx = index_words(tc.words);
  tc.ambient_differentials = ambient_differentials(a, tc.words, idx);

  // Relation vectors per degree.
  std::size_t nd = tc.words.size();
  std::vector<std::vector<SparseVector>> relations(nd);
  if (variant != HochschildVariant::Ordinary) {
    for (std::size_t k = 0; k < nd; ++k) {
      SparseMatrix iota = chain_involution_matrix(a, tc.words[k]);
      for (std::size_t j = 0; j < tc.words[k].size(); ++j) {
        SparseVector r = iota.apply({{j, Rational(1)}});
        add_scaled(r, {{j, Rational(1)}}, -1);  // ι(w) - w
        if (!r.empty()) relations[k].push_back(std::move(r));
      }
    }
  }
  if (variant == HochschildVariant::NormalizedInvolutive) {
    for (std::size_t k = 0; k < nd; ++k) {
      WordIndex& wi = idx[k];
      for (std::size_t j = 0; j < tc.words[k].size(); ++j) {
        const CyclicWord& w = tc.words[k][j];
        std::size_t n = w.length();
        for (std::size_t i = 1; i < n; ++i) {
          std::size_t src = w.objects[i], dst = w.objects[(i + 1) % n];
          if (src != dst) continue;
          const SparseVector& unit = a.units[src];
          if (unit.empty()) continue;
          // Emit the relation once per context: slot i holds the smallest
          // unit-support index.
          if (w.basis[i] != unit.begin()->first) continue;
          SparseVector r;
          for (const auto& [x, c] : unit) {
            CyclicWord v = w;
            v.basis[i] = x;
            auto it = wi.find(v);
            if (it != wi.end()) add_scaled(r, {{it->second, Rational(1)}}, c);
          }
          if (!r.empty()) relations[k].push_back(std::move(r));
        }
      }
    }
  }

  tc.quotients.resize(nd);
  for (std::size_t k = 0; k < nd; ++k)
    tc.quotients[k] = quotient_presentation(tc.words[k].size(), relations[k]);

  // Induced differential, with descent verified.
  tc.complex.min_degree = 0;
  for (std::size_t k = 0; k < nd; ++k) tc.complex.dims.push_back(tc.quotients[k].dim);
  for (std::size_t k = 0; k + 1 < nd; ++k) {
    const SparseMatrix& d = tc.ambient_differentials[k];
    for (const auto& r : relations[k + 1]) {
      SparseVector img = tc.quotients[k].projection.apply(d.apply(r));
      if (!img.empty())
        throw std::runtime_error(
            "DescentFailure: differential does not preserve the relation span");
    }
    tc.complex.differentials.push_back(
        tc.quotients[k].projection.multiply(d.multiply(tc.quotients[k + 1].section)));
  }
  if (auto err = verify_complex(tc.complex))
    throw std::runtime_error("ComplexInvalid: " + *err);
  return tc;
}

}  // namespace

TruncatedComplex build_ordinary(const InvolutiveCategory& a, std::size_t trunc) {
  return build_with_relations(a, trunc, HochschildVariant::Ordinary);
}

TruncatedComplex build_involutive(const InvolutiveCategory& a, std::size_t trunc) {
  return build_with_relations(a, trunc, HochschildVariant::Involutive);
}

TruncatedComplex build_normalized_involutive(const InvolutiveCategory& a, std::size_t trunc) {
  return build_with_relations(a, trunc, HochschildVariant::NormalizedInvolutive);
}

std::vector<HomologyRow> homology(const TruncatedComplex& c, std::size_t max_reliable_degree) {
  std::vector<HomologyRow> rows;
  auto dims = homology_dims(c.complex);
  for (std::size_t k = 0; k < dims.size(); ++k)
    rows.push_back({static_cast<int>(k), c.complex.dims[k], dims[k], k <= max_reliable_degree});
  return rows;
}

}  // namespace klein
