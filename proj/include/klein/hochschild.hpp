#pragma once

#include <compare>
#include <map>
#include <vector>

#include "klein/category.hpp"
#include "klein/complex.hpp"

namespace klein {

// A word f_0 ⊗ ... ⊗ f_{n-1} of hom basis elements with f_i in
// Hom(a_i, a_{i+1 mod n}); objects[i] = a_i, basis[i] = index of f_i.
struct CyclicWord {
  std::vector<std::size_t> objects;
  std::vector<std::size_t> basis;
  auto operator<=>(const CyclicWord&) const = default;

  std::size_t length() const { return basis.size(); }
};

enum class HochschildVariant { Ordinary, Involutive, NormalizedInvolutive };

// Cyclic-word chain complex truncated at word length trunc. Chain degree of a
// word = internal degree + (length - 1); degree-k chain group is the quotient
// of the span of all degree-k words by the variant's relations.
struct TruncatedComplex {
  HochschildVariant variant = HochschildVariant::Ordinary;
  std::size_t trunc = 1;
  // Ambient word basis per chain degree (chain degree = vector index).
  std::vector<std::vector<CyclicWord>> words;
  // Quotient presentation of each chain group inside its ambient word span.
  std::vector<QuotientPresentation> quotients;
  // The quotient complex with differentials; complex.dims[k] = quotients[k].dim.
  FiniteComplex complex;
  // Ambient differential matrices (degree k+1 words -> degree k words), before
  // the quotient; kept for the chain-map and involution property tests.
  std::vector<SparseMatrix> ambient_differentials;
};

TruncatedComplex build_ordinary(const InvolutiveCategory& a, std::size_t trunc);
// Quotient by w - ι(w) for the chain involution ι; the induced differential's
// descent is verified and throws std::runtime_error("DescentFailure...") if it
// fails.
TruncatedComplex build_involutive(const InvolutiveCategory& a, std::size_t trunc);
// Further quotient killing words with a unit component in any slot i > 0.
TruncatedComplex build_normalized_involutive(const InvolutiveCategory& a, std::size_t trunc);

// The chain involution ι(f_0 ⊗ ... ⊗ f_{n-1}) = ± f_0⋆ ⊗ f_{n-1}⋆ ⊗ ... ⊗ f_1⋆
// (cyclic reversal fixing the head) as a matrix on the degree-k ambient word
// span; the sign is the Koszul reversal sign in shifted degrees,
// (-1)^{Σ_{i<j}(|f_i|+1)(|f_j|+1)}.
SparseMatrix chain_involution_matrix(const InvolutiveCategory& a,
                                     const std::vector<CyclicWord>& degree_words);

struct HomologyRow {
  int degree;
  std::size_t chain_dim;
  std::size_t homology_dim;
  bool reliable;
};

// Homology dims for degrees 0..max shown; degrees above max_reliable_degree
// are flagged truncation-suspect.
std::vector<HomologyRow> homology(const TruncatedComplex& c, std::size_t max_reliable_degree);

}  // namespace klein
