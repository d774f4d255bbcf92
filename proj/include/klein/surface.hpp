#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "klein/ainfinity.hpp"
#include "klein/complex.hpp"
#include "klein/hochschild.hpp"
#include "klein/rational.hpp"
#include "klein/sparse_matrix.hpp"

namespace klein {

// The surface category: formal morphism words generated by marked discs,
// twisted discs and annuli over a set of brane labels, with rewriting to
// normal form, a differential given by splitting off discs, and an
// evaluation functor into a verified Calabi-Yau involutive category.

using Brane = std::size_t;

// One open marked point, carrying the brane labels of the two boundary
// segments it separates: maps in Hom(s, t) are attached here.
struct OpenPoint {
  Brane s = 0, t = 0;
  auto operator<=>(const OpenPoint&) const = default;
};

// Object of the surface category: an ordered list of open marked points and
// a number of closed (circle) outputs.
struct ObjectLabel {
  std::vector<OpenPoint> open;
  std::size_t closed = 0;
  auto operator<=>(const ObjectLabel&) const = default;
};

struct Generator {
  enum class Kind {
    DiscAllIn,    // disc, n >= 3 points, all incoming; pairing of a product
    DiscPlus,     // disc, one outgoing point; n = 1 unit, n = 2 identity map,
                  // n >= 3 the (n-1)-ary product
    TwistedDisc,  // orientation-reversing disc: the involution
    DiscIn2,      // disc with two incoming points: the pairing
    DiscOut2,     // disc with two outgoing points: the inverse pairing
    Annulus,      // n open incoming points, one closed output
    Identity,     // identity on an object
    Permute,      // symmetric-monoidal shuffle (graded Koszul signs)
  };
  Kind kind = Kind::Identity;
  // Boundary-segment brane labels for the disc/annulus variants; for
  // TwistedDisc exactly two labels (a, b) giving star: Hom(a,b) -> Hom(b,a).
  std::vector<Brane> labels;
  // For Identity and Permute: the source object.
  ObjectLabel object;
  // For Permute: output slot i receives input slot perm[i].
  std::vector<std::size_t> perm;

  auto operator<=>(const Generator&) const = default;

  ObjectLabel source() const;
  ObjectLabel target() const;
};

Generator disc_all_in(const std::vector<Brane>& labels);
Generator disc_plus(const std::vector<Brane>& labels);
Generator twisted_disc(Brane a, Brane b);
Generator disc_in2(Brane a, Brane b);
Generator disc_out2(Brane a, Brane b);
Generator annulus_gen(const std::vector<Brane>& labels);
Generator identity_gen(const ObjectLabel& obj);
Generator permute_gen(const ObjectLabel& obj, const std::vector<std::size_t>& perm);

// A composition/tensor tree over generators. Compose children act in order:
// children[0] first, then children[1], and so on. Tensor children are placed
// side by side in order.
struct Tree {
  enum class Kind { Leaf, Compose, Tensor };
  Kind kind = Kind::Leaf;
  Generator gen;
  std::vector<Tree> children;

  bool operator==(const Tree& o) const;
  bool operator<(const Tree& o) const;

  ObjectLabel source() const;
  ObjectLabel target() const;
};

Tree leaf(const Generator& g);

struct Term {
  Rational coef;
  Tree tree;

  bool operator==(const Term& o) const { return coef == o.coef && tree == o.tree; }
};

// A formal linear combination of label-compatible trees with common source
// and target.
struct MorphismWord {
  ObjectLabel source, target;
  std::vector<Term> terms;  // kept sorted by tree, nonzero coefficients

  bool operator==(const MorphismWord& o) const {
    return source == o.source && target == o.target && terms == o.terms;
  }
};

MorphismWord word_of(const Generator& g);
MorphismWord word_of(const Rational& c, const Tree& t);
MorphismWord zero_word(const ObjectLabel& src, const ObjectLabel& tgt);

// Throws std::runtime_error("LabelMismatch...") when boundaries do not match.
MorphismWord compose(const MorphismWord& w1, const MorphismWord& w2);
MorphismWord tensor(const MorphismWord& w1, const MorphismWord& w2);
MorphismWord add(const MorphismWord& w1, const MorphismWord& w2);
MorphismWord scale(const Rational& c, const MorphismWord& w);

// Rewrites to a fixed point of the relation rules (twisted-disc squares,
// unit discs glued into discs and annuli, snake cancellation, identity and
// tensor-of-identity laws, cyclic normal form of all-incoming discs).
// Step bound: 10x the initial node count (overridable through the
// KLEIN_MAX_REWRITE_STEPS environment variable); exceeding it throws
// std::runtime_error("NonTermination...").
MorphismWord normalize(const MorphismWord& w);

// The differential: on discs, the sum over chords splitting off a smaller
// disc; on annuli, the two sums over disc splittings (consecutive points and
// the wrap around the closed output); extended by the Leibniz rule.
MorphismWord differential(const MorphismWord& w);

// Evaluation of a word without annuli in a verified category: a matrix from
// the tensor product of hom spaces of the source points to that of the
// target points. Basis order: product over points, last point fastest.
// Throws std::runtime_error("UnsupportedGenerator...") on annuli and
// std::runtime_error("NondegeneracyRequired...") if a two-outgoing disc is
// used with a singular pairing.
SparseMatrix evaluate(const MorphismWord& w, const AInfinityCategory& c,
                      const CalabiYauData& cy);

// Dimensions of the hom-space tensor product attached to an object.
std::size_t object_dimension(const ObjectLabel& obj, const AInfinityCategory& c);

// The closed-state complex of a DG category: spans of an annulus word with a
// matching tensor of hom basis elements, modulo the unit-insertion and
// twisted-disc relations, with the differential induced by the annulus
// splitting formula evaluated through the category. The result carries the
// same word bookkeeping as the cyclic-word complexes so the two sides of the
// comparison can be matched degree by degree.
TruncatedComplex closed_state_complex(const InvolutiveCategory& a, std::size_t trunc);

}  // namespace klein
