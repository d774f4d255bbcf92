#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace klein {

// A Möbius graph: ribbon graph (cyclic order of half-edges at each vertex)
// plus a Z/2 colouring of half-edges. Half-edges are 0..H-1, vertices 0..V-1;
// iota is a fixed-point-free involution pairing half-edges into edges; legs
// are exactly the univalent vertices and carry distinct positive labels.
struct MobiusGraph {
  std::vector<std::size_t> iota;                 // ι : H -> H
  std::vector<std::size_t> vertex;               // λ : H -> V
  std::vector<std::vector<std::size_t>> cyclic;  // per vertex, cyclic order of λ⁻¹(v)
  std::vector<int> colour;                       // c : H -> {0,1}
  std::vector<int> leg_label;                    // per vertex; 0 = not a leg

  std::size_t vertex_count() const { return cyclic.size(); }
  std::size_t half_edge_count() const { return iota.size(); }
  std::size_t valence(std::size_t v) const { return cyclic[v].size(); }
  std::size_t edge_count() const { return iota.size() / 2; }
  bool is_leg(std::size_t v) const { return valence(v) == 1; }
  int edge_twist(std::size_t h) const { return (colour[h] + colour[iota[h]]) % 2; }
  // Successor / predecessor in the cyclic order at λ(h).
  std::size_t next_at_vertex(std::size_t h) const;
  std::size_t prev_at_vertex(std::size_t h) const;
};

// Structural invariants: involution fixed-point-free, λ/cyclic consistent,
// legs labelled distinctly, non-legs unlabelled. Returns first failure.
std::optional<std::string> validate(const MobiusGraph& g);

// Gauge move at v: reverse the cyclic order and flip all incident colours.
// A Möbius-graph isomorphism; used to equalize edge colours before contraction.
void vertex_flip(MobiusGraph& g, std::size_t v);

// Contracts the edge {h, ι(h)}. Throws std::runtime_error with message
// starting "LoopContraction" for loops and "ExternalEdge" when both endpoints
// are legs. A single leg endpoint is allowed; its label transfers to the
// merged vertex when that vertex is again univalent.
MobiusGraph contract_edge(const MobiusGraph& g, std::size_t h);

// Contracts non-loop edges at bivalent vertices until every vertex is
// univalent or has valence >= 3. Throws "NotReducible" when impossible
// (e.g. a pure cycle of bivalent vertices).
MobiusGraph reduce(const MobiusGraph& g);

struct GraphIso {
  std::vector<std::size_t> vertex_map;
  std::vector<std::size_t> half_edge_map;
};

// Isomorphism respecting λ, ι, leg labels, and at each vertex either
// preserving (cyclic order, colours) or reversing the order and flipping the
// colours. Returns a witness when isomorphic.
std::optional<GraphIso> find_isomorphism(const MobiusGraph& a, const MobiusGraph& b);
inline bool is_isomorphic(const MobiusGraph& a, const MobiusGraph& b) {
  return find_isomorphism(a, b).has_value();
}

struct TopologicalType {
  std::size_t g = 0;  // handles
  int u = 0;          // crosscaps, in {0,1,2}; 0 iff orientable
  std::size_t h = 0;  // boundary components
  bool operator==(const TopologicalType&) const = default;
};

// Topological type of the thickened surface. Throws "Disconnected" on
// disconnected graphs and "LegsUnsupported" when legs are present.
TopologicalType thicken_type(const MobiusGraph& g);

// False exactly on the five empty moduli: (g,u,h,n) in
// {(0,0,1,0),(0,0,1,1),(0,0,1,2),(0,0,2,0),(0,1,1,0)}.
bool is_moduli_nonempty(long g, long u, long h, long n);

// Random connected leg-free Möbius graph with at most max_half_edges
// half-edges; every vertex has valence >= 2.
MobiusGraph random_mobius_graph(std::mt19937& rng, std::size_t max_half_edges);

// Convenience builders used by tests and bundled files.
MobiusGraph loop_graph(int colour0, int colour1);  // one bivalent vertex, one loop
MobiusGraph theta_graph(bool parallel_orders);     // two trivalent vertices, 3 edges

}  // namespace klein
