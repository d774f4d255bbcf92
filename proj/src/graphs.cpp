#include "klein/graphs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace klein {

std::size_t MobiusGraph::next_at_vertex(std::size_t h) const {
  const auto& ord = cyclic[vertex[h]];
  for (std::size_t i = 0; i < ord.size(); ++i)
    if (ord[i] == h) return ord[(i + 1) % ord.size()];
  throw std::logic_error("half-edge missing from its vertex order");
}

std::size_t MobiusGraph::prev_at_vertex(std::size_t h) const {
  const auto& ord = cyclic[vertex[h]];
  for (std::size_t i = 0; i < ord.size(); ++i)
    if (ord[i] == h) return ord[(i + ord.size() - 1) % ord.size()];
  throw std::logic_error("half-edge missing from its vertex order");
}

std::optional<std::string> validate(const MobiusGraph& g) {
  std::size_t H = g.half_edge_count(), V = g.vertex_count();
  if (g.vertex.size() != H || g.colour.size() != H || g.leg_label.size() != V)
    return "field sizes inconsistent";
  for (std::size_t h = 0; h < H; ++h) {
    if (g.iota[h] >= H || g.iota[g.iota[h]] != h) return "iota is not an involution";
    if (g.iota[h] == h) return "iota has a fixed point";
    if (g.vertex[h] >= V) return "half-edge attached to missing vertex";
    if (g.colour[h] != 0 && g.colour[h] != 1) return "colour not in {0,1}";
  }
  std::vector<std::size_t> seen(H, 0);
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t h : g.cyclic[v]) {
      if (h >= H || g.vertex[h] != v) return "cyclic order lists a foreign half-edge";
      if (++seen[h] > 1) return "half-edge repeated in cyclic orders";
    }
    if (g.is_leg(v)) {
      if (g.leg_label[v] <= 0) return "univalent vertex without a leg label";
    } else if (g.leg_label[v] != 0) {
      return "leg label on a non-univalent vertex";
    }
  }
  for (std::size_t h = 0; h < H; ++h)
    if (seen[h] != 1) return "half-edge missing from cyclic orders";
  std::set<int> labels;
  for (std::size_t v = 0; v < V; ++v)
    if (g.leg_label[v] > 0 && !labels.insert(g.leg_label[v]).second)
      return "duplicate leg label";
  return std::nullopt;
}

void vertex_flip(MobiusGraph& g, std::size_t v) {
  std::reverse(g.cyclic[v].begin(), g.cyclic[v].end());
  for (std::size_t h : g.cyclic[v]) g.colour[h] ^= 1;
}

namespace {

// Removes half-edges h0, h1 and vertex v_gone, merging its order into
// the order of v_keep at the position of h0.
MobiusGraph rebuild_after_contraction(const MobiusGraph& g, std::size_t h0, std::size_t h1,
                                      std::size_t v_keep, std::size_t v_gone,
                                      const std::vector<std::size_t>& merged_order,
                                      int merged_label) {
  std::size_t H = g.half_edge_count(), V = g.vertex_count();
  std::vector<std::size_t> hmap(H, H), vmap(V, V);
  std::size_t nh = 0, nv = 0;
  for (std::size_t h = 0; h < H; ++h)
    if (h != h0 && h != h1) hmap[h] = nh++;
  for (std::size_t v = 0; v < V; ++v)
    if (v != v_gone) vmap[v] = nv++;
  MobiusGraph out;
  out.iota.resize(nh);
  out.vertex.resize(nh);
  out.colour.resize(nh);
  out.cyclic.resize(nv);
  out.leg_label.assign(nv, 0);
  for (std::size_t h = 0; h < H; ++h) {
    if (hmap[h] == H) continue;
    out.iota[hmap[h]] = hmap[g.iota[h]];
    std::size_t v = g.vertex[h] == v_gone ? v_keep : g.vertex[h];
    out.vertex[hmap[h]] = vmap[v];
    out.colour[hmap[h]] = g.colour[h];
  }
  for (std::size_t v = 0; v < V; ++v) {
    if (v == v_gone) continue;
    const auto& src = (v == v_keep) ? merged_order : g.cyclic[v];
    for (std::size_t h : src) out.cyclic[vmap[v]].push_back(hmap[h]);
    out.leg_label[vmap[v]] = (v == v_keep) ? merged_label : g.leg_label[v];
  }
  return out;
}

}  // namespace

MobiusGraph contract_edge(const MobiusGraph& g, std::size_t h) {
  if (h >= g.half_edge_count()) throw std::runtime_error("UnknownEdge: index out of range");
  std::size_t h0 = h, h1 = g.iota[h];
  std::size_t u = g.vertex[h0], v = g.vertex[h1];
  if (u == v) throw std::runtime_error("LoopContraction: cannot contract a loop");
  if (g.is_leg(u) && g.is_leg(v))
    throw std::runtime_error("ExternalEdge: both endpoints are legs");
  MobiusGraph work = g;
  if (work.edge_twist(h0) == 1) vertex_flip(work, v);
  // Splice: in u's order, replace h0 by v's order read from after h1 around to
  // before h1.
  std::vector<std::size_t> merged;
  for (std::size_t x : work.cyclic[u]) {
    if (x != h0) {
      merged.push_back(x);
      continue;
    }
    const auto& ord = work.cyclic[v];
    std::size_t pos = 0;
    while (ord[pos] != h1) ++pos;
    for (std::size_t k = 1; k < ord.size(); ++k) merged.push_back(ord[(pos + k) % ord.size()]);
  }
  int label = 0;
  if (merged.size() == 1) label = std::max(g.leg_label[u], g.leg_label[v]);
  return rebuild_after_contraction(work, h0, h1, u, v, merged, label);
}

MobiusGraph reduce(const MobiusGraph& g) {
  MobiusGraph cur = g;
  for (;;) {
    std::size_t pick = cur.half_edge_count();
    for (std::size_t v = 0; v < cur.vertex_count() && pick == cur.half_edge_count(); ++v) {
      if (cur.valence(v) != 2) continue;
      for (std::size_t h : cur.cyclic[v])
        if (cur.vertex[cur.iota[h]] != v) {
          pick = h;
          break;
        }
    }
    if (pick == cur.half_edge_count()) break;
    cur = contract_edge(cur, pick);
  }
  for (std::size_t v = 0; v < cur.vertex_count(); ++v)
    if (cur.valence(v) == 2)
      throw std::runtime_error("NotReducible: bivalent vertex with only loop edges remains");
  return cur;
}

namespace {

struct IsoSearch {
  const MobiusGraph& a;
  const MobiusGraph& b;
  std::vector<std::size_t> vmap;      // a-vertex -> b-vertex (b.V = unset)
  std::vector<std::size_t> hmap;      // a-half-edge -> b-half-edge
  std::vector<char> vused, hused;

  IsoSearch(const MobiusGraph& a_, const MobiusGraph& b_)
      : a(a_),
        b(b_),
        vmap(a_.vertex_count(), b_.vertex_count()),
        hmap(a_.half_edge_count(), b_.half_edge_count()),
        vused(b_.vertex_count(), 0),
        hused(b_.half_edge_count(), 0) {}

  bool consistent_iota_colour() const {
    for (std::size_t h = 0; h < a.half_edge_count(); ++h) {
      if (hmap[h] == b.half_edge_count()) continue;
      std::size_t hi = a.iota[h];
      if (hmap[hi] == b.half_edge_count()) continue;
      if (b.iota[hmap[h]] != hmap[hi]) return false;
    }
    return true;
  }

  bool assign_vertex(std::size_t v, std::size_t w, bool flip, std::size_t rot) {
    // Map v's cyclic order onto w's, preserving or reversing, starting at rot.
    std::size_t n = a.valence(v);
    const auto& av = a.cyclic[v];
    const auto& bw = b.cyclic[w];
    std::vector<std::size_t> assigned;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t tgt =
          flip ? bw[(rot + n - i) % n] : bw[(rot + i) % n];
      if (hused[tgt]) {
        for (std::size_t x : assigned) {
          hused[hmap[x]] = 0;
          hmap[x] = b.half_edge_count();
        }
        return false;
      }
      // Colour condition: preserved, or flipped together with the order.
      if ((a.colour[av[i]] ^ (flip ? 1 : 0)) != b.colour[tgt]) {
        for (std::size_t x : assigned) {
          hused[hmap[x]] = 0;
          hmap[x] = b.half_edge_count();
        }
        return false;
      }
      hmap[av[i]] = tgt;
      hused[tgt] = 1;
      assigned.push_back(av[i]);
    }
    if (!consistent_iota_colour()) {
      for (std::size_t x : assigned) {
        hused[hmap[x]] = 0;
        hmap[x] = b.half_edge_count();
      }
      return false;
    }
    return true;
  }

  void unassign_vertex(std::size_t v) {
    for (std::size_t x : a.cyclic[v]) {
      hused[hmap[x]] = 0;
      hmap[x] = b.half_edge_count();
    }
  }

  bool search(std::size_t v) {
    if (v == a.vertex_count()) return true;
    for (std::size_t w = 0; w < b.vertex_count(); ++w) {
      if (vused[w] || a.valence(v) != b.valence(w) || a.leg_label[v] != b.leg_label[w]) continue;
      vmap[v] = w;
      vused[w] = 1;
      std::size_t n = a.valence(v);
      for (int flip = 0; flip < 2; ++flip)
        for (std::size_t rot = 0; rot < n; ++rot) {
          if (!assign_vertex(v, w, flip != 0, rot)) continue;
          if (search(v + 1)) return true;
          unassign_vertex(v);
        }
      vused[w] = 0;
      vmap[v] = b.vertex_count();
    }
    return false;
  }
};

}  // namespace

std::optional<GraphIso> find_isomorphism(const MobiusGraph& a, const MobiusGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.half_edge_count() != b.half_edge_count())
    return std::nullopt;
  IsoSearch s(a, b);
  if (!s.search(0)) return std::nullopt;
  return GraphIso{std::move(s.vmap), std::move(s.hmap)};
}

TopologicalType thicken_type(const MobiusGraph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.is_leg(v)) throw std::runtime_error("LegsUnsupported: thickening requires a leg-free graph");
  std::size_t V = g.vertex_count(), H = g.half_edge_count();
  if (V == 0) throw std::runtime_error("Disconnected: empty graph");
  // Connectivity.
  std::vector<char> vis(V, 0);
  std::vector<std::size_t> stack{0};
  vis[0] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t h : g.cyclic[v]) {
      std::size_t w = g.vertex[g.iota[h]];
      if (!vis[w]) {
        vis[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < V; ++v)
    if (!vis[v]) throw std::runtime_error("Disconnected: graph has several components");

  // Boundary components: orbits of the next-side map on H x {0,1}.
  auto step = [&](std::pair<std::size_t, int> hs) {
    auto [h, s] = hs;
    int s2 = s ^ g.edge_twist(h);
    std::size_t h2 = g.iota[h];
    std::size_t nxt = s2 == 0 ? g.next_at_vertex(h2) : g.prev_at_vertex(h2);
    return std::make_pair(nxt, s2);
  };
  std::set<std::pair<std::size_t, int>> todo;
  for (std::size_t h = 0; h < H; ++h) {
    todo.insert({h, 0});
    todo.insert({h, 1});
  }
  std::size_t orbits = 0;
  while (!todo.empty()) {
    auto start = *todo.begin();
    auto cur = start;
    do {
      todo.erase(cur);
      cur = step(cur);
    } while (cur != start);
    ++orbits;
  }
  std::size_t boundaries = orbits / 2;

  // Orientability: a vertex flip assignment zeroing every edge twist.
  bool orientable = true;
  std::vector<int> flip(V, -1);
  flip[0] = 0;
  std::vector<std::size_t> bfs{0};
  while (!bfs.empty() && orientable) {
    std::size_t v = bfs.back();
    bfs.pop_back();
    for (std::size_t h : g.cyclic[v]) {
      std::size_t w = g.vertex[g.iota[h]];
      int want = flip[v] ^ g.edge_twist(h);
      if (w == v) {
        if (g.edge_twist(h) == 1) orientable = false;
      } else if (flip[w] == -1) {
        flip[w] = want;
        bfs.push_back(w);
      } else if (flip[w] != want) {
        orientable = false;
      }
    }
  }

  long chi = static_cast<long>(V) - static_cast<long>(g.edge_count());
  TopologicalType t;
  t.h = boundaries;
  if (orientable) {
    t.u = 0;
    t.g = static_cast<std::size_t>((2 - static_cast<long>(boundaries) - chi) / 2);
  } else {
    long k = 2 - static_cast<long>(boundaries) - chi;  // crosscap count
    t.u = (k % 2 != 0) ? 1 : 2;
    t.g = static_cast<std::size_t>((k - t.u) / 2);
  }
  return t;
}

bool is_moduli_nonempty(long g, long u, long h, long n) {
  if (g < 0 || u < 0 || u > 2 || h < 0 || n < 0)
    throw std::invalid_argument("invalid topological data");
  static const long empty[5][4] = {
      {0, 0, 1, 0}, {0, 0, 1, 1}, {0, 0, 1, 2}, {0, 0, 2, 0}, {0, 1, 1, 0}};
  for (const auto& e : empty)
    if (g == e[0] && u == e[1] && h == e[2] && n == e[3]) return false;
  return true;
}

MobiusGraph random_mobius_graph(std::mt19937& rng, std::size_t max_half_edges) {
  for (;;) {
    std::uniform_int_distribution<std::size_t> nv(1, 4);
    std::size_t V = nv(rng);
    // Spanning tree plus extra edges (loops allowed).
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v = 1; v < V; ++v)
      edges.emplace_back(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng), v);
    std::size_t budget = max_half_edges / 2;
    std::uniform_int_distribution<std::size_t> pickv(0, V - 1);
    std::size_t extra = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    for (std::size_t k = 0; k < extra && edges.size() < budget; ++k)
      edges.emplace_back(pickv(rng), pickv(rng));
    if (edges.size() > budget) continue;
    MobiusGraph g;
    g.cyclic.resize(V);
    g.leg_label.assign(V, 0);
    for (auto [x, y] : edges) {
      std::size_t h0 = g.iota.size(), h1 = h0 + 1;
      g.iota.push_back(h1);
      g.iota.push_back(h0);
      g.vertex.push_back(x);
      g.vertex.push_back(y);
      g.colour.push_back(std::uniform_int_distribution<int>(0, 1)(rng));
      g.colour.push_back(std::uniform_int_distribution<int>(0, 1)(rng));
      g.cyclic[x].push_back(h0);
      g.cyclic[y].push_back(h1);
    }
    bool ok = true;
    for (std::size_t v = 0; v < V; ++v)
      if (g.valence(v) < 2) ok = false;
    if (!ok) continue;
    for (std::size_t v = 0; v < V; ++v)
      std::shuffle(g.cyclic[v].begin(), g.cyclic[v].end(), rng);
    return g;
  }
}

MobiusGraph loop_graph(int colour0, int colour1) {
  MobiusGraph g;
  g.iota = {1, 0};
  g.vertex = {0, 0};
  g.cyclic = {{0, 1}};
  g.colour = {colour0, colour1};
  g.leg_label = {0};
  return g;
}

MobiusGraph theta_graph(bool parallel_orders) {
  MobiusGraph g;
  // Half-edges 0,2,4 at vertex 0; 1,3,5 at vertex 1; ι pairs 2k <-> 2k+1.
  g.iota = {1, 0, 3, 2, 5, 4};
  g.vertex = {0, 1, 0, 1, 0, 1};
  g.cyclic.resize(2);
  g.cyclic[0] = {0, 2, 4};
  g.cyclic[1] = parallel_orders ? std::vector<std::size_t>{1, 3, 5}
                                : std::vector<std::size_t>{1, 5, 3};
  g.colour.assign(6, 0);
  g.leg_label = {0, 0};
  return g;
}

}  // namespace klein
