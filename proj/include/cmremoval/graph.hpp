#pragma once

// Configuration-model multigraphs stored as matched half-edges, with sampling,
// degree-based removal, vertex explosion and union-find component statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmremoval/degrees.hpp"
#include "cmremoval/errors.hpp"
#include "cmremoval/rng.hpp"

namespace cmr {

using Vertex = std::uint32_t;
using HalfEdge = std::uint32_t;
inline constexpr HalfEdge kUnmatched = static_cast<HalfEdge>(-1);

enum class Label : std::uint8_t { normal, red };

/// Multigraph on half-edges. Vertex v owns the contiguous half-edge range
/// [first(v), first(v) + slots(v)); edges are pairs (h, mate(h)). Removed
/// vertices keep their ids (tombstones) so ids stay stable.
class HalfEdgeGraph {
 public:
  HalfEdgeGraph() = default;

  /// Unmatched stubs for the given degree sequence.
  explicit HalfEdgeGraph(std::span<const int> degrees) {
    const std::size_t n = degrees.size();
    first_.resize(n);
    slots_.resize(n);
    degree_.resize(n);
    alive_.assign(n, 1);
    label_.assign(n, Label::normal);
    std::size_t h = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (degrees[v] < 0) throw DomainError("negative degree at vertex " + std::to_string(v));
      first_[v] = static_cast<HalfEdge>(h);
      slots_[v] = static_cast<std::uint32_t>(degrees[v]);
      degree_[v] = degrees[v];
      h += static_cast<std::size_t>(degrees[v]);
    }
    owner_.resize(h);
    for (std::size_t v = 0; v < n; ++v)
      for (std::uint32_t i = 0; i < slots_[v]; ++i) owner_[first_[v] + i] = static_cast<Vertex>(v);
    mate_.assign(h, kUnmatched);
    half_alive_.assign(h, 1);
  }

  /// Builds a graph from a degree sequence and a full matching (an involution without fixed points).
  static HalfEdgeGraph with_matching(std::span<const int> degrees, std::vector<HalfEdge> mate) {
    HalfEdgeGraph g(degrees);
    if (mate.size() != g.mate_.size()) throw InvariantViolation("matching size differs from half-edge count");
    for (std::size_t h = 0; h < mate.size(); ++h) {
      if (mate[h] >= mate.size() || mate[h] == h || mate[mate[h]] != h)
        throw InvariantViolation("matching is not a fixed-point-free involution at half-edge " + std::to_string(h));
    }
    g.mate_ = std::move(mate);
    return g;
  }

  /// Builds a graph from an explicit edge list on n vertices (degrees follow from the edges).
  static HalfEdgeGraph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
    std::vector<int> deg(n, 0);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw DomainError("edge endpoint out of range");
      ++deg[u];
      ++deg[v];
    }
    HalfEdgeGraph g(deg);
    std::vector<std::uint32_t> used(n, 0);
    for (const auto& [u, v] : edges) {
      const HalfEdge a = g.first_[u] + used[u]++;
      const HalfEdge b = g.first_[v] + used[v]++;
      g.mate_[a] = b;
      g.mate_[b] = a;
    }
    return g;
  }

  std::size_t vertex_count() const { return first_.size(); }
  std::size_t half_edge_count() const { return mate_.size(); }
  std::size_t alive_count() const {
    return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), std::uint8_t{1}));
  }

  bool alive(Vertex v) const { return alive_[v] != 0; }
  int degree(Vertex v) const { return degree_[v]; }
  Label label(Vertex v) const { return label_[v]; }
  HalfEdge first(Vertex v) const { return first_[v]; }
  std::uint32_t slots(Vertex v) const { return slots_[v]; }
  Vertex owner(HalfEdge h) const { return owner_[h]; }
  HalfEdge mate(HalfEdge h) const { return mate_[h]; }
  bool half_edge_alive(HalfEdge h) const { return half_alive_[h] != 0; }
  bool matched() const {
    return std::none_of(mate_.begin(), mate_.end(), [](HalfEdge m) { return m == kUnmatched; });
  }

  /// Alive neighbours of v, one entry per alive half-edge (loops list v twice).
  template <class F>
  void for_each_neighbor(Vertex v, F&& f) const {
    for (std::uint32_t i = 0; i < slots_[v]; ++i) {
      const HalfEdge h = first_[v] + i;
      if (half_alive_[h]) f(owner_[mate_[h]]);
    }
  }

  std::vector<int> degrees() const { return degree_; }

  void set_matching(std::vector<HalfEdge> mate) {
    if (mate.size() != mate_.size()) throw InvariantViolation("matching size differs from half-edge count");
    mate_ = std::move(mate);
  }

  void mark_red(Vertex v) { label_[v] = Label::red; }

  /// Deletes v together with every incident edge.
  void remove_vertex(Vertex v) {
    if (!alive_[v]) return;
    for (std::uint32_t i = 0; i < slots_[v]; ++i) {
      const HalfEdge h = first_[v] + i;
      if (!half_alive_[h]) continue;
      const HalfEdge m = mate_[h];
      half_alive_[h] = 0;
      half_alive_[m] = 0;
      --degree_[v];
      --degree_[owner_[m]];
    }
    alive_[v] = 0;
    degree_[v] = 0;
  }

  void remove_vertices(std::span<const Vertex> vs) {
    for (Vertex v : vs) remove_vertex(v);
  }

  /// Splits alive vertex v into degree-one red vertices: v keeps its first
  /// alive half-edge, every other alive half-edge gets a new vertex.
  void explode(Vertex v) {
    if (!alive_[v]) throw DomainError("explode: vertex " + std::to_string(v) + " is not alive");
    if (degree_[v] < 1) throw DomainError("explode: vertex " + std::to_string(v) + " has degree 0");
    bool kept = false;
    const HalfEdge begin = first_[v];
    const std::uint32_t count = slots_[v];
    for (std::uint32_t i = 0; i < count; ++i) {
      const HalfEdge h = begin + i;
      if (!half_alive_[h]) continue;
      if (!kept) {
        first_[v] = h;
        slots_[v] = 1;
        degree_[v] = 1;
        label_[v] = Label::red;
        kept = true;
        continue;
      }
      const auto nv = static_cast<Vertex>(first_.size());
      first_.push_back(h);
      slots_.push_back(1);
      degree_.push_back(1);
      alive_.push_back(1);
      label_.push_back(Label::red);
      owner_[h] = nv;
    }
  }

  /// Alive edges as sorted (min, max) endpoint pairs with multiplicity.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (HalfEdge h = 0; h < mate_.size(); ++h) {
      if (!half_alive_[h] || mate_[h] < h) continue;
      const Vertex a = owner_[h], b = owner_[mate_[h]];
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Vertex> alive_vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < vertex_count(); ++v)
      if (alive_[v]) out.push_back(v);
    return out;
  }

 private:
  std::vector<HalfEdge> first_;
  std::vector<std::uint32_t> slots_;
  std::vector<int> degree_;
  std::vector<std::uint8_t> alive_;
  std::vector<Label> label_;
  std::vector<Vertex> owner_;
  std::vector<HalfEdge> mate_;
  std::vector<std::uint8_t> half_alive_;
};

/// I.i.d. degrees from p; an odd total is repaired by adding one to a uniformly chosen vertex.
inline std::vector<int> sample_degree_sequence(const DegreeDistribution& p, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DomainError("sample_degree_sequence: n must be at least 2");
  Rng rng = make_rng(seed, Stream::degrees);
  const AliasTable table(p.masses());
  std::vector<int> d(n);
  long long total = 0;
  for (auto& x : d) {
    x = static_cast<int>(table(rng));
    total += x;
  }
  if (total % 2 != 0) ++d[static_cast<std::size_t>(uniform_below(rng, n))];
  return d;
}

/// Configuration model: uniform perfect matching of the half-edges
/// (Fisher-Yates shuffle, then consecutive pairs).
inline HalfEdgeGraph sample_cm(std::span<const int> degrees, std::uint64_t seed) {
  long long total = 0;
  for (int d : degrees) total += d;
  if (total % 2 != 0) throw ParityError("sample_cm: degree sum " + std::to_string(total) + " is odd");
  HalfEdgeGraph g(degrees);
  Rng rng = make_rng(seed, Stream::matching);
  std::vector<HalfEdge> order(g.half_edge_count());
  std::iota(order.begin(), order.end(), HalfEdge{0});
  shuffle(std::span<HalfEdge>(order), rng);
  std::vector<HalfEdge> mate(order.size());
  for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
    mate[order[i]] = order[i + 1];
    mate[order[i + 1]] = order[i];
  }
  g.set_matching(std::move(mate));
  return g;
}

enum class RemovalConvention {
  empirical,  // floor(n_i r_i) vertices of degree i
  limiting,   // floor(n p_i r_i) vertices of degree i
};

namespace detail {
inline std::size_t floor_count(double x) { return static_cast<std::size_t>(std::floor(x + 1e-9)); }
}  // namespace detail

/// Vertices chosen for removal by an alpha-sequence, per degree class, uniformly without replacement.
inline std::vector<Vertex> select_by_alpha_sequence(const HalfEdgeGraph& g, const AlphaSequence& r,
                                                    RemovalConvention convention, std::uint64_t seed,
                                                    const DegreeDistribution* p = nullptr) {
  if (convention == RemovalConvention::limiting && p == nullptr)
    throw DomainError("limiting removal convention needs the degree distribution");
  std::map<int, std::vector<Vertex>> classes;
  std::size_t n = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!g.alive(v)) continue;
    ++n;
    classes[g.degree(v)].push_back(v);
  }
  Rng rng = make_rng(seed, Stream::removal);
  std::vector<Vertex> victims;
  for (auto& [d, members] : classes) {
    const double share = convention == RemovalConvention::empirical
                             ? static_cast<double>(members.size()) * r[d]
                             : static_cast<double>(n) * (*p)[d] * r[d];
    const std::size_t m = detail::floor_count(share);
    if (m > members.size()) {
      throw InfeasibleRemoval("remove " + std::to_string(m) + " vertices of degree " + std::to_string(d) +
                              " but only " + std::to_string(members.size()) + " exist");
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, members.size() - i));
      std::swap(members[i], members[j]);
      victims.push_back(members[i]);
    }
  }
  std::sort(victims.begin(), victims.end());
  return victims;
}

inline HalfEdgeGraph remove_by_alpha_sequence(HalfEdgeGraph g, const AlphaSequence& r, RemovalConvention convention,
                                              std::uint64_t seed, const DegreeDistribution* p = nullptr) {
  const auto victims = select_by_alpha_sequence(g, r, convention, seed, p);
  g.remove_vertices(victims);
  return g;
}

enum class Side { top, bottom };

/// The floor(alpha n) alive vertices of highest (top) or lowest (bottom)
/// degree, ties broken by a uniform random permutation.
inline std::vector<Vertex> select_quantile_fraction(const HalfEdgeGraph& g, double alpha, Side side,
                                                    std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("remove_quantile_fraction: alpha outside [0, 1]");
  std::vector<Vertex> order = g.alive_vertices();
  const std::size_t m = detail::floor_count(alpha * static_cast<double>(order.size()));
  Rng rng = make_rng(seed, Stream::ties);
  shuffle(std::span<Vertex>(order), rng);
  if (side == Side::top)
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
  else
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
  order.resize(std::min(m, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

inline HalfEdgeGraph remove_quantile_fraction(HalfEdgeGraph g, double alpha, Side side, std::uint64_t seed) {
  const auto victims = select_quantile_fraction(g, alpha, side, seed);
  g.remove_vertices(victims);
  return g;
}

/// Replaces every victim of degree d by d red degree-one vertices holding its half-edges.
inline HalfEdgeGraph explode_vertices(HalfEdgeGraph g, std::span<const Vertex> victims) {
  for (Vertex v : victims) {
    if (v >= g.vertex_count()) throw DomainError("explode_vertices: vertex id out of range");
    g.explode(v);
  }
  return g;
}

/// Removes all red vertices and their single edges.
inline HalfEdgeGraph strip_red(HalfEdgeGraph g) {
  std::vector<Vertex> red;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!g.alive(v) || g.label(v) != Label::red) continue;
    if (g.degree(v) != 1)
      throw InvariantViolation("strip_red: red vertex " + std::to_string(v) + " has degree " +
                               std::to_string(g.degree(v)));
    red.push_back(v);
  }
  g.remove_vertices(red);
  return g;
}

struct ComponentSummary {
  std::size_t vertex_count = 0;        // alive vertices
  std::size_t component_count = 0;     // K
  std::size_t giant_vertices = 0;      // v(C1)
  std::size_t giant_edges = 0;         // e(C1); a loop counts once
  std::map<int, std::size_t> giant_per_degree;  // degree -> v_j(C1)
  std::map<std::size_t, std::size_t> sizes;     // component size -> multiplicity
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::uint32_t size_of(std::uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/// Component statistics of the alive part of g. Among equally large components
/// the one containing the smallest vertex id is the giant.
inline ComponentSummary components(const HalfEdgeGraph& g) {
  const std::size_t n = g.vertex_count();
  DisjointSets ds(n);
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    if (!g.half_edge_alive(h)) continue;
    const HalfEdge m = g.mate(h);
    if (m < h) continue;
    ds.unite(g.owner(h), g.owner(m));
  }
  ComponentSummary s;
  std::uint32_t giant_root = 0;
  std::size_t giant_size = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!g.alive(v)) continue;
    ++s.vertex_count;
    const std::uint32_t root = ds.find(v);
    if (root == v) {
      ++s.component_count;
      const std::size_t size = ds.size_of(v);
      ++s.sizes[size];
    }
    const std::size_t size = ds.size_of(root);
    if (size > giant_size) {
      giant_size = size;
      giant_root = root;
    }
  }
  s.giant_vertices = giant_size;
  std::size_t giant_half_edges = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!g.alive(v) || giant_size == 0 || ds.find(v) != giant_root) continue;
    giant_half_edges += static_cast<std::size_t>(g.degree(v));
    ++s.giant_per_degree[g.degree(v)];
  }
  s.giant_edges = giant_half_edges / 2;
  return s;
}

/// Text dump: `v <id> <degree> <label>` per alive vertex, then `e <u> <v>` per edge.
inline void write_dump(const HalfEdgeGraph& g, std::ostream& os) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!g.alive(v)) continue;
    os << "v " << v << ' ' << g.degree(v) << ' ' << (g.label(v) == Label::red ? "red" : "normal") << '\n';
  }
  for (const auto& [a, b] : g.edges()) os << "e " << a << ' ' << b << '\n';
}

/// Reads a dump back. Ids missing from the `v` lines become tombstones; labels are restored.
inline HalfEdgeGraph read_dump(std::istream& is) {
  struct VertexLine {
    Vertex id;
    int degree;
    Label label;
  };
  std::vector<VertexLine> vs;
  std::vector<std::pair<Vertex, Vertex>> es;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    char tag = 0;
    ls >> tag;
    if (tag == 'v') {
      VertexLine v{};
      std::string label;
      if (!(ls >> v.id >> v.degree >> label) || (label != "normal" && label != "red"))
        throw DomainError("graph dump line " + std::to_string(lineno) + ": malformed vertex line");
      v.label = label == "red" ? Label::red : Label::normal;
      vs.push_back(v);
    } else if (tag == 'e') {
      Vertex a = 0, b = 0;
      if (!(ls >> a >> b)) throw DomainError("graph dump line " + std::to_string(lineno) + ": malformed edge line");
      es.emplace_back(a, b);
    } else {
      throw DomainError("graph dump line " + std::to_string(lineno) + ": unknown record '" + std::string(1, tag) +
                        "'");
    }
  }
  std::size_t n = 0;
  for (const auto& v : vs) n = std::max<std::size_t>(n, v.id + 1);
  for (const auto& [a, b] : es) n = std::max<std::size_t>(n, std::max(a, b) + 1);
  HalfEdgeGraph g = HalfEdgeGraph::from_edges(n, es);
  std::vector<std::uint8_t> listed(n, 0);
  for (const auto& v : vs) {
    if (g.degree(v.id) != v.degree)
      throw DomainError("graph dump: vertex " + std::to_string(v.id) + " lists degree " + std::to_string(v.degree) +
                        " but has " + std::to_string(g.degree(v.id)) + " edge ends");
    listed[v.id] = 1;
  }
  std::vector<Vertex> missing;
  for (Vertex v = 0; v < n; ++v)
    if (!listed[v]) missing.push_back(v);
  for (Vertex v : missing)
    if (g.degree(v) != 0) throw DomainError("graph dump: edge touches unlisted vertex " + std::to_string(v));
  g.remove_vertices(missing);
  for (const auto& v : vs)
    if (v.label == Label::red) g.mark_red(v.id);
  return g;
}

}  // namespace cmr
