#pragma once

// Strictly local centralities (degree, finite-radius PageRank), threshold
// killing, rooted-ball digests and Monte Carlo estimates on the killed
// unimodular branching process.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmremoval/degrees.hpp"
#include "cmremoval/errors.hpp"
#include "cmremoval/graph.hpp"
#include "cmremoval/rng.hpp"

namespace cmr {

enum class CentralityKind { degree, degree_rank, finite_pagerank };

inline std::string to_string(CentralityKind k) {
  switch (k) {
    case CentralityKind::degree: return "degree";
    case CentralityKind::degree_rank: return "degree_rank";
    case CentralityKind::finite_pagerank: return "finite_pagerank";
  }
  return "?";
}

/// Per-vertex scores (0 for removed ids). `radius` is the ball radius the score depends on.
struct CentralityScores {
  std::vector<double> values;
  int radius = 0;
  CentralityKind kind = CentralityKind::degree;
};

/// R(v) = deg(v).
inline CentralityScores degree_centrality(const HalfEdgeGraph& g) {
  CentralityScores s{std::vector<double>(g.vertex_count(), 0.0), 1, CentralityKind::degree};
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.alive(v)) s.values[v] = g.degree(v);
  return s;
}

/// Rank by degree divided by the number of alive vertices; ties in uniform random order.
inline CentralityScores degree_rank_centrality(const HalfEdgeGraph& g, std::uint64_t seed) {
  CentralityScores s{std::vector<double>(g.vertex_count(), 0.0), 1, CentralityKind::degree_rank};
  std::vector<Vertex> order = g.alive_vertices();
  Rng rng = make_rng(seed, Stream::ties);
  shuffle(std::span<Vertex>(order), rng);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
  const double n = static_cast<double>(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) s.values[order[i]] = static_cast<double>(i + 1) / n;
  return s;
}

/// Graph-normalized truncated PageRank R = (1 - c) sum_{k=0}^{N} c^k 1 P^k with
/// P_{ij} = e_ij / d_i (a self-loop adds 2 to e_ii) and degree-0 vertices absorbing.
inline CentralityScores finite_radius_pagerank(const HalfEdgeGraph& g, double c, int N) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("finite_radius_pagerank: c must lie in (0, 1)");
  if (N < 0) throw DomainError("finite_radius_pagerank: N must be >= 0");
  const std::size_t n = g.vertex_count();
  std::vector<double> x(n, 0.0), next(n, 0.0), acc(n, 0.0);
  for (Vertex v = 0; v < n; ++v)
    if (g.alive(v)) x[v] = 1.0;
  double weight = 1.0 - c;
  for (int k = 0; k <= N; ++k) {
    for (Vertex v = 0; v < n; ++v) acc[v] += weight * x[v];
    if (k == N) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (Vertex v = 0; v < n; ++v) {
      if (!g.alive(v) || x[v] == 0.0) continue;
      const int d = g.degree(v);
      if (d == 0) {
        next[v] += x[v];
        continue;
      }
      const double share = x[v] / d;
      g.for_each_neighbor(v, [&](Vertex w) { next[w] += share; });
    }
    x.swap(next);
    weight *= c;
  }
  // A score needs the degrees of vertices N steps away, hence radius N + 1.
  return {std::move(acc), N + 1, CentralityKind::finite_pagerank};
}

/// The r-killed graph: removes every alive vertex with R(v) > r.
inline HalfEdgeGraph kill_by_threshold(HalfEdgeGraph g, const CentralityScores& scores, double r) {
  if (scores.values.size() != g.vertex_count()) throw DomainError("kill_by_threshold: scores do not match graph");
  std::vector<Vertex> victims;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.alive(v) && scores.values[v] > r) victims.push_back(v);
  g.remove_vertices(victims);
  return g;
}

namespace detail {

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t x) {
  return splitmix64(h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t hash_sorted(std::uint64_t seed, std::vector<std::uint64_t>& xs) {
  std::sort(xs.begin(), xs.end());
  std::uint64_t h = hash_combine(seed, xs.size());
  for (auto x : xs) h = hash_combine(h, x);
  return h;
}

}  // namespace detail

struct BallHash {
  std::uint64_t digest = 0;
  int radius = 0;
  bool operator==(const BallHash&) const = default;
};

/// Digest reserved for a root that is not alive (used for killed roots).
inline constexpr std::uint64_t kRemovedRootDigest = 0x6b696c6c6564ULL;

/// Refinement digest of the induced ball of the given radius around v:
/// labels start as (is_root, degree inside the ball) and are refined `radius`
/// times by the sorted multiset of neighbour labels. Isomorphic rooted balls
/// always get equal digests.
inline BallHash ball_hash(const HalfEdgeGraph& g, Vertex v, int radius) {
  if (radius < 0) throw DomainError("ball_hash: radius must be >= 0");
  if (v >= g.vertex_count() || !g.alive(v)) return {kRemovedRootDigest, radius};
  std::unordered_map<Vertex, int> dist{{v, 0}};
  std::vector<Vertex> ball{v};
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Vertex u = ball[i];
    const int du = dist[u];
    if (du == radius) continue;
    g.for_each_neighbor(u, [&](Vertex w) {
      if (dist.emplace(w, du + 1).second) ball.push_back(w);
    });
  }
  std::unordered_map<Vertex, std::size_t> index;
  for (std::size_t i = 0; i < ball.size(); ++i) index.emplace(ball[i], i);
  std::vector<std::vector<std::size_t>> adj(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    g.for_each_neighbor(ball[i], [&](Vertex w) {
      if (auto it = index.find(w); it != index.end()) adj[i].push_back(it->second);
    });
  }
  std::vector<std::uint64_t> label(ball.size()), fresh(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i)
    label[i] = detail::hash_combine(detail::hash_combine(0x62616c6cULL, i == 0), adj[i].size());
  std::vector<std::uint64_t> scratch;
  for (int round = 0; round < radius; ++round) {
    for (std::size_t i = 0; i < ball.size(); ++i) {
      scratch.clear();
      for (std::size_t j : adj[i]) scratch.push_back(label[j]);
      fresh[i] = detail::hash_sorted(label[i], scratch);
    }
    label.swap(fresh);
  }
  scratch.assign(label.begin(), label.end());
  return {detail::hash_combine(detail::hash_sorted(label[0], scratch), static_cast<std::uint64_t>(radius)), radius};
}

struct ConsistencyReport {
  int probe_radius = 0;       // l
  int match_radius = 0;       // 2 N + l
  std::size_t sampled_vertices = 0;
  std::size_t pairs_examined = 0;  // pairs whose (2N + l)-balls agree
  std::size_t violations = 0;      // ... but whose killed l-balls differ
};

/// Samples vertices, groups them by the digest of their (2N + l)-ball and checks
/// that agreeing pairs also agree on the l-ball of the r-killed graph.
inline ConsistencyReport killed_ball_consistency_check(const HalfEdgeGraph& g, const CentralityScores& scores,
                                                       double threshold, int probe_radius, std::size_t sample,
                                                       std::uint64_t seed, std::size_t max_pairs = 20000) {
  if (probe_radius < 0) throw DomainError("killed_ball_consistency_check: probe radius must be >= 0");
  ConsistencyReport rep;
  rep.probe_radius = probe_radius;
  rep.match_radius = 2 * scores.radius + probe_radius;
  std::vector<Vertex> alive = g.alive_vertices();
  if (alive.empty()) return rep;
  const HalfEdgeGraph killed = kill_by_threshold(g, scores, threshold);
  Rng rng = make_rng(seed, Stream::centrality);
  shuffle(std::span<Vertex>(alive), rng);
  if (alive.size() > sample) alive.resize(sample);
  rep.sampled_vertices = alive.size();

  std::map<std::uint64_t, std::vector<Vertex>> buckets;
  for (Vertex v : alive) buckets[ball_hash(g, v, rep.match_radius).digest].push_back(v);
  std::size_t pairable = 0;
  for (const auto& [digest, members] : buckets) pairable += members.size() > 1;
  const std::size_t per_bucket = std::max<std::size_t>(1, max_pairs / std::max<std::size_t>(1, pairable));
  for (auto& [digest, members] : buckets) {
    if (members.size() < 2) continue;
    std::vector<std::uint64_t> killed_digest(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      killed_digest[i] = ball_hash(killed, members[i], probe_radius).digest;
    std::size_t taken = 0;
    for (std::size_t i = 0; i < members.size() && taken < per_bucket; ++i) {
      for (std::size_t j = i + 1; j < members.size() && taken < per_bucket; ++j, ++taken) {
        ++rep.pairs_examined;
        rep.violations += killed_digest[i] != killed_digest[j];
      }
    }
  }
  return rep;
}

/// Histogram of killed-graph ball digests over the alive vertices of the original graph.
inline std::map<std::uint64_t, std::size_t> digest_histogram(const HalfEdgeGraph& original,
                                                             const HalfEdgeGraph& killed, int radius) {
  std::map<std::uint64_t, std::size_t> h;
  for (Vertex v = 0; v < original.vertex_count(); ++v)
    if (original.alive(v)) ++h[ball_hash(killed, v, radius).digest];
  return h;
}

/// Total variation distance between two empirical histograms.
inline double total_variation(const std::map<std::uint64_t, std::size_t>& a,
                              const std::map<std::uint64_t, std::size_t>& b) {
  double na = 0.0, nb = 0.0;
  for (const auto& [k, c] : a) na += static_cast<double>(c);
  for (const auto& [k, c] : b) nb += static_cast<double>(c);
  if (na == 0.0 || nb == 0.0) return na == nb ? 0.0 : 1.0;
  std::map<std::uint64_t, double> diff;
  for (const auto& [k, c] : a) diff[k] += static_cast<double>(c) / na;
  for (const auto& [k, c] : b) diff[k] -= static_cast<double>(c) / nb;
  double tv = 0.0;
  for (const auto& [k, d] : diff) tv += std::abs(d);
  return 0.5 * tv;
}

/// 0/1 sequence killing every degree above `threshold`.
inline AlphaSequence degree_threshold_kill(const DegreeDistribution& p, double threshold) {
  std::vector<double> r(static_cast<std::size_t>(p.max_degree()) + 1, 0.0);
  for (int j = 1; j <= p.max_degree(); ++j) r[static_cast<std::size_t>(j)] = j > threshold ? 1.0 : 0.0;
  return AlphaSequence(std::move(r));
}

struct LocalLimitEstimate {
  double zeta = 0.0;
  double inv_component_mean = 0.0;
  double zeta_stderr = 0.0;
  double inv_component_stderr = 0.0;
  std::size_t M = 0;
  std::size_t samples = 0;
};

/// Monte Carlo over the killed local limit: root degree ~ p, each further
/// vertex reached through a half-edge has degree j with probability j p_j / E[D]
/// and is absent when kill_j = 1. A component larger than M counts as infinite.
/// Killed roots contribute 0 to both functionals.
inline LocalLimitEstimate local_limit_estimates(const DegreeDistribution& p, const AlphaSequence& kill,
                                                std::size_t M, std::size_t samples, std::uint64_t seed) {
  for (int j = 1; j <= p.max_degree(); ++j)
    if (kill[j] != 0.0 && kill[j] != 1.0) throw DomainError("local_limit_estimates: kill must be 0/1-valued");
  if (samples == 0) throw DomainError("local_limit_estimates: samples must be positive");
  if (M == 0) throw DomainError("local_limit_estimates: M must be positive");
  const AliasTable root(p.masses());
  std::vector<double> biased(p.masses().begin(), p.masses().end());
  for (std::size_t j = 0; j < biased.size(); ++j) biased[j] *= static_cast<double>(j);
  const AliasTable child(biased);
  Rng rng = make_rng(seed, Stream::local_limit);

  double s_zeta = 0.0, s_zeta2 = 0.0, s_inv = 0.0, s_inv2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const int d = static_cast<int>(root(rng));
    if (kill[d] == 1.0) continue;
    std::size_t size = 1;
    std::size_t pending = static_cast<std::size_t>(d);
    while (pending > 0 && size <= M) {
      --pending;
      const int j = static_cast<int>(child(rng));
      if (kill[j] == 1.0) continue;
      ++size;
      pending += static_cast<std::size_t>(j - 1);
    }
    if (size > M) {
      s_zeta += 1.0;
      s_zeta2 += 1.0;
    } else {
      const double inv = 1.0 / static_cast<double>(size);
      s_inv += inv;
      s_inv2 += inv * inv;
    }
  }
  const double n = static_cast<double>(samples);
  LocalLimitEstimate out;
  out.M = M;
  out.samples = samples;
  out.zeta = s_zeta / n;
  out.inv_component_mean = s_inv / n;
  auto stderr_of = [&](double sum, double sum2) {
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return std::sqrt(var / n);
  };
  out.zeta_stderr = stderr_of(s_zeta, s_zeta2);
  out.inv_component_stderr = stderr_of(s_inv, s_inv2);
  return out;
}

}  // namespace cmr
