#pragma once

// Experiment runner: sample, remove, measure, compare against theory.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cmremoval/centrality.hpp"
#include "cmremoval/degrees.hpp"
#include "cmremoval/errors.hpp"
#include "cmremoval/graph.hpp"
#include "cmremoval/json_io.hpp"
#include "cmremoval/rng.hpp"
#include "cmremoval/theory.hpp"

namespace cmr {

enum class RemovalKind { alpha_sequence, top, bottom, uniform, pagerank };

inline std::string to_string(RemovalKind k) {
  switch (k) {
    case RemovalKind::alpha_sequence: return "alpha_sequence";
    case RemovalKind::top: return "top";
    case RemovalKind::bottom: return "bottom";
    case RemovalKind::uniform: return "uniform";
    case RemovalKind::pagerank: return "pagerank";
  }
  return "?";
}

inline RemovalKind removal_kind_from_string(const std::string& s) {
  for (auto k : {RemovalKind::alpha_sequence, RemovalKind::top, RemovalKind::bottom, RemovalKind::uniform,
                 RemovalKind::pagerank})
    if (to_string(k) == s) return k;
  throw DomainError("unknown removal kind '" + s + "'");
}

struct Removal {
  RemovalKind kind = RemovalKind::uniform;
  AlphaSequence r;  // alpha_sequence
  RemovalConvention convention = RemovalConvention::empirical;
  double alpha = 0.0;  // top, bottom, uniform
  double c = 0.85;     // pagerank
  int N = 2;
  double threshold = 1.0;

  bool degree_based() const { return kind != RemovalKind::pagerank; }
};

struct ExperimentSpec {
  DegreeDistribution p;
  Removal removal;
  std::vector<std::size_t> n_grid;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string json_path;

  void validate() const {
    if (n_grid.empty()) throw DomainError("experiment: n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 2) throw DomainError("experiment: n must be at least 2");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("experiment: n_grid must be strictly increasing");
    }
    if (replicas < 1) throw DomainError("experiment: replicas must be >= 1");
    const auto& rm = removal;
    if (rm.kind == RemovalKind::top || rm.kind == RemovalKind::bottom || rm.kind == RemovalKind::uniform) {
      if (!(rm.alpha >= 0.0 && rm.alpha <= 1.0)) throw DomainError("experiment: alpha outside [0, 1]");
    }
    if (rm.kind == RemovalKind::pagerank) {
      if (!(rm.c > 0.0 && rm.c < 1.0)) throw DomainError("experiment: pagerank c outside (0, 1)");
      if (rm.N < 0) throw DomainError("experiment: pagerank radius must be >= 0");
    }
  }

  /// The theory counterpart of a degree-class removal.
  AlphaSequence theory_sequence() const {
    switch (removal.kind) {
      case RemovalKind::alpha_sequence: return removal.r;
      case RemovalKind::top: return mode_sequence(p, RemovalMode::top, removal.alpha);
      case RemovalKind::bottom: return mode_sequence(p, RemovalMode::bottom, removal.alpha);
      case RemovalKind::uniform: return mode_sequence(p, RemovalMode::uniform, removal.alpha);
      case RemovalKind::pagerank: break;
    }
    throw DomainError("experiment: pagerank removal has no alpha-sequence");
  }
};

inline ExperimentSpec experiment_from_json(const Json& j) {
  ExperimentSpec s;
  if (!j.contains("p")) throw DomainError("experiment: missing 'p'");
  s.p = distribution_from_json(j.at("p"));
  if (!j.contains("removal")) throw DomainError("experiment: missing 'removal'");
  const Json& rj = j.at("removal");
  s.removal.kind = removal_kind_from_string(rj.at("kind").get<std::string>());
  switch (s.removal.kind) {
    case RemovalKind::alpha_sequence:
      s.removal.r = sequence_from_json(rj.at("r"));
      if (rj.contains("convention")) {
        const auto conv = rj.at("convention").get<std::string>();
        if (conv == "empirical") s.removal.convention = RemovalConvention::empirical;
        else if (conv == "limiting") s.removal.convention = RemovalConvention::limiting;
        else throw DomainError("experiment: unknown convention '" + conv + "'");
      }
      break;
    case RemovalKind::pagerank:
      s.removal.c = rj.value("c", 0.85);
      s.removal.N = rj.value("N", 2);
      s.removal.threshold = rj.at("threshold").get<double>();
      break;
    default: s.removal.alpha = rj.at("alpha").get<double>(); break;
  }
  s.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  s.replicas = j.value("replicas", std::size_t{1});
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("outputs")) {
    s.csv_path = j.at("outputs").value("csv", std::string{});
    s.json_path = j.at("outputs").value("json", std::string{});
  }
  s.validate();
  return s;
}

struct RunRow {
  std::size_t n = 0;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;  // realized removed fraction
  ComponentSummary summary;
};

struct Deviation {
  std::size_t n = 0;
  double v_mean = 0.0;  // mean v(C1)/n over replicas
  double e_mean = 0.0;  // mean e(C1)/n
  double v_gap = 0.0;   // |v_mean - rho|
  double e_gap = 0.0;   // |e_mean - e|
};

struct RunReport {
  std::vector<RunRow> rows;  // n-major, replica-minor
  std::optional<TheoryReport> theory;
  std::vector<Deviation> deviations;

  std::string csv() const {
    std::ostringstream os;
    os << "n,alpha,seed,K,v_giant,e_giant\n";
    for (const auto& row : rows) {
      os << row.n << ',' << format_real(row.alpha) << ',' << row.seed << ',' << row.summary.component_count << ','
         << row.summary.giant_vertices << ',' << row.summary.giant_edges << '\n';
    }
    return os.str();
  }
};

inline std::uint64_t item_seed(std::uint64_t seed, std::size_t n, std::size_t replica) {
  return derive_seed(derive_seed(seed, n), replica);
}

/// Runs f(i) for i in [0, count) on up to `threads` workers; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace detail {

inline HalfEdgeGraph remove_uniform_fraction(HalfEdgeGraph g, double alpha, std::uint64_t seed) {
  std::vector<Vertex> alive = g.alive_vertices();
  const std::size_t m = floor_count(alpha * static_cast<double>(alive.size()));
  Rng rng = make_rng(seed, Stream::removal);
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, alive.size() - i));
    std::swap(alive[i], alive[j]);
  }
  g.remove_vertices(std::span<const Vertex>(alive.data(), m));
  return g;
}

}  // namespace detail

/// Samples degrees and a matching of size n, then applies the removal.
inline HalfEdgeGraph realize(const ExperimentSpec& spec, std::size_t n, std::uint64_t seed) {
  HalfEdgeGraph g = sample_cm(sample_degree_sequence(spec.p, n, seed), seed);
  const auto& rm = spec.removal;
  switch (rm.kind) {
    case RemovalKind::alpha_sequence: return remove_by_alpha_sequence(std::move(g), rm.r, rm.convention, seed, &spec.p);
    case RemovalKind::top: return remove_quantile_fraction(std::move(g), rm.alpha, Side::top, seed);
    case RemovalKind::bottom: return remove_quantile_fraction(std::move(g), rm.alpha, Side::bottom, seed);
    case RemovalKind::uniform: return detail::remove_uniform_fraction(std::move(g), rm.alpha, seed);
    case RemovalKind::pagerank: {
      const auto scores = finite_radius_pagerank(g, rm.c, rm.N);
      return kill_by_threshold(std::move(g), scores, rm.threshold);
    }
  }
  return g;
}

/// One replica: realize, summarize.
inline RunRow run_one(const ExperimentSpec& spec, std::size_t n, std::size_t replica) {
  RunRow row;
  row.n = n;
  row.replica = replica;
  row.seed = item_seed(spec.seed, n, replica);
  const HalfEdgeGraph g = realize(spec, n, row.seed);
  row.alpha = 1.0 - static_cast<double>(g.alive_count()) / static_cast<double>(n);
  row.summary = components(g);
  return row;
}

inline RunReport run(const ExperimentSpec& spec, unsigned threads = 1) {
  spec.validate();
  RunReport rep;
  if (spec.removal.degree_based()) rep.theory = giant_fractions(spec.p, spec.theory_sequence());
  const std::size_t total = spec.n_grid.size() * spec.replicas;
  rep.rows.resize(total);
  parallel_for(total, threads, [&](std::size_t i) {
    rep.rows[i] = run_one(spec, spec.n_grid[i / spec.replicas], i % spec.replicas);
  });
  for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
    Deviation d;
    d.n = spec.n_grid[k];
    for (std::size_t i = 0; i < spec.replicas; ++i) {
      const auto& s = rep.rows[k * spec.replicas + i].summary;
      d.v_mean += static_cast<double>(s.giant_vertices) / static_cast<double>(d.n);
      d.e_mean += static_cast<double>(s.giant_edges) / static_cast<double>(d.n);
    }
    d.v_mean /= static_cast<double>(spec.replicas);
    d.e_mean /= static_cast<double>(spec.replicas);
    if (rep.theory) {
      d.v_gap = std::abs(d.v_mean - rep.theory->rho);
      d.e_gap = std::abs(d.e_mean - rep.theory->e);
    }
    rep.deviations.push_back(d);
  }
  return rep;
}

inline Json to_json(const RunReport& rep) {
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"replica", row.replica},
                        {"seed", row.seed},
                        {"alpha", row.alpha},
                        {"K", row.summary.component_count},
                        {"v_giant", row.summary.giant_vertices},
                        {"e_giant", row.summary.giant_edges}});
  }
  Json dev = Json::array();
  for (const auto& d : rep.deviations) {
    Json x{{"n", d.n}, {"v_mean", d.v_mean}, {"e_mean", d.e_mean}};
    if (rep.theory) {
      x["v_gap"] = d.v_gap;
      x["e_gap"] = d.e_gap;
    }
    dev.push_back(std::move(x));
  }
  Json j{{"rows", rows}};
  if (rep.theory) j["theory"] = to_json(*rep.theory);
  j["deviations"] = dev;
  return j;
}

// Comparison tables

struct CompareRow {
  std::size_t index = 0;  // position in the input list
  double alpha = 0.0;
  double rho = 0.0;
  double e = 0.0;
  double v_mean = 0.0;
  double e_mean = 0.0;
};

struct OrderingCheck {
  std::size_t lower = 0;  // input index of the sequence removing higher degrees
  std::size_t upper = 0;
  bool holds = true;
};

struct CompareTable {
  std::vector<CompareRow> rows;  // sorted by theory rho, ties by input index
  std::vector<OrderingCheck> checks;
  bool ordering_ok = true;
};

/// Theory and simulation for several removals of the same fraction. For every
/// comparable pair r ≼ r2 it asserts rho(r2) <= rho(r) and e(r2) <= e(r).
inline CompareTable compare_sequences(const DegreeDistribution& p, const std::vector<AlphaSequence>& sequences,
                                      std::size_t n, std::size_t replicas, std::uint64_t seed, unsigned threads = 1,
                                      double tol = 1e-9) {
  CompareTable table;
  if (sequences.empty()) return table;
  const double alpha0 = alpha_of(p, sequences.front());
  for (const auto& r : sequences)
    if (std::abs(alpha_of(p, r) - alpha0) > 1e-9)
      throw DomainError("compare_sequences: sequences remove different fractions (" + format_real(alpha0) + " vs " +
                        format_real(alpha_of(p, r)) + ")");

  std::vector<TheoryReport> theory;
  for (const auto& r : sequences) theory.push_back(giant_fractions(p, r));
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    ExperimentSpec spec;
    spec.p = p;
    spec.removal.kind = RemovalKind::alpha_sequence;
    spec.removal.r = sequences[i];
    spec.n_grid = {n};
    spec.replicas = replicas;
    spec.seed = seed;
    const RunReport rep = run(spec, threads);
    table.rows.push_back(
        {i, theory[i].alpha, theory[i].rho, theory[i].e, rep.deviations[0].v_mean, rep.deviations[0].e_mean});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const CompareRow& a, const CompareRow& b) { return a.rho < b.rho; });

  for (std::size_t i = 0; i < sequences.size(); ++i) {
    for (std::size_t j = 0; j < sequences.size(); ++j) {
      if (i == j || !dominates(p, sequences[i], sequences[j])) continue;
      if (j < i && dominates(p, sequences[j], sequences[i])) continue;  // equivalent pair, checked once
      OrderingCheck c{j, i, theory[j].rho <= theory[i].rho + tol && theory[j].e <= theory[i].e + tol};
      table.ordering_ok = table.ordering_ok && c.holds;
      table.checks.push_back(c);
    }
  }
  return table;
}

inline std::string compare_csv(const CompareTable& t) {
  std::ostringstream os;
  os << "index,alpha,rho,e,v_mean,e_mean\n";
  for (const auto& r : t.rows)
    os << r.index << ',' << format_real(r.alpha) << ',' << format_real(r.rho) << ',' << format_real(r.e) << ','
       << format_real(r.v_mean) << ',' << format_real(r.e_mean) << '\n';
  return os.str();
}

}  // namespace cmr
