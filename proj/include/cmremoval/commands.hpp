#pragma once

// Subcommand bodies for the cmremoval tool. Each reads a parsed JSON job and
// writes its report; the return value is the process exit code (0 iff every
// embedded assertion passed).

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cmremoval/centrality.hpp"
#include "cmremoval/harness.hpp"
#include "cmremoval/json_io.hpp"
#include "cmremoval/theory.hpp"

namespace cmr::cli {

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;  // empty: stdout
};

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << text;
}

/// r from {"r": {...}} or {"mode": "top", "alpha": 0.2}; absent means no removal.
inline AlphaSequence sequence_of_job(const DegreeDistribution& p, const Json& j) {
  if (j.contains("r")) {
    if (j.contains("mode")) throw DomainError("job gives both 'r' and 'mode'");
    return sequence_from_json(j.at("r"));
  }
  if (j.contains("mode")) {
    if (!j.contains("alpha")) throw DomainError("job gives 'mode' without 'alpha'");
    return mode_sequence(p, removal_mode_from_string(j.at("mode").get<std::string>()), j.at("alpha").get<double>());
  }
  return AlphaSequence::zero();
}

inline int theory(const Json& job, const GlobalOptions& g) {
  const auto p = distribution_from_json(job.at("p"));
  const auto r = sequence_of_job(p, job);
  const double tol = job.value("tol", kSolverTol);
  Json out = to_json(giant_fractions(p, r, tol));
  if (job.contains("derivative")) {
    const Json& d = job.at("derivative");
    out["derivative"] = to_json(derivative_report(p, r, d.at("k").get<int>(), d.at("l").get<int>(),
                                                  d.value("eps", 0.0), tol));
  }
  write_text(g.out, json_text(out));
  return 0;
}

inline int critical(const Json& job, const GlobalOptions& g) {
  const auto p = distribution_from_json(job.at("p"));
  const auto mode = removal_mode_from_string(job.value("mode", std::string("top")));
  write_text(g.out, json_text(Json{{"alpha_c", critical_alpha(p, mode)}, {"mode", to_string(mode)}}));
  return 0;
}

inline int simulate(const Json& job, const GlobalOptions& g) {
  ExperimentSpec spec = experiment_from_json(job);
  if (job.contains("seed") == false) spec.seed = g.seed;
  const RunReport rep = run(spec, g.threads);
  const std::string csv = rep.csv();
  if (!spec.csv_path.empty()) write_text(spec.csv_path, csv);
  if (!spec.json_path.empty()) write_text(spec.json_path, json_text(to_json(rep)));
  if (spec.csv_path.empty() || !g.out.empty()) write_text(g.out, csv);
  return 0;
}

inline int compare(const Json& job, const GlobalOptions& g) {
  const auto p = distribution_from_json(job.at("p"));
  std::vector<AlphaSequence> seqs;
  for (const auto& s : job.at("sequences")) seqs.push_back(sequence_of_job(p, s));
  const auto table = compare_sequences(p, seqs, job.at("n").get<std::size_t>(), job.value("replicas", std::size_t{1}),
                                       job.value("seed", g.seed), g.threads);
  write_text(g.out, compare_csv(table));
  for (const auto& c : table.checks)
    if (!c.holds) std::cerr << "ordering violated: sequence " << c.lower << " vs " << c.upper << '\n';
  return table.ordering_ok ? 0 : 1;
}

/// Transforms carrying r down to r2 (requires r2 ≼ r) and a replay check.
inline int decompose(const Json& job, const GlobalOptions& g) {
  const auto p = distribution_from_json(job.at("p"));
  const auto r = sequence_from_json(job.at("r"));
  const auto r2 = sequence_from_json(job.at("r2"));
  const auto steps = decompose_to_transforms(p, r, r2);
  Json chain = Json::array();
  AlphaSequence cur = r;
  bool ok = true;
  double prev_rho = giant_fractions(p, cur).rho;
  for (const auto& t : steps) {
    chain.push_back(to_json(t));
    cur = apply_epsilon_transform(p, cur, t);
    const double rho = giant_fractions(p, cur).rho;
    ok = ok && rho >= prev_rho - 1e-9;
    prev_rho = rho;
  }
  double err = 0.0;
  for (int d : p.support()) err = std::max(err, std::abs(cur[d] - r2[d]));
  ok = ok && err <= 1e-12;
  write_text(g.out, json_text(Json{{"transforms", chain}, {"replay_error", err}, {"rho_monotone", ok}}));
  return ok ? 0 : 1;
}

inline std::string summary_csv(std::size_t n, double alpha, std::uint64_t seed, const ComponentSummary& s) {
  std::ostringstream os;
  os << "n,alpha,seed,K,v_giant,e_giant\n"
     << n << ',' << format_real(alpha) << ',' << seed << ',' << s.component_count << ',' << s.giant_vertices << ','
     << s.giant_edges << '\n';
  return os.str();
}

inline int pagerank_kill(const Json& job, const GlobalOptions& g, double c, int N, double threshold,
                         std::size_t consistency_sample) {
  const auto p = distribution_from_json(job.at("p"));
  const auto n = job.at("n").get<std::size_t>();
  const auto seed = job.value("seed", g.seed);
  const auto graph = sample_cm(sample_degree_sequence(p, n, seed), seed);
  const auto scores = finite_radius_pagerank(graph, c, N);
  const auto killed = kill_by_threshold(graph, scores, threshold);
  const double alpha = 1.0 - static_cast<double>(killed.alive_count()) / static_cast<double>(n);
  write_text(g.out, summary_csv(n, alpha, seed, components(killed)));
  if (consistency_sample == 0) return 0;
  const auto rep = killed_ball_consistency_check(graph, scores, threshold, 1, consistency_sample, seed);
  std::cerr << "consistency: " << rep.pairs_examined << " pairs, " << rep.violations << " violations\n";
  return rep.violations == 0 ? 0 : 1;
}

inline int local_limit(const Json& job, const GlobalOptions& g) {
  const auto p = distribution_from_json(job.at("p"));
  const AlphaSequence kill =
      job.contains("threshold") ? degree_threshold_kill(p, job.at("threshold").get<double>()) : sequence_of_job(p, job);
  const auto est = local_limit_estimates(p, kill, job.value("M", std::size_t{10000}),
                                         job.value("samples", std::size_t{100000}), job.value("seed", g.seed));
  write_text(g.out, json_text(to_json(est)));
  return 0;
}

/// Samples one graph (optionally with removal) and emits its component summary.
inline int components_cmd(const Json& job, const GlobalOptions& g, const std::string& dump_path) {
  ExperimentSpec spec;
  spec.p = distribution_from_json(job.at("p"));
  if (job.contains("removal")) {
    Json full = job;
    full["n_grid"] = Json::array({job.at("n")});
    spec = experiment_from_json(full);
  } else {
    spec.removal.kind = RemovalKind::uniform;
    spec.n_grid = {job.at("n").get<std::size_t>()};
  }
  spec.seed = job.value("seed", g.seed);
  spec.validate();
  const std::size_t n = spec.n_grid[0];
  const std::uint64_t seed = item_seed(spec.seed, n, 0);
  const HalfEdgeGraph graph = realize(spec, n, seed);
  const double alpha = 1.0 - static_cast<double>(graph.alive_count()) / static_cast<double>(n);
  write_text(g.out, summary_csv(n, alpha, seed, components(graph)));
  if (!dump_path.empty()) {
    std::ofstream os(dump_path);
    if (!os) throw DomainError("cannot write '" + dump_path + "'");
    write_dump(graph, os);
  }
  return 0;
}

}  // namespace cmr::cli
