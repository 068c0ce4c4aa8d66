// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cmremoval/centrality.hpp"
#include "cmremoval/harness.hpp"
#include "random_inputs.hpp"

using namespace cmr;
using testing_support::uniform;
using testing_support::uniform_int;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s  criterion %2d  %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  failures += !pass;
}

template <class... Args>
void detail(const char* fmt, Args... args) {
  std::printf("      ");
  std::printf(fmt, args...);
  std::printf("\n");
}

const DegreeDistribution kOneThree = DegreeDistribution::from_map({{1, 0.5}, {3, 0.5}});

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentSpec single_n(const DegreeDistribution& p, RemovalKind kind, double alpha, std::size_t n,
                        std::size_t replicas, std::uint64_t seed) {
  ExperimentSpec s;
  s.p = p;
  s.removal.kind = kind;
  s.removal.alpha = alpha;
  s.n_grid = {n};
  s.replicas = replicas;
  s.seed = seed;
  return s;
}

void criterion_1() {
  const auto spec = single_n(DegreeDistribution::regular(3), RemovalKind::uniform, 0.1, 200000, 5, 101);
  double v = 0.0, e = 0.0, slowest = 0.0;
  for (std::size_t i = 0; i < spec.replicas; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto row = run_one(spec, 200000, i);
    slowest = std::max(slowest, seconds_since(t0));
    v += static_cast<double>(row.summary.giant_vertices) / 2e5 / 5.0;
    e += static_cast<double>(row.summary.giant_edges) / 2e5 / 5.0;
  }
  const bool v_ok = std::abs(v - 0.83209877) <= 0.005;
  const bool e_ok = std::abs(e - 1.21481481) <= 0.01;
  report(1, v_ok && e_ok && slowest <= 10.0, "3-regular, uniform alpha = 0.1, n = 2e5, 5 seeds");
  detail("mean v(C1)/n = %.6f vs 0.83209877 (|diff| %.6f, tol 0.005) %s", v, std::abs(v - 0.83209877),
         v_ok ? "ok" : "MISS");
  detail("mean e(C1)/n = %.6f vs 1.21481481 (|diff| %.6f, tol 0.01) %s", e, std::abs(e - 1.21481481),
         e_ok ? "ok" : "MISS");
  detail("slowest seed %.2f s (limit 10 s)", slowest);
  const auto t = giant_fractions(DegreeDistribution::regular(3), AlphaSequence::constant(DegreeDistribution::regular(3), 0.1));
  detail("giant_fractions: rho = %.8f, e = %.8f; |v - rho| = %.6f, |e - e_theory| = %.6f", t.rho, t.e,
         std::abs(v - t.rho), std::abs(e - t.e));
}

void criterion_2() {
  Rng rng = make_rng(202, Stream::pairs);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto p = testing_support::random_distribution(rng);
    const auto t = giant_fractions(p, AlphaSequence::zero());
    const auto jl = janson_luczak(p);
    worst = std::max({worst, std::abs(t.rho - jl.rho), std::abs(t.e - jl.e), std::abs(t.eta - jl.eta)});
  }
  const auto jl = janson_luczak(kOneThree);
  const bool example = std::abs(jl.eta - 1.0 / 3) <= 1e-10 && std::abs(jl.rho - 44.0 / 54) <= 1e-10;
  report(2, worst <= 1e-10 && example, "Janson-Luczak reduction on 50 random laws and p1 = p3 = 1/2");
  detail("max |giant_fractions - janson_luczak| = %.3g (tol 1e-10)", worst);
  detail("p1 = p3 = 1/2: eta = %.12f, rho = %.12f (44/54 = %.12f)", jl.eta, jl.rho, 44.0 / 54);
}

void criterion_3() {
  Rng rng = make_rng(303, Stream::pairs);
  int eta_bad = 0, lower_bad = 0, mvt_bad = 0, quad_bad = 0, e_bad = 0, alpha_bad = 0, pos_bad = 0, pos_n = 0;
  double alpha_worst = 0.0, pos_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto [p, r] = testing_support::random_supercritical_pair(rng);
    const auto t = giant_fractions(p, r);
    const auto& b = t.bounds;
    eta_bad += b.eta_lower > t.eta + 1e-9;
    lower_bad += b.rho_lower > t.rho + 1e-9;
    mvt_bad += t.rho > b.rho_upper_mvt + 1e-9;
    quad_bad += t.rho > b.rho_upper_quad + 1e-9;
    e_bad += t.e > b.e_upper + 1e-9;
    if (t.rho > b.rho_upper_alpha + 1e-9) {
      ++alpha_bad;
      alpha_worst = std::max(alpha_worst, t.rho - b.rho_upper_alpha);
    }
    if (b.positively_correlated) {
      ++pos_n;
      if (t.rho > b.rho_upper_poscorr + 1e-9) {
        ++pos_bad;
        pos_worst = std::max(pos_worst, t.rho - b.rho_upper_poscorr);
      }
    }
  }
  const bool ok = eta_bad + lower_bad + mvt_bad + quad_bad + e_bad + alpha_bad + pos_bad == 0;
  report(3, ok, "giant bounds and eta lower bound on 200 random supercritical (p, r)");
  detail("violations: eta lower %d, rho lower %d, rho mvt %d, rho quadratic %d, e upper %d", eta_bad, lower_bad,
         mvt_bad, quad_bad, e_bad);
  detail("rho <= 1 - alpha - 2 E[Dr]^2/E[D]: %d / 200 violated (worst excess %.4f)", alpha_bad, alpha_worst);
  detail("rho <= 1 - alpha - 2 alpha^2 E[D] when Cov(D, r_D) >= 0: %d / %d violated (worst excess %.4f)", pos_bad,
         pos_n, pos_worst);
}

void criterion_4() {
  Rng rng = make_rng(404, Stream::pairs);
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    auto p = testing_support::random_supercritical(rng);
    auto [r, r2] = testing_support::random_dominated_pair(p, rng);
    const double a = alpha_of(p, r);
    const auto top = giant_fractions(p, top_quantile_sequence(p, a).r), tr = giant_fractions(p, r),
               tr2 = giant_fractions(p, r2), bottom = giant_fractions(p, bottom_quantile_sequence(p, a).r);
    bad += !(top.rho <= tr.rho + 1e-9 && tr.rho <= tr2.rho + 1e-9 && tr2.rho <= bottom.rho + 1e-9);
    bad += !(top.e <= tr.e + 1e-9 && tr.e <= tr2.e + 1e-9 && tr2.e <= bottom.e + 1e-9);
  }
  int crit_bad = 0;
  for (int i = 0; i < 50; ++i) {
    auto p = testing_support::random_supercritical(rng, 1.05);
    crit_bad += !(critical_alpha(p, RemovalMode::bottom) > critical_alpha(p, RemovalMode::top));
  }
  const double top = critical_alpha(kOneThree, RemovalMode::top);
  const double bottom = critical_alpha(kOneThree, RemovalMode::bottom);
  const bool example = std::abs(top - 1.0 / 6) <= 1e-6 && std::abs(bottom - 2.0 / 3) <= 1e-6;
  report(4, bad == 0 && crit_bad == 0 && example, "removal ordering, critical-alpha ordering and examples");
  detail("ordering violations over 50 pairs (rho and e chains): %d", bad);
  detail("critical-alpha ordering violations over 50 laws: %d", crit_bad);
  detail("p1 = p3 = 1/2: top alpha_c = %.9f (1/6), bottom alpha_c = %.9f (2/3)", top, bottom);
}

void criterion_5() {
  Rng rng = make_rng(505, Stream::pairs);
  const double h = 1e-6;
  int checked = 0, bad = 0;
  double worst = 0.0;
  auto at = [](const DegreeDistribution& p, const AlphaSequence& r, int k, int l, double eps) {
    return giant_fractions(p, apply_epsilon_transform(p, r, {k, l, eps}));
  };
  while (checked < 50) {
    auto [p, r] = testing_support::random_supercritical_pair(rng, 1.2);
    const auto support = p.support();
    const int a = uniform_int(rng, 0, static_cast<int>(support.size()) - 2);
    const int b = uniform_int(rng, a + 1, static_cast<int>(support.size()) - 1);
    const int k = support[static_cast<std::size_t>(a)], top = support[static_cast<std::size_t>(b)];
    const double room = std::min(p[top] * r[top], p[k] * (1.0 - r[k]));
    if (room < 1e-3) continue;
    const double eps = uniform(rng, 0.2, 0.8) * room;
    const int l = top - k;
    const auto d = derivative_report(p, r, k, l, eps);
    const auto plus = at(p, r, k, l, eps + h), minus = at(p, r, k, l, eps - h);
    const double fd[3] = {(plus.eta - minus.eta) / (2 * h), (plus.rho - minus.rho) / (2 * h),
                          (plus.e - minus.e) / (2 * h)};
    const double an[3] = {d.deta, d.drho, d.de};
    bool ok = d.deta < 0.0 && d.drho > 0.0 && d.de > 0.0;
    for (int q = 0; q < 3; ++q) {
      const double rel = std::abs(an[q] - fd[q]) / std::abs(fd[q]);
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-4;
    }
    bad += !ok;
    ++checked;
  }
  report(5, bad == 0, "derivatives along epsilon-transforms vs central differences, 50 configurations");
  detail("failing configurations %d, worst relative error %.3g (tol 1e-4)", bad, worst);
}

void criterion_6() {
  Rng rng = make_rng(606, Stream::pairs);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto p = testing_support::random_supercritical(rng);
    auto [r, r2] = testing_support::random_dominated_pair(p, rng);
    AlphaSequence cur = r;
    double prev = giant_fractions(p, cur).rho;
    bool ok = true;
    try {
      for (const auto& t : decompose_to_transforms(p, r, r2)) {
        cur = apply_epsilon_transform(p, cur, t);  // throws on an invalid intermediate
        ok = ok && std::abs(alpha_of(p, cur) - alpha_of(p, r)) <= 1e-12;
        const double rho = giant_fractions(p, cur).rho;
        ok = ok && rho >= prev - 1e-9;
        prev = rho;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    for (int j : p.support()) worst = std::max(worst, std::abs(cur[j] - r2[j]));
    bad += !ok;
  }
  int delta_bad = 0;
  for (int i = 0; i < 100; ++i) {
    auto p = testing_support::random_distribution(rng);
    auto [r, r2] = testing_support::random_increasing_pair(p, rng);
    const auto d = dominating_delta(p, r, r2);
    bool ok = std::abs(alpha_of(p, d) - (alpha_of(p, r2) - alpha_of(p, r))) <= 1e-12;
    for (int j : p.support()) ok = ok && r[j] + d[j] >= -1e-15 && r[j] + d[j] <= 1.0 + 1e-15;
    ok = ok && dominates(p, add(r, d), r2);
    delta_bad += !ok;
  }
  report(6, bad == 0 && worst <= 1e-12 && delta_bad == 0, "decomposition replay and dominating_delta");
  detail("replay: %d bad chains, worst coordinate error %.3g (tol 1e-12)", bad, worst);
  detail("dominating_delta: %d / 100 postcondition failures", delta_bad);
}

void criterion_7() {
  const double ac = critical_alpha(kOneThree, RemovalMode::top);
  bool ok = true;
  std::vector<std::string> lines;
  for (double a : {ac - 0.1, ac + 0.1}) {
    const auto rep = run(single_n(kOneThree, RemovalKind::top, a, 200000, 5, 707));
    double lo = 1.0, hi = 0.0;
    for (const auto& row : rep.rows) {
      const double v = static_cast<double>(row.summary.giant_vertices) / 2e5;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const bool side_ok = a < ac ? lo >= 0.02 : hi <= 0.005;
    ok = ok && side_ok;
    char buf[256];
    std::snprintf(buf, sizeof buf, "alpha = %.6f: v(C1)/n over 5 seeds in [%.5f, %.5f], theory rho = %.5f, need %s %s",
                  a, lo, hi, rep.theory->rho, a < ac ? ">= 0.02" : "<= 0.005", side_ok ? "ok" : "MISS");
    lines.emplace_back(buf);
  }
  report(7, ok, "criticality of top removal on p1 = p3 = 1/2 at alpha_c -/+ 0.1, n = 2e5");
  for (const auto& l : lines) detail("%s", l.c_str());
}

// Criteria 8 and 9 share their configurations.
void criteria_8_9() {
  Rng rng = make_rng(808, Stream::pairs);
  const std::size_t n = 100000, M = 10000, samples = 100000;
  bool ok8 = true, ok9 = true;
  std::vector<std::string> lines;
  for (int cfg = 0; cfg < 3; ++cfg) {
    DegreeDistribution p;
    AlphaSequence kill;
    double threshold = 0.0;
    for (;;) {
      p = testing_support::random_supercritical(rng, 1.5);
      const auto support = p.support();
      threshold = support[static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(support.size()) - 1))];
      kill = degree_threshold_kill(p, threshold);
      if (alpha_of(p, kill) > 0.0) break;
    }
    const auto est = local_limit_estimates(p, kill, M, samples, rng());
    const std::uint64_t seed = rng();
    auto g = sample_cm(sample_degree_sequence(p, n, seed), seed);
    g = kill_by_threshold(std::move(g), degree_centrality(g), threshold);
    const auto s = components(g);
    const double K = static_cast<double>(s.component_count) / static_cast<double>(n);
    const double v = static_cast<double>(s.giant_vertices) / static_cast<double>(n);
    const double tol8 = 0.01 + 3.0 * est.inv_component_stderr;
    const bool c8 = std::abs(K - est.inv_component_mean) <= tol8;
    const bool c9 = v <= est.zeta + 0.01;
    ok8 = ok8 && c8;
    ok9 = ok9 && c9;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "support max %d, kill degrees > %g (nu_r = %.3f): K/n = %.5f vs E[1/|C|] = %.5f (tol %.5f) %s; "
                  "v(C1)/n = %.5f vs zeta = %.5f %s",
                  p.max_degree(), threshold, nu_r(p, kill), K, est.inv_component_mean, tol8, c8 ? "ok" : "MISS", v,
                  est.zeta, c9 ? "ok" : "MISS");
    lines.emplace_back(buf);
  }
  report(8, ok8, "component count vs branching-process E[1/|C(o)|], degree-threshold kill, n = 1e5");
  for (const auto& l : lines) detail("%s", l.c_str());
  report(9, ok9, "giant upper bound v(C1)/n <= zeta + 0.01 on the same configurations");
}

void criterion_10() {
  const auto p = DegreeDistribution::from_map({{1, 0.3}, {2, 0.3}, {3, 0.2}, {5, 0.2}});
  struct Kill {
    const char* name;
    std::function<CentralityScores(const HalfEdgeGraph&)> score;
    double threshold;
  };
  const std::vector<Kill> kills{{"degree > 2", [](const HalfEdgeGraph& g) { return degree_centrality(g); }, 2.0},
                                {"pagerank c = 0.85, N = 2, > 0.45",
                                 [](const HalfEdgeGraph& g) { return finite_radius_pagerank(g, 0.85, 2); }, 0.45}};
  bool ok = true;
  std::vector<std::string> lines;
  for (const auto& k : kills) {
    auto hist = [&](std::size_t n, std::uint64_t seed) {
      const auto g = sample_cm(sample_degree_sequence(p, n, seed), seed);
      return digest_histogram(g, kill_by_threshold(g, k.score(g), k.threshold), 1);
    };
    std::map<std::uint64_t, std::size_t> small;
    for (std::uint64_t rep = 0; rep < 4; ++rep)
      for (const auto& [d, c] : hist(10000, derive_seed(1010, rep))) small[d] += c;
    const double tv = total_variation(small, hist(40000, derive_seed(1011, 0)));

    const std::uint64_t seed = derive_seed(1012, 0);
    const auto g = sample_cm(sample_degree_sequence(p, 40000, seed), seed);
    const auto scores = k.score(g);
    const auto cons = killed_ball_consistency_check(g, scores, k.threshold, 1, 40000, seed, 10000000);
    const double killed = 1.0 - static_cast<double>(kill_by_threshold(g, scores, k.threshold).alive_count()) / 40000.0;
    const bool this_ok = tv <= 0.02 && cons.pairs_examined >= 10000 && cons.violations == 0;
    ok = ok && this_ok;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s (kills %.3f): TV(n = 1e4 x4, n = 4e4) = %.4f (tol 0.02); match radius %d: %zu pairs, %zu violations %s",
                  k.name, killed, tv, cons.match_radius, cons.pairs_examined, cons.violations, this_ok ? "ok" : "MISS");
    lines.emplace_back(buf);
  }
  report(10, ok, "killed 1-ball digest stability and locality check");
  for (const auto& l : lines) detail("%s", l.c_str());
}

void criterion_11() {
  Rng rng = make_rng(1111, Stream::pairs);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto p = testing_support::random_distribution(rng);
    auto q = testing_support::push_up(p, rng);
    const auto c = cm_order_compare(p, q);
    auto cur = FiniteMeasure::of(p);
    for (const auto& t : c.chain) cur = apply_measure_transform(cur, t);
    for (int j = 0; j <= std::max(cur.max_index(), q.max_degree()); ++j) worst = std::max(worst, std::abs(cur[j] - q[j]));
    bad += !(c.dominated && c.rho_p <= c.rho_q + 1e-9);
  }
  report(11, bad == 0 && worst <= 1e-12, "unremoved giant is monotone in the stochastic order, chain replays q");
  detail("ordering failures %d / 50, worst replay error %.3g", bad, worst);
}

void criterion_12() {
  const std::vector<int> degrees{2, 2};
  const int trials = 100000;
  int loops = 0;
  Rng seeds = make_rng(1212, Stream::pairs);
  for (int i = 0; i < trials; ++i) {
    const auto g = sample_cm(degrees, seeds());
    const auto e = g.edges();
    loops += e[0].first == e[0].second;
  }
  const double loop_freq = static_cast<double>(loops) / trials;
  const double parallel_freq = 1.0 - loop_freq;
  const bool ok = std::abs(loop_freq - 1.0 / 3) <= 0.01 && std::abs(parallel_freq - 2.0 / 3) <= 0.01;
  report(12, ok, "matching sampler on degrees (2, 2), 1e5 samples");
  detail("parallel edges %.4f (2/3), two loops %.4f (1/3)", parallel_freq, loop_freq);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{criterion_1, criterion_2, criterion_3, criterion_4,
                                               criterion_5, criterion_6, criterion_7, criteria_8_9,
                                               criterion_10, criterion_11, criterion_12};
  for (const auto& c : all) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL  (exception) %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
