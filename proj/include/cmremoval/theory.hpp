#pragma once

// Closed-form giant-component predictions for the configuration model after
// degree-class vertex removal: the exploded degree law, the half-edge
// extinction probability, giant vertex/edge fractions, bounds, critical
// removal fractions and derivatives along epsilon-transformations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmremoval/degrees.hpp"
#include "cmremoval/errors.hpp"

namespace cmr {

inline constexpr double kSolverTol = 1e-12;

struct ExplodedDistribution {
  DegreeDistribution p_tilde;
  double beta;
};

/// Law of the degree of a uniform vertex after every removed vertex is split
/// into degree-one vertices carrying its half-edges.
inline ExplodedDistribution explode(const DegreeDistribution& p, const AlphaSequence& r) {
  const double alpha = alpha_of(p, r);
  const double edr = removed_half_edges(p, r);
  const double beta = edr + 1.0 - alpha;
  if (beta <= 1e-14) throw DegenerateInputError("explode: beta_r vanishes (everything removed)");
  std::vector<double> pt(static_cast<std::size_t>(std::max(p.max_degree(), 1)) + 1, 0.0);
  for (int j = 1; j <= p.max_degree(); ++j) pt[static_cast<std::size_t>(j)] = p[j] * (1.0 - r[j]) / beta;
  pt[1] += edr / beta;
  double total = 0.0;
  for (double m : pt) total += m;
  for (double& m : pt) m /= total;  // rounding only
  return {DegreeDistribution(std::move(pt)), beta};
}

/// E[D(D-1)(1 - r_D)] / E[D].
inline double nu_r(const DegreeDistribution& p, const AlphaSequence& r) {
  double num = 0.0;
  for (int j = 1; j <= p.max_degree(); ++j) num += static_cast<double>(j) * (j - 1) * p[j] * (1.0 - r[j]);
  return num / p.mean();
}

namespace detail {

/// h(x) = beta_r g_r'(x) - E[D] x = sum_j j p_j (1 - r_j) x^{j-1} + E[D r_D] - E[D] x.
inline double extinction_residual(const DegreeDistribution& p, const AlphaSequence& r, double edr, double ed,
                                  double x) {
  double s = 0.0, pw = 1.0;
  for (int j = 1; j <= p.max_degree(); ++j) {
    s += j * p[j] * (1.0 - r[j]) * pw;
    pw *= x;
  }
  return s + edr - ed * x;
}

/// Root of h on (0, 1) where h(0) > 0 and h < 0 just below 1. The bracket's
/// right end 1 - delta is pulled toward 1 until h changes sign there.
inline double bisect_below_one(const std::function<double(double)>& h, const char* who) {
  double delta = 1e-3;
  double hi = 1.0 - delta;
  int shrink = 0;
  while (!(h(hi) < 0.0)) {
    if (++shrink > 60) {
      throw NumericalError(std::string(who) + ": no sign change below 1 (near-critical configuration)");
    }
    delta *= 0.5;
    hi = 1.0 - delta;
  }
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(h(lo)) <= std::abs(h(hi)) ? lo : hi;
}

}  // namespace detail

/// Smallest root in (0, 1] of beta_r g_r'(x) = E[D] x. Returns 1 when nu_r <= 1
/// and 0 when the exploded law has no degree-one mass.
inline double solve_eta(const DegreeDistribution& p, const AlphaSequence& r, double tol = kSolverTol) {
  if (!(tol > 0.0)) throw DomainError("solve_eta: tol must be positive");
  if (nu_r(p, r) <= 1.0) return 1.0;
  const double ed = p.mean();
  const double edr = removed_half_edges(p, r);
  const double h0 = p[1] * (1.0 - r[1]) + edr;
  if (h0 <= 0.0) return 0.0;
  auto h = [&](double x) { return detail::extinction_residual(p, r, edr, ed, x); };
  const double eta = detail::bisect_below_one(h, "solve_eta");
  if (std::abs(h(eta)) > tol * ed) {
    std::ostringstream os;
    os.precision(17);
    os << "solve_eta: residual " << h(eta) << " above tolerance at eta = " << eta;
    throw NumericalError(os.str());
  }
  return eta;
}

struct Bounds {
  double eta_lower = 0.0;         // E[D r_D] / E[D]
  double rho_lower = 0.0;         // E[D (eta - r_D)] (1 - eta)
  double rho_upper_mvt = 0.0;     // E[D (1 - r_D)] (1 - eta)
  double rho_upper_quad = 0.0;    // E[D (1 - r_D)]^2 / E[D]
  double rho_upper_alpha = 0.0;   // 1 - alpha - 2 E[D r_D]^2 / E[D]
  double rho_upper_poscorr = 0.0; // 1 - alpha - 2 alpha^2 E[D], valid when positively_correlated
  bool positively_correlated = false;
  double e_upper = 0.0;           // E[D (1 - r_D)]^2 / (2 E[D])
};

inline Bounds bounds(const DegreeDistribution& p, const AlphaSequence& r, double eta) {
  const double ed = p.mean();
  const double alpha = alpha_of(p, r);
  const double edr = removed_half_edges(p, r);
  const double ed_kept = ed - edr;
  Bounds b;
  b.eta_lower = edr / ed;
  b.rho_lower = (ed * eta - edr) * (1.0 - eta);
  b.rho_upper_mvt = ed_kept * (1.0 - eta);
  b.rho_upper_quad = ed_kept * ed_kept / ed;
  b.rho_upper_alpha = 1.0 - alpha - 2.0 * edr * edr / ed;
  b.rho_upper_poscorr = 1.0 - alpha - 2.0 * alpha * alpha * ed;
  // Cov(D, r_D) = E[D r_D] - E[D] E[r_D]
  b.positively_correlated = edr - ed * alpha >= -kMassTol;
  b.e_upper = ed_kept * ed_kept / (2.0 * ed);
  return b;
}

struct TheoryReport {
  double alpha = 0.0;
  double mean_degree = 0.0;
  double edr = 0.0;
  double beta = 0.0;
  double nu_r = 0.0;
  double eta = 1.0;
  double rho = 0.0;
  double e = 0.0;
  bool supercritical = false;
  std::optional<DegreeDistribution> p_tilde;
  Bounds bounds;
};

/// Giant vertex and edge fractions after removing according to r.
inline TheoryReport giant_fractions(const DegreeDistribution& p, const AlphaSequence& r, double tol = kSolverTol) {
  TheoryReport t;
  t.alpha = alpha_of(p, r);
  t.mean_degree = p.mean();
  t.edr = removed_half_edges(p, r);
  t.beta = t.edr + 1.0 - t.alpha;
  if (t.beta > 1e-14) t.p_tilde = explode(p, r).p_tilde;
  t.nu_r = nu_r(p, r);
  t.supercritical = t.nu_r > 1.0;
  t.eta = solve_eta(p, r, tol);
  if (t.supercritical) {
    double poly = 0.0, pw = t.eta;
    for (int j = 1; j <= p.max_degree(); ++j) {
      poly += (1.0 - r[j]) * p[j] * pw;
      pw *= t.eta;
    }
    // beta_r (1 - g_r(eta)) - E[D r_D] (1 - eta): the exploded giant minus its red leaves.
    t.rho = 1.0 - t.alpha - poly;
    t.e = 0.5 * t.mean_degree * (1.0 - t.eta * t.eta) - t.edr * (1.0 - t.eta);
  }
  t.bounds = bounds(p, r, t.eta);
  return t;
}

/// Giant of the unremoved configuration model from the fixed-point iteration of
/// the size-biased offspring generating function.
struct JansonLuczak {
  double eta = 1.0;
  double rho = 0.0;
  std::vector<double> per_degree;  // per_degree[j] = p_j (1 - eta^j)
  double e = 0.0;
};

inline JansonLuczak janson_luczak(const DegreeDistribution& p, double tol = kSolverTol) {
  (void)tol;
  JansonLuczak out;
  out.per_degree.assign(static_cast<std::size_t>(p.max_degree()) + 1, 0.0);
  const double ed = p.mean();
  double second = 0.0;  // E[D (D - 2)]
  for (int j = 1; j <= p.max_degree(); ++j) second += static_cast<double>(j) * (j - 2) * p[j];
  if (second <= 0.0) return out;

  // Offspring generating function f(x) = g_D'(x) / E[D]; iterating from 0 climbs
  // monotonically to its smallest fixed point.
  auto f = [&](double x) {
    double s = 0.0, pw = 1.0;
    for (int j = 1; j <= p.max_degree(); ++j) {
      s += j * p[j] * pw;
      pw *= x;
    }
    return s / ed;
  };
  double x = 0.0;
  for (long it = 0; it < 20'000'000; ++it) {
    const double next = f(x);
    if (next <= x) break;
    x = next;
  }
  out.eta = x;
  double g = 0.0, pw = x;
  for (int j = 1; j <= p.max_degree(); ++j) {
    g += p[j] * pw;
    out.per_degree[static_cast<std::size_t>(j)] = p[j] * (1.0 - pw);
    pw *= x;
  }
  out.rho = 1.0 - g;
  out.e = 0.5 * ed * (1.0 - x * x);
  return out;
}

enum class RemovalMode { top, bottom, uniform };

inline std::string to_string(RemovalMode m) {
  switch (m) {
    case RemovalMode::top: return "top";
    case RemovalMode::bottom: return "bottom";
    case RemovalMode::uniform: return "uniform";
  }
  return "?";
}

inline RemovalMode removal_mode_from_string(const std::string& s) {
  if (s == "top") return RemovalMode::top;
  if (s == "bottom") return RemovalMode::bottom;
  if (s == "uniform") return RemovalMode::uniform;
  throw DomainError("unknown removal mode '" + s + "' (expected top, bottom or uniform)");
}

/// The alpha-sequence a removal mode uses at fraction alpha; alpha = 1 removes everything.
inline AlphaSequence mode_sequence(const DegreeDistribution& p, RemovalMode mode, double alpha) {
  if (alpha >= 1.0) return AlphaSequence::constant(p, 1.0);
  if (alpha <= 0.0) return AlphaSequence::constant(p, 0.0);
  switch (mode) {
    case RemovalMode::top: return top_quantile_sequence(p, alpha).r;
    case RemovalMode::bottom: return bottom_quantile_sequence(p, alpha).r;
    case RemovalMode::uniform: return AlphaSequence::constant(p, alpha);
  }
  return AlphaSequence::zero();
}

/// Boundary between the supercritical and subcritical regimes for a removal
/// mode, located by bisection on alpha -> nu_{r(alpha)} - 1 (non-increasing).
inline double critical_alpha(const DegreeDistribution& p, RemovalMode mode, double tol = 1e-9) {
  if (moments(p).nu <= 1.0) throw DomainError("critical_alpha: no giant before removal (nu <= 1)");
  auto nu_at = [&](double a) { return nu_r(p, mode_sequence(p, mode, a)); };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (nu_at(mid) > 1.0 ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  if (std::abs(nu_at(a) - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "critical_alpha: |nu - 1| = " << std::abs(nu_at(a) - 1.0) << " at alpha = " << a;
    throw NumericalError(os.str());
  }
  return a;
}

/// Supercriticality condition for quantile removal written in terms of the
/// quantile (k_alpha or l_alpha) directly; uniform mode uses nu (1 - alpha).
inline bool quantile_condition_holds(const DegreeDistribution& p, RemovalMode mode, double alpha) {
  const double ed = p.mean();
  switch (mode) {
    case RemovalMode::top: {
      const int k = top_quantile_sequence(p, alpha).quantile;
      double lhs = 0.0;
      for (int j = 1; j <= k; ++j) lhs += static_cast<double>(j) * (j - 1) * p[j];
      return lhs > ed + static_cast<double>(k) * (k - 1) * (alpha - p.tail(k + 1));
    }
    case RemovalMode::bottom: {
      const int l = bottom_quantile_sequence(p, alpha).quantile;
      double lhs = 0.0;
      for (int j = l; j <= p.max_degree(); ++j) lhs += static_cast<double>(j) * (j - 1) * p[j];
      return lhs > ed + static_cast<double>(l) * (l - 1) * (alpha - (1.0 - p.tail(l)));
    }
    case RemovalMode::uniform: return moments(p).nu * (1.0 - alpha) > 1.0;
  }
  return false;
}

struct DerivativeReport {
  double eta = 0.0;
  double deta = 0.0;
  double drho = 0.0;
  double de = 0.0;
  double A_eps = 0.0;
  double B_eps = 0.0;
};

/// Closed-form derivatives in eps of eta, rho and e along the transform
/// r -> r^{k,l}(eps), evaluated at the given eps.
inline DerivativeReport derivative_report(const DegreeDistribution& p, const AlphaSequence& r, int k, int l,
                                          double eps, double tol = kSolverTol) {
  const AlphaSequence re = apply_epsilon_transform(p, r, {k, l, eps});
  if (nu_r(p, re) <= 1.0) throw RegimeError("derivative_report: configuration is not supercritical");
  const double ed = p.mean();
  const double eta = solve_eta(p, re, tol);

  // beta_eps g_eps''(eta) = sum_j j (j - 1) p_j (1 - r_j(eps)) eta^{j-2}
  double curvature = 0.0;
  double pw = 1.0;
  for (int j = 2; j <= p.max_degree(); ++j) {
    curvature += static_cast<double>(j) * (j - 1) * p[j] * (1.0 - re[j]) * pw;
    pw *= eta;
  }
  const double e_k1 = std::pow(eta, k - 1), e_kl1 = std::pow(eta, k + l - 1);
  const double deta = ((k + l) * e_kl1 - k * e_k1 - l) / (ed - curvature);

  DerivativeReport d;
  d.eta = eta;
  d.deta = deta;
  d.A_eps = ed * eta - removed_half_edges(p, re);  // E[D (eta - r_D(eps))]
  d.B_eps = std::pow(eta, k) * (1.0 - std::pow(eta, l));
  d.de = -deta * d.A_eps + l * (1.0 - eta);
  d.drho = -d.A_eps * deta + d.B_eps;
  return d;
}

struct OrderComparison {
  bool dominated = false;
  double rho_p = 0.0;
  double rho_q = 0.0;
  bool ordering_holds = true;
  std::vector<MeasureTransform> chain;
};

/// Compares the unremoved giants of two degree laws under the stochastic order.
inline OrderComparison cm_order_compare(const DegreeDistribution& p, const DegreeDistribution& q,
                                        double tol = 1e-9) {
  OrderComparison c;
  c.dominated = stochastically_dominated(p, q);
  c.rho_p = janson_luczak(p).rho;
  c.rho_q = janson_luczak(q).rho;
  if (c.dominated) {
    c.ordering_holds = c.rho_p <= c.rho_q + tol;
    c.chain = decompose_measure(FiniteMeasure::of(p), FiniteMeasure::of(q));
  }
  return c;
}

}  // namespace cmr
