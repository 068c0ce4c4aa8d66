#pragma once

// Degree distributions, removal (alpha-)sequences, quantile constructions,
// epsilon-transformations and the tail-sum stochastic ordering.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmremoval/errors.hpp"

namespace cmr {

/// Absolute tolerance used for every mass identity (sums to one, alpha preservation, tail comparisons).
inline constexpr double kMassTol = 1e-12;

/// Finite-support law of the limiting degree D, supported on {1, ..., d_max}.
class DegreeDistribution {
 public:
  DegreeDistribution() = default;

  /// `mass_by_degree[j]` is P(D = j); index 0 must carry no mass.
  explicit DegreeDistribution(std::vector<double> mass_by_degree) : mass_(std::move(mass_by_degree)) {
    validate_and_trim();
  }

  static DegreeDistribution from_map(const std::map<int, double>& masses) {
    if (masses.empty()) throw DomainError("degree distribution: empty support");
    for (const auto& [j, m] : masses) {
      if (j < 1) throw DomainError("degree distribution: degree " + std::to_string(j) + " < 1 is not allowed");
    }
    std::vector<double> dense(static_cast<std::size_t>(masses.rbegin()->first) + 1, 0.0);
    for (const auto& [j, m] : masses) dense[static_cast<std::size_t>(j)] = m;
    return DegreeDistribution(std::move(dense));
  }

  /// Single atom at degree d.
  static DegreeDistribution regular(int d) { return from_map({{d, 1.0}}); }

  /// Power law p_j ∝ j^{-exponent} truncated at d_max and renormalized.
  static DegreeDistribution truncated_power_law(double exponent, int d_max) {
    if (d_max < 1) throw DomainError("truncated_power_law: d_max < 1");
    std::vector<double> dense(static_cast<std::size_t>(d_max) + 1, 0.0);
    double total = 0.0;
    for (int j = 1; j <= d_max; ++j) total += dense[static_cast<std::size_t>(j)] = std::pow(j, -exponent);
    for (double& m : dense) m /= total;
    return DegreeDistribution(std::move(dense));
  }

  double operator[](int j) const {
    return j >= 1 && static_cast<std::size_t>(j) < mass_.size() ? mass_[static_cast<std::size_t>(j)] : 0.0;
  }
  int max_degree() const { return static_cast<int>(mass_.size()) - 1; }
  std::span<const double> masses() const { return mass_; }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int j = 1; j <= max_degree(); ++j)
      if ((*this)[j] > 0.0) s.push_back(j);
    return s;
  }

  /// P(D >= k), summed from the top so that single-atom tails are exact.
  double tail(int k) const {
    double s = 0.0;
    for (int j = max_degree(); j >= std::max(k, 1); --j) s += (*this)[j];
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (int j = 1; j <= max_degree(); ++j) s += j * (*this)[j];
    return s;
  }

  bool operator==(const DegreeDistribution&) const = default;

 private:
  void validate_and_trim() {
    if (mass_.size() < 2) throw DomainError("degree distribution: empty support");
    if (mass_[0] != 0.0) throw DomainError("degree distribution: degree 0 carries mass");
    double total = 0.0;
    for (std::size_t j = 1; j < mass_.size(); ++j) {
      if (!(mass_[j] >= 0.0) || !std::isfinite(mass_[j]))
        throw DomainError("degree distribution: mass at degree " + std::to_string(j) + " is negative or not finite");
      total += mass_[j];
    }
    if (std::abs(total - 1.0) > kMassTol) {
      std::ostringstream os;
      os.precision(17);
      os << "degree distribution: masses sum to " << total << ", not 1";
      throw DomainError(os.str());
    }
    while (mass_.size() > 2 && mass_.back() == 0.0) mass_.pop_back();
    if (mass_.back() == 0.0) throw DomainError("degree distribution: empty support");
  }

  std::vector<double> mass_;
};

/// Per-degree removal fractions r_j in [0, 1]. Degrees beyond the stored range read as 0.
class AlphaSequence {
 public:
  AlphaSequence() = default;

  explicit AlphaSequence(std::vector<double> r_by_degree) : r_(std::move(r_by_degree)) {
    if (r_.empty()) r_.push_back(0.0);
    r_[0] = 0.0;
    for (std::size_t j = 1; j < r_.size(); ++j) {
      if (!(r_[j] >= 0.0 && r_[j] <= 1.0))
        throw DomainError("alpha sequence: r_" + std::to_string(j) + " outside [0, 1]");
    }
  }

  static AlphaSequence from_map(const std::map<int, double>& values) {
    int top = 0;
    for (const auto& [j, v] : values) {
      if (j < 1) throw DomainError("alpha sequence: degree " + std::to_string(j) + " < 1");
      top = std::max(top, j);
    }
    std::vector<double> dense(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [j, v] : values) dense[static_cast<std::size_t>(j)] = v;
    return AlphaSequence(std::move(dense));
  }

  /// r_j = value on the support of p, 0 elsewhere.
  static AlphaSequence constant(const DegreeDistribution& p, double value) {
    std::vector<double> dense(static_cast<std::size_t>(p.max_degree()) + 1, 0.0);
    for (int j : p.support()) dense[static_cast<std::size_t>(j)] = value;
    return AlphaSequence(std::move(dense));
  }

  static AlphaSequence zero() { return AlphaSequence(std::vector<double>{0.0}); }

  double operator[](int j) const {
    return j >= 1 && static_cast<std::size_t>(j) < r_.size() ? r_[static_cast<std::size_t>(j)] : 0.0;
  }
  int max_degree() const { return static_cast<int>(r_.size()) - 1; }
  std::span<const double> values() const { return r_; }

  /// Copy padded (with zeros) to cover degrees up to `d`.
  AlphaSequence padded(int d) const {
    std::vector<double> dense = r_;
    if (static_cast<int>(dense.size()) < d + 1) dense.resize(static_cast<std::size_t>(d) + 1, 0.0);
    return AlphaSequence(std::move(dense));
  }

  bool operator==(const AlphaSequence&) const = default;

 private:
  std::vector<double> r_;
};

/// Finite non-negative measure on degrees (not necessarily normalized), e.g. q_j = p_j r_j.
class FiniteMeasure {
 public:
  FiniteMeasure() = default;
  explicit FiniteMeasure(std::vector<double> mass) : mass_(std::move(mass)) {
    if (mass_.empty()) mass_.push_back(0.0);
    for (std::size_t j = 0; j < mass_.size(); ++j)
      if (!(mass_[j] >= 0.0) || !std::isfinite(mass_[j]))
        throw DomainError("finite measure: negative or non-finite mass at " + std::to_string(j));
  }

  static FiniteMeasure of(const DegreeDistribution& p) {
    return FiniteMeasure(std::vector<double>(p.masses().begin(), p.masses().end()));
  }

  static FiniteMeasure removal_mass(const DegreeDistribution& p, const AlphaSequence& r) {
    std::vector<double> q(static_cast<std::size_t>(p.max_degree()) + 1, 0.0);
    for (int j = 1; j <= p.max_degree(); ++j) q[static_cast<std::size_t>(j)] = p[j] * r[j];
    return FiniteMeasure(std::move(q));
  }

  double operator[](int j) const {
    return j >= 0 && static_cast<std::size_t>(j) < mass_.size() ? mass_[static_cast<std::size_t>(j)] : 0.0;
  }
  int max_index() const { return static_cast<int>(mass_.size()) - 1; }
  std::span<const double> masses() const { return mass_; }

  double total() const {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
  }

  /// Mass of [k, infinity), summed from the top.
  double tail(int k) const {
    double s = 0.0;
    for (int j = max_index(); j >= std::max(k, 0); --j) s += (*this)[j];
    return s;
  }

 private:
  std::vector<double> mass_;
};

/// Moves `eps` of removal mass from degree k + l down to degree k.
struct EpsilonTransform {
  int k = 1;
  int l = 1;
  double eps = 0.0;
  bool operator==(const EpsilonTransform&) const = default;
};

/// Moves `eps` of probability mass from index k up to index k + l.
struct MeasureTransform {
  int k = 0;
  int l = 1;
  double eps = 0.0;
};

struct Moments {
  double mean;
  double nu;
};

inline Moments moments(const DegreeDistribution& p) {
  double m1 = 0.0, m2 = 0.0;
  for (int j = 1; j <= p.max_degree(); ++j) {
    m1 += j * p[j];
    m2 += static_cast<double>(j) * (j - 1) * p[j];
  }
  return {m1, m2 / m1};
}

inline double alpha_of(const DegreeDistribution& p, const AlphaSequence& r) {
  double a = 0.0;
  for (int j = 1; j <= p.max_degree(); ++j) a += p[j] * r[j];
  return a;
}

/// E[D r_D].
inline double removed_half_edges(const DegreeDistribution& p, const AlphaSequence& r) {
  double s = 0.0;
  for (int j = 1; j <= p.max_degree(); ++j) s += j * p[j] * r[j];
  return s;
}

struct QuantileSequence {
  AlphaSequence r;
  int quantile;
};

namespace detail {
inline void check_open_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << who << ": alpha = " << alpha << " outside (0, 1)";
    throw DomainError(os.str());
  }
}
}  // namespace detail

/// Removes the top alpha-fraction by degree: ones above k_alpha, the boundary
/// fraction at k_alpha, zeros below (and zeros off the support).
inline QuantileSequence top_quantile_sequence(const DegreeDistribution& p, double alpha) {
  detail::check_open_alpha(alpha, "top_quantile_sequence");
  std::vector<double> r(static_cast<std::size_t>(p.max_degree()) + 1, 0.0);
  double above = 0.0;  // P(D > k)
  int k = p.max_degree();
  for (; k >= 1; --k) {
    if (p[k] > 0.0 && above + p[k] >= alpha - 1e-15) break;
    above += p[k];
  }
  k = std::max(k, 1);
  for (int j = k + 1; j <= p.max_degree(); ++j)
    if (p[j] > 0.0) r[static_cast<std::size_t>(j)] = 1.0;
  r[static_cast<std::size_t>(k)] = std::clamp((alpha - above) / p[k], 0.0, 1.0);
  return {AlphaSequence(std::move(r)), k};
}

/// Mirror of top_quantile_sequence: ones below l_alpha, the boundary fraction at l_alpha.
inline QuantileSequence bottom_quantile_sequence(const DegreeDistribution& p, double alpha) {
  detail::check_open_alpha(alpha, "bottom_quantile_sequence");
  std::vector<double> r(static_cast<std::size_t>(p.max_degree()) + 1, 0.0);
  double below = 0.0;  // P(D < l)
  int l = 1;
  for (; l <= p.max_degree(); ++l) {
    if (p[l] > 0.0 && below + p[l] >= alpha - 1e-15) break;
    below += p[l];
  }
  l = std::min(l, p.max_degree());
  for (int j = 1; j < l; ++j)
    if (p[j] > 0.0) r[static_cast<std::size_t>(j)] = 1.0;
  r[static_cast<std::size_t>(l)] = std::clamp((alpha - below) / p[l], 0.0, 1.0);
  return {AlphaSequence(std::move(r)), l};
}

inline AlphaSequence apply_epsilon_transform(const DegreeDistribution& p, const AlphaSequence& r,
                                             const EpsilonTransform& t) {
  if (t.k < 1 || t.l < 1) throw DomainError("epsilon transform: k and l must be >= 1");
  if (t.eps < 0.0) throw DomainError("epsilon transform: eps < 0");
  if (t.eps == 0.0) return r;
  const int hi = t.k + t.l;
  if (p[t.k] <= 0.0 || p[hi] <= 0.0)
    throw DomainError("epsilon transform: coordinate " + std::to_string(p[t.k] <= 0.0 ? t.k : hi) +
                      " is outside the support");
  const double available = p[hi] * r[hi];
  if (t.eps > available + kMassTol) {
    std::ostringstream os;
    os.precision(17);
    os << "epsilon transform: eps = " << t.eps << " exceeds p_" << hi << " r_" << hi << " = " << available;
    throw DomainError(os.str());
  }
  const double new_low = r[t.k] + t.eps / p[t.k];
  if (new_low > 1.0 + kMassTol / p[t.k]) {
    std::ostringstream os;
    os.precision(17);
    os << "epsilon transform: r_" << t.k << " would become " << new_low << " > 1";
    throw DomainError(os.str());
  }
  std::vector<double> out(r.values().begin(), r.values().end());
  if (static_cast<int>(out.size()) <= hi) out.resize(static_cast<std::size_t>(hi) + 1, 0.0);
  out[static_cast<std::size_t>(t.k)] = std::min(new_low, 1.0);
  out[static_cast<std::size_t>(hi)] = std::max(r[hi] - t.eps / p[hi], 0.0);
  return AlphaSequence(std::move(out));
}

/// Applies a measure-level transform: mass eps moves from index k to k + l.
inline FiniteMeasure apply_measure_transform(const FiniteMeasure& m, const MeasureTransform& t) {
  if (t.k < 0 || t.l < 1 || t.eps < 0.0) throw DomainError("measure transform: invalid (k, l, eps)");
  if (t.eps > m[t.k] + kMassTol) throw DomainError("measure transform: eps exceeds mass at " + std::to_string(t.k));
  std::vector<double> out(m.masses().begin(), m.masses().end());
  const int hi = t.k + t.l;
  if (static_cast<int>(out.size()) <= hi) out.resize(static_cast<std::size_t>(hi) + 1, 0.0);
  out[static_cast<std::size_t>(t.k)] = std::max(out[static_cast<std::size_t>(t.k)] - t.eps, 0.0);
  out[static_cast<std::size_t>(hi)] += t.eps;
  return FiniteMeasure(std::move(out));
}

/// First index K at which tail(a, K) > tail(b, K) + tol, or -1 if a is stochastically dominated by b.
inline int first_tail_violation(const FiniteMeasure& a, const FiniteMeasure& b, double tol = kMassTol) {
  const int top = std::max(a.max_index(), b.max_index());
  double ta = 0.0, tb = 0.0;
  int first = -1;
  for (int k = top; k >= 0; --k) {
    ta += a[k];
    tb += b[k];
    if (ta > tb + tol) first = k;
  }
  return first;
}

/// r ≼_p r2: every tail sum of p·r is at most the matching tail sum of p·r2.
inline bool dominates(const DegreeDistribution& p, const AlphaSequence& r, const AlphaSequence& r2) {
  return first_tail_violation(FiniteMeasure::removal_mass(p, r), FiniteMeasure::removal_mass(p, r2)) < 0;
}

/// Stochastic order of distributions: P_p(D >= K) <= P_q(D >= K) for all K.
inline bool stochastically_dominated(const DegreeDistribution& p, const DegreeDistribution& q) {
  return first_tail_violation(FiniteMeasure::of(p), FiniteMeasure::of(q)) < 0;
}

struct MassMove {
  int from;
  int to;
  double amount;
};

namespace detail {

/// Turns `from` into `to` (equal totals) by a monotone transport: the i-th unit of
/// surplus mass (scanned upward) is sent to the i-th unit of deficit (scanned upward).
/// When one measure tail-dominates the other every move points in the same direction.
inline std::vector<MassMove> monotone_transport(const FiniteMeasure& from, const FiniteMeasure& to) {
  const int top = std::max(from.max_index(), to.max_index());
  std::vector<std::pair<int, double>> surplus, deficit;
  for (int j = 0; j <= top; ++j) {
    const double d = from[j] - to[j];
    if (d > 1e-15) surplus.emplace_back(j, d);
    else if (d < -1e-15) deficit.emplace_back(j, -d);
  }
  std::vector<MassMove> moves;
  std::size_t a = 0, b = 0;
  while (a < surplus.size() && b < deficit.size()) {
    const double amount = std::min(surplus[a].second, deficit[b].second);
    if (amount > 0.0) moves.push_back({surplus[a].first, deficit[b].first, amount});
    surplus[a].second -= amount;
    deficit[b].second -= amount;
    if (surplus[a].second <= 0.0) ++a;
    if (deficit[b].second <= 0.0) ++b;
  }
  return moves;
}

}  // namespace detail

/// Epsilon-transforms carrying r to r2, where r2 ≼_p r and both share alpha.
/// Every transform moves mass from a higher coordinate k + l to a lower k and
/// the list is ordered by increasing coordinate.
inline std::vector<EpsilonTransform> decompose_to_transforms(const DegreeDistribution& p, const AlphaSequence& r,
                                                             const AlphaSequence& r2) {
  const double a1 = alpha_of(p, r), a2 = alpha_of(p, r2);
  if (std::abs(a1 - a2) > kMassTol) {
    std::ostringstream os;
    os.precision(17);
    os << "decompose_to_transforms: alpha mismatch " << a1 << " vs " << a2;
    throw DomainError(os.str());
  }
  const auto q = FiniteMeasure::removal_mass(p, r);
  const auto q2 = FiniteMeasure::removal_mass(p, r2);
  if (const int bad = first_tail_violation(q2, q); bad >= 0)
    throw OrderingError("decompose_to_transforms: target does not precede source at tail index " +
                            std::to_string(bad),
                        bad);
  std::vector<EpsilonTransform> out;
  for (const auto& m : detail::monotone_transport(q, q2)) {
    if (m.to >= m.from) {
      if (m.amount <= kMassTol) continue;  // rounding residue
      throw InvariantViolation("decompose_to_transforms: upward move in a dominated pair");
    }
    out.push_back({m.to, m.from - m.to, m.amount});
  }
  return out;
}

/// Measure-level transforms carrying p to q when p ≼_st q (mass only moves up).
inline std::vector<MeasureTransform> decompose_measure(const FiniteMeasure& p, const FiniteMeasure& q) {
  if (std::abs(p.total() - q.total()) > kMassTol) throw DomainError("decompose_measure: totals differ");
  if (const int bad = first_tail_violation(p, q); bad >= 0)
    throw OrderingError("decompose_measure: source is not dominated at tail index " + std::to_string(bad), bad);
  std::vector<MeasureTransform> out;
  for (const auto& m : detail::monotone_transport(p, q)) {
    if (m.to <= m.from) {
      if (m.amount <= kMassTol) continue;
      throw InvariantViolation("decompose_measure: downward move in a dominated pair");
    }
    out.push_back({m.from, m.to - m.from, m.amount});
  }
  return out;
}

/// Extra removal δ of mass alpha_of(r2) - alpha_of(r) such that r + δ ≼_p r2, built
/// block by block: δ copies r2 - r where r2 >= r, and at each block [k_i, l_i]
/// (k_i the first coordinate with r2 < r, l_i the first index where the running
/// sum of p (r2 - r) turns positive) concentrates the block's net mass at l_i.
inline AlphaSequence dominating_delta(const DegreeDistribution& p, const AlphaSequence& r, const AlphaSequence& r2) {
  const double gap = alpha_of(p, r2) - alpha_of(p, r);
  if (gap < -kMassTol) throw DomainError("dominating_delta: target carries less removal mass than source");
  if (const int bad = first_tail_violation(FiniteMeasure::removal_mass(p, r), FiniteMeasure::removal_mass(p, r2));
      bad >= 0)
    throw DomainError("dominating_delta: source is not dominated by target (tail index " + std::to_string(bad) +
                      ")");
  const int top = p.max_degree();
  std::vector<double> delta(static_cast<std::size_t>(top) + 1, 0.0);
  int i = 1;
  while (i <= top) {
    if (p[i] <= 0.0) { ++i; continue; }
    if (r2[i] >= r[i]) {
      delta[static_cast<std::size_t>(i)] = r2[i] - r[i];
      ++i;
      continue;
    }
    // Block start k = i.
    const int k = i;
    double running = 0.0;
    int l = -1;
    for (int n = k; n <= top; ++n) {
      running += p[n] * (r2[n] - r[n]);
      if (n > k && running > 1e-15) { l = n; break; }
    }
    if (l < 0) break;  // the remaining tail has zero net mass; δ stays 0 there
    delta[static_cast<std::size_t>(l)] = running / p[l];
    i = l + 1;
  }
  for (int j = 1; j <= top; ++j) {
    double& d = delta[static_cast<std::size_t>(j)];
    d = std::clamp(d, 0.0, 1.0 - r[j]);
  }
  return AlphaSequence(std::move(delta));
}

/// Coordinatewise sum, clamped into [0, 1] to absorb rounding.
inline AlphaSequence add(const AlphaSequence& a, const AlphaSequence& b) {
  const int top = std::max(a.max_degree(), b.max_degree());
  std::vector<double> out(static_cast<std::size_t>(top) + 1, 0.0);
  for (int j = 1; j <= top; ++j) out[static_cast<std::size_t>(j)] = std::clamp(a[j] + b[j], 0.0, 1.0);
  return AlphaSequence(std::move(out));
}

}  // namespace cmr
