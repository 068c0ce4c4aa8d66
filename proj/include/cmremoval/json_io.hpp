#pragma once

// JSON loading and writing for distributions, sequences and reports.
// Degrees are decimal-string keys: {"p": {"1": 0.5, "3": 0.5}, "r": {"3": 0.5}}.

#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cmremoval/centrality.hpp"
#include "cmremoval/degrees.hpp"
#include "cmremoval/errors.hpp"
#include "cmremoval/graph.hpp"
#include "cmremoval/theory.hpp"

namespace cmr {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::map<int, double> degree_map(const Json& j, const char* what) {
  if (!j.is_object()) throw DomainError(std::string(what) + ": expected an object keyed by degree");
  std::map<int, double> out;
  for (const auto& [key, value] : j.items()) {
    std::size_t used = 0;
    int degree = 0;
    try {
      degree = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty())
      throw DomainError(std::string(what) + ": key '" + key + "' is not a decimal degree");
    if (!value.is_number()) throw DomainError(std::string(what) + ": value at degree " + key + " is not a number");
    if (!out.emplace(degree, value.get<double>()).second)
      throw DomainError(std::string(what) + ": degree " + key + " listed twice");
  }
  return out;
}

}  // namespace detail

inline DegreeDistribution distribution_from_json(const Json& j) { return DegreeDistribution::from_map(detail::degree_map(j, "p")); }

inline AlphaSequence sequence_from_json(const Json& j) { return AlphaSequence::from_map(detail::degree_map(j, "r")); }

inline Json to_json(const DegreeDistribution& p) {
  Json j = Json::object();
  for (int d : p.support()) j[std::to_string(d)] = p[d];
  return j;
}

/// Entries on the support of p (or every stored degree when p is null).
inline Json to_json(const AlphaSequence& r, const DegreeDistribution* p = nullptr) {
  Json j = Json::object();
  if (p != nullptr) {
    for (int d : p->support()) j[std::to_string(d)] = r[d];
  } else {
    for (int d = 1; d <= r.max_degree(); ++d)
      if (r[d] != 0.0) j[std::to_string(d)] = r[d];
  }
  return j;
}

inline Json to_json(const Bounds& b) {
  return Json{{"eta_lower", b.eta_lower},
              {"rho_lower", b.rho_lower},
              {"rho_upper_mvt", b.rho_upper_mvt},
              {"rho_upper_quad", b.rho_upper_quad},
              {"rho_upper_alpha", b.rho_upper_alpha},
              {"rho_upper_poscorr", b.rho_upper_poscorr},
              {"positively_correlated", b.positively_correlated},
              {"e_upper", b.e_upper}};
}

inline Json to_json(const TheoryReport& t) {
  Json j{{"alpha", t.alpha},     {"mean_degree", t.mean_degree}, {"edr", t.edr},
         {"beta", t.beta},       {"nu_r", t.nu_r},               {"eta", t.eta},
         {"rho", t.rho},         {"e", t.e},                     {"supercritical", t.supercritical}};
  if (t.p_tilde) j["p_tilde"] = to_json(*t.p_tilde);
  j["bounds"] = to_json(t.bounds);
  return j;
}

inline Json to_json(const DerivativeReport& d) {
  return Json{{"eta", d.eta}, {"deta", d.deta}, {"drho", d.drho}, {"de", d.de}, {"A_eps", d.A_eps}, {"B_eps", d.B_eps}};
}

inline Json to_json(const EpsilonTransform& t) { return Json{{"k", t.k}, {"l", t.l}, {"eps", t.eps}}; }
inline Json to_json(const MeasureTransform& t) { return Json{{"k", t.k}, {"l", t.l}, {"eps", t.eps}}; }

inline Json to_json(const ComponentSummary& s) {
  Json per = Json::object();
  for (const auto& [d, c] : s.giant_per_degree) per[std::to_string(d)] = c;
  Json sizes = Json::object();
  for (const auto& [size, mult] : s.sizes) sizes[std::to_string(size)] = mult;
  return Json{{"vertex_count", s.vertex_count}, {"component_count", s.component_count},
              {"giant_vertices", s.giant_vertices}, {"giant_edges", s.giant_edges},
              {"giant_per_degree", per},            {"sizes", sizes}};
}

inline Json to_json(const LocalLimitEstimate& e) {
  return Json{{"zeta", e.zeta},
              {"inv_component_mean", e.inv_component_mean},
              {"stderr", {{"zeta", e.zeta_stderr}, {"inv_component_mean", e.inv_component_stderr}}},
              {"M", e.M},
              {"samples", e.samples}};
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes j with every floating-point number at 17 significant digits.
inline void write_json(std::ostream& os, const Json& j, int indent = 2, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(k).dump() << ": ";
        write_json(os, v, indent, depth + 1);
      }
      os << '\n' << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << '\n' << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: os << format_real(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

inline std::string json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << '\n';
  return os.str();
}

}  // namespace cmr
