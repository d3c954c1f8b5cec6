#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "perioda/divisor.hpp"
#include "perioda/lemma1.hpp"
#include "perioda/weierstrass.hpp"

namespace perioda::io {

using nlohmann::json;

// Rationals travel as "num/den" strings; integers are accepted on input.
inline Rational rational_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw InputError("expected a rational string or integer, got " + j.dump());
}
inline json to_json(const Rational& r) { return to_string(r); }

inline Integer integer_from(const json& j) {
  Rational r = rational_from(j);
  if (!is_integer(r)) throw InputError("expected an integer, got " + j.dump());
  return r.get_num();
}

inline long long_from(const json& j) {
  Integer v = integer_from(j);
  if (!v.fits_slong_p()) throw InputError("integer out of range: " + j.dump());
  return v.get_si();
}

inline std::vector<Rational> rational_list(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from(x));
  return out;
}

inline json to_json(const Point& p) {
  json rat = json::array(), irr = json::array();
  for (const auto& c : p.coords()) {
    rat.push_back(to_string(c.rat));
    irr.push_back(to_string(c.irr));
  }
  return {{"rat", rat}, {"irr", irr}};
}

inline Point point_from(const json& j) {
  if (!j.is_object() || !j.contains("rat")) throw InputError("point must be an object with \"rat\"");
  auto rat = rational_list(j.at("rat"));
  std::vector<Rational> irr(rat.size(), 0);
  if (j.contains("irr")) irr = rational_list(j.at("irr"));
  if (rat.empty()) throw InputError("point of rank 0");
  return Point::from_parts(rat, irr);
}

/// Row-major matrix; columns are the generators.
inline json to_json(const Lattice& l) {
  json rows = json::array();
  for (const auto& row : l.basis().to_rows()) {
    json r = json::array();
    for (const auto& x : row) {
      if (is_integer(x) && x.get_num().fits_slong_p())
        r.push_back(x.get_num().get_si());
      else
        r.push_back(to_string(x));
    }
    rows.push_back(r);
  }
  return rows;
}

inline Lattice lattice_from(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("lattice must be a non-empty matrix");
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : j) rows.push_back(rational_list(r));
  return Lattice::from_rows(rows);
}

inline json to_json(const QuasiPeriodicFn& f) {
  json entries = json::array();
  for (const auto& [k, v] : f.entries()) entries.push_back({{"point", to_json(k)}, {"value", to_string(v)}});
  return {{"lattice", to_json(f.lattice())}, {"entries", entries}, {"zero_value", to_string(f.zero_value())}};
}

inline QuasiPeriodicFn qpf_from(const json& j) {
  if (!j.is_object()) throw InputError("function must be a JSON object");
  Lattice lat = lattice_from(j.at("lattice"));
  QuasiPeriodicFn f(lat, j.contains("zero_value") ? rational_from(j.at("zero_value")) : Rational(0));
  if (j.contains("entries")) {
    if (!j.at("entries").is_array()) throw InputError("entries must be an array");
    for (const auto& e : j.at("entries")) {
      Point p = point_from(e.at("point"));
      lat.check_rank(p);
      f.add(p, rational_from(e.at("value")));
    }
  }
  return f;
}

inline json to_json(const Divisor& d) {
  json j = to_json(d.function());
  j["integer"] = true;
  return j;
}

/// Divisor input: zero_value defaults to the 0-coset value when omitted.
inline Divisor divisor_from(const json& j) {
  QuasiPeriodicFn f = qpf_from(j);
  if (!j.contains("zero_value")) f.set_zero_value(f.zero_coset_value());
  return Divisor(f);
}

inline json to_json(const TelescopeFn& t) { return {{"g", to_json(t.g())}, {"m", t.m().get_si()}}; }

inline TelescopeFn telescope_from(const json& j) { return TelescopeFn(qpf_from(j.at("g")), integer_from(j.at("m"))); }

inline json to_json(const Window& w) {
  json probes = json::array();
  for (const auto& p : w.probes) probes.push_back(to_json(p));
  return {{"bound", w.bound}, {"den_cap", w.den_cap}, {"probes", probes}};
}

inline Window window_from(const json& j) {
  Window w;
  w.bound = long_from(j.at("bound"));
  w.den_cap = long_from(j.at("den_cap"));
  if (j.contains("probes"))
    for (const auto& p : j.at("probes")) w.probes.push_back(point_from(p));
  return w;
}

inline json points_json(const std::set<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

inline json to_json(const PeriodicityCertificate& c) {
  return {{"result", to_json(c.result)},
          {"constant_c", to_string(c.constant_c)},
          {"window_checked", to_json(c.window_checked)},
          {"window_points", c.window_points},
          {"cross_telescope_checked", c.cross_telescope_checked},
          {"compatibility_checked", c.compatibility_checked},
          {"candidate_cosets", points_json(c.candidate_cosets)}};
}

inline json to_json(const SublatticeReport& r) {
  json j = {{"lattice_prime", to_json(r.lattice_prime)},
            {"n_P", r.n_p},
            {"n_Q", r.n_q},
            {"verified", r.verified},
            {"checks", r.checks}};
  return j;
}

inline json to_json(const ChainReport& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(to_json(p));
  return {{"z", to_json(c.z)},      {"points", pts},           {"exponents", c.exponents},
          {"exponent", c.exponent}, {"primitive", c.primitive}, {"chain_sum", to_string(c.chain_sum)}};
}

inline json to_json(const PrincipalityCertificate& c) {
  return {{"lattice_used", to_json(c.lattice_used)},
          {"summed_over", to_json(c.summed_over)},
          {"degree", to_string(Rational(c.degree))},
          {"aj", to_json(c.aj)},
          {"aj_in_lattice", c.aj_in_lattice},
          {"verdict", c.verdict},
          {"principal_in_k", c.principal_in_k}};
}

inline json to_json(const CocycleReport& r) {
  json j = {{"passed", r.passed},
            {"special", r.special},
            {"constant_terms", r.constant_terms},
            {"cocycle_identity", r.cocycle_identity}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

inline json to_json(const CoboundarySolution& s) {
  return {{"e", to_json(s.e)},
          {"certificate", to_json(s.certificate)},
          {"lattice_prime", to_json(s.lattice_prime)},
          {"D", s.d.get_si()},
          {"degree_e", to_string(Rational(s.degree_e))},
          {"degree_relation", s.degree_relation},
          {"aj_relation", s.aj_relation}};
}

inline json to_json(const Lemma1Walk& w) {
  return {{"chain", {w.x.get_str(), w.z.get_str(), w.y.get_str()}},
          {"relations", {"S", "T"}},
          {"P", w.p_part.get_str()},
          {"Q", w.q_part.get_str()},
          {"s", w.s.get_str()},
          {"t", w.t.get_str()},
          {"k", w.k.get_str()},
          {"x_sim_S_z", w.x_sim_z},
          {"z_sim_T_y", w.z_sim_y}};
}

inline PrimeSet prime_set_from(const json& j) {
  PrimeSet s;
  if (!j.is_array()) throw InputError("prime set must be an array");
  for (const auto& x : j) s.insert(long_from(x));
  return s;
}

/// "re,im".
inline Complex complex_from(const std::string& text) {
  auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(text, &used);
      if (used != text.size()) throw InputError("bad complex '" + text + "'");
      return {re, 0.0};
    }
    std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    double re = std::stod(a, &used);
    if (used != a.size()) throw InputError("bad complex '" + text + "'");
    double im = std::stod(b, &used);
    if (used != b.size()) throw InputError("bad complex '" + text + "'");
    return {re, im};
  } catch (const std::logic_error&) {
    throw InputError("bad complex '" + text + "', expected \"re,im\"");
  }
}

inline json to_json(Complex z) { return {z.real(), z.imag()}; }

}  // namespace perioda::io
