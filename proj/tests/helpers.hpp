#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "perioda/random_instances.hpp"

namespace perioda::testing {

using perioda::Rng;

inline Rational q(long n, long d = 1) { return make_rational(n, d); }
inline Rational q(const char* s) { return parse_rational(s); }

/// Rational point from "a/b" strings.
inline Point pt(std::initializer_list<const char*> coords) {
  std::vector<Rational> r;
  for (const char* c : coords) r.push_back(parse_rational(c));
  return Point::rational(r);
}

/// Point with rational and alpha parts.
inline Point pta(std::initializer_list<const char*> rat, std::initializer_list<const char*> irr) {
  std::vector<Rational> r, i;
  for (const char* c : rat) r.push_back(parse_rational(c));
  for (const char* c : irr) i.push_back(parse_rational(c));
  return Point::from_parts(r, i);
}

inline Lattice lat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Rational>> m;
  for (const auto& row : rows) {
    m.emplace_back();
    for (long v : row) m.back().push_back(Rational(v));
  }
  return Lattice::from_rows(m);
}

}  // namespace perioda::testing
