#pragma once

#include <cstdint>
#include <algorithm>
#include <map>
#include <optional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "perioda/rational.hpp"

namespace perioda {

using PrimeSet = std::set<long>;

inline void check_prime_set(const PrimeSet& s, const char* name) {
  if (s.empty()) throw InputError(std::string(name) + " must be a non-empty set of primes");
  for (long p : s)
    if (!is_prime(Integer(p))) throw InputError(std::string(name) + " contains non-prime " + std::to_string(p));
}

/// Strips the primes of S from x, keeping the sign; valuations go to vals.
inline Integer prime_to_part(Integer x, const PrimeSet& primes, std::vector<long>* vals = nullptr) {
  for (long p : primes) {
    long v = 0;
    while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) {
      x /= p;
      ++v;
    }
    if (vals) vals->push_back(v);
  }
  return x;
}

/// x ~_S y: equal valuations at every p in S and congruent prime-to-S parts
/// (signs retained) mod N. The class of 0 is {0}.
inline bool sim_s(const Integer& x, const Integer& y, const PrimeSet& primes, const Integer& modulus) {
  if (modulus < 1) throw InputError("modulus N must be >= 1");
  if (x == 0 || y == 0) return x == 0 && y == 0;
  std::vector<long> vx, vy;
  Integer px = prime_to_part(x, primes, &vx);
  Integer py = prime_to_part(y, primes, &vy);
  if (vx != vy) return false;
  Integer diff = px - py;
  return mpz_divisible_p(diff.get_mpz_t(), modulus.get_mpz_t()) != 0;
}

/// Three-term chain x ~_S z ~_T y with its Bezout data.
struct Lemma1Walk {
  Integer x, z, y;
  Integer p_part;  // prod_{p in S} p^{v_p(x)+1}
  Integer q_part;  // prod_{q in T} q^{v_q(y)+1}
  Integer s, t, k;
  bool x_sim_z = false;  // checked with sim_s
  bool z_sim_y = false;
};

/// Builds z = x + s*P*N = y + t*Q*N from s*P - t*Q = k, y = x + k*N, with s the
/// least non-negative solution.
inline Lemma1Walk lemma1_walk(const Integer& x, const Integer& y, const Integer& modulus, const PrimeSet& s_primes,
                              const PrimeSet& t_primes) {
  check_prime_set(s_primes, "S");
  check_prime_set(t_primes, "T");
  for (long p : s_primes)
    if (t_primes.count(p)) throw InputError("S and T must be disjoint");
  if (modulus < 1) throw InputError("modulus N must be >= 1");
  if (x == 0 || y == 0) throw InputError("x and y must be nonzero");
  Integer diff = y - x;
  if (!mpz_divisible_p(diff.get_mpz_t(), modulus.get_mpz_t())) throw InputError("x and y are not congruent mod N");

  Lemma1Walk w;
  w.x = x;
  w.y = y;
  w.k = diff / modulus;
  w.p_part = 1;
  for (long p : s_primes) w.p_part *= pow(Integer(p), static_cast<unsigned long>(valuation(x, Integer(p)) + 1));
  w.q_part = 1;
  for (long q : t_primes) w.q_part *= pow(Integer(q), static_cast<unsigned long>(valuation(y, Integer(q)) + 1));

  Integer a, b;
  Integer g = ext_gcd(w.p_part, w.q_part, a, b);
  if (g != 1) throw TheoremViolation("gcd(P, Q) != 1 for disjoint prime sets");
  // a*P + b*Q = 1, so s = a*k (mod Q) solves s*P = k (mod Q).
  Integer s = a * w.k;
  mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), w.q_part.get_mpz_t());
  w.s = s;
  w.t = (w.s * w.p_part - w.k) / w.q_part;
  w.z = x + w.s * w.p_part * modulus;
  if (w.z != y + w.t * w.q_part * modulus) throw TheoremViolation("lemma1 walk endpoints disagree");
  w.x_sim_z = sim_s(x, w.z, s_primes, modulus);
  w.z_sim_y = sim_s(w.z, y, t_primes, modulus);
  return w;
}

/// Union-find closure of ~_S and ~_T on [-range, range] \ {0}.
struct ClosureResult {
  /// Classes as sorted lists; ordered by smallest element.
  std::vector<std::vector<long>> classes;
  /// Some class mixes residues mod N (would contradict the easy direction).
  bool contained_in_residues = true;
  /// Every residue class mod N met by the range is a single class.
  bool equals_residues = true;
  /// On failure of equals_residues: two congruent elements left unjoined.
  std::optional<std::pair<long, long>> split_witness;
  /// On failure of contained_in_residues: two joined non-congruent elements.
  std::optional<std::pair<long, long>> merge_witness;
};

inline ClosureResult equivalence_closure_bruteforce(long range, long modulus, const PrimeSet& s_primes,
                                                    const PrimeSet& t_primes) {
  check_prime_set(s_primes, "S");
  check_prime_set(t_primes, "T");
  for (long p : s_primes)
    if (t_primes.count(p)) throw InputError("S and T must be disjoint");
  if (modulus < 1) throw InputError("modulus N must be >= 1");
  if (range < 1) throw InputError("range must be >= 1");

  std::vector<long> values;
  for (long v = -range; v <= range; ++v)
    if (v != 0) values.push_back(v);
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  // Elements related under ~_S share the key (valuations, prime-to-S part mod N),
  // so bucketing by key realizes every pair at once.
  auto bucket = [&](const PrimeSet& primes) {
    std::map<std::pair<std::vector<long>, long>, std::size_t> first;
    for (std::size_t i = 0; i < n; ++i) {
      long x = values[i];
      std::vector<long> vals;
      for (long p : primes) {
        long v = 0;
        while (x % p == 0) {
          x /= p;
          ++v;
        }
        vals.push_back(v);
      }
      long res = ((x % modulus) + modulus) % modulus;
      auto [it, inserted] = first.try_emplace({vals, res}, i);
      if (!inserted) unite(it->second, i);
    }
  };
  bucket(s_primes);
  bucket(t_primes);

  std::map<std::size_t, std::vector<long>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(values[i]);
  ClosureResult out;
  std::map<long, long> residue_owner;  // residue -> representative class min
  for (auto& [root, members] : by_root) {
    long r0 = ((members.front() % modulus) + modulus) % modulus;
    for (long v : members) {
      long r = ((v % modulus) + modulus) % modulus;
      if (r != r0 && out.contained_in_residues) {
        out.contained_in_residues = false;
        out.merge_witness = std::make_pair(members.front(), v);
      }
    }
    auto [it, inserted] = residue_owner.try_emplace(r0, members.front());
    if (!inserted && out.equals_residues) {
      out.equals_residues = false;
      out.split_witness = std::make_pair(it->second, members.front());
    }
    out.classes.push_back(members);
  }
  if (!out.contained_in_residues) out.equals_residues = false;
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

}  // namespace perioda
