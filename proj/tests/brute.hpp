#pragma once

// Naive reference computations for small primes, written independently of
// the library so they can serve as test oracles.

#include <algorithm>
#include <cmath>
#include <string>
#include <cstdint>
#include <vector>

#include "shiftbreak/oracle.hpp"

namespace shiftbreak {

struct OracleTestAccess {
  static Residue secret(const ShiftOracle& o) { return o.secret_; }
};

}  // namespace shiftbreak

namespace brute {

using u64 = std::uint64_t;

inline u64 power(u64 a, u64 k, u64 p) {
  u64 r = 1 % p;
  a %= p;
  for (u64 i = 0; i < k; ++i) r = r * a % p;
  return r;
}

inline bool prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<u64> primes_below(u64 n) {
  std::vector<u64> out;
  for (u64 q = 3; q < n; ++q) {
    if (prime(q)) out.push_back(q);
  }
  return out;
}

inline std::vector<u64> divisors_of(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

inline u64 inverse(u64 a, u64 p) {
  for (u64 b = 1; b < p; ++b) {
    if (a * b % p == 1) return b;
  }
  return 0;
}

// Table of v^e for v in [0, p).
inline std::vector<u64> powers(u64 p, u64 e) {
  std::vector<u64> out(p);
  for (u64 v = 0; v < p; ++v) out[v] = power(v, e, p);
  return out;
}

inline std::vector<u64> roots(u64 p, u64 e, u64 a) {
  std::vector<u64> out;
  for (u64 x = 0; x < p; ++x) {
    if (power(x, e, p) == a % p) out.push_back(x);
  }
  return out;
}

// ind(x) in [1, p - 1] for the generator g.
inline std::vector<u64> indices(u64 p, u64 g) {
  std::vector<u64> ind(p, 0);
  u64 x = 1;
  for (u64 k = 1; k < p; ++k) {
    x = x * g % p;
    ind[x] = k;
  }
  return ind;
}

// N(e) by checking every start x and every coset representative r.
inline u64 coset_run(u64 p, u64 e) {
  const auto pw = powers(p, e);
  u64 best = 0;
  for (u64 x = 0; x < p; ++x) {
    for (u64 r = 1; r < p; ++r) {
      u64 h = 0;
      while (h + 1 < p) {
        const u64 v = (x + h + 1) % p;
        if (v == 0 || pw[v] != pw[r]) break;
        ++h;
      }
      best = std::max(best, h);
    }
  }
  return best;
}

}  // namespace brute

namespace brute {

// Least absolute representative distance between a and b modulo p.
inline u64 circ_dist(u64 p, u64 a, u64 b) {
  const u64 d = a > b ? a - b : b - a;
  return std::min(d, p - d);
}

inline bool spaced(u64 p, const std::vector<u64>& set) {
  const double u = std::sqrt(static_cast<double>(p)) / 3.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (static_cast<double>(circ_dist(p, set[i], set[j])) < u) return false;
    }
  }
  return true;
}

// Properties (i)-(iv) of a partition of S into spaced pieces, checked from
// scratch: disjoint subsets of S, sizes, spacing of D_k and of xi * E_l,
// and the leftover bound.
inline std::string partition_defect(u64 p, const std::vector<u64>& s, double kappa,
                                    const std::vector<std::vector<u64>>& d_sets,
                                    const std::vector<std::vector<u64>>& e_sets,
                                    const std::vector<u64>& leftover) {
  const double n = static_cast<double>(s.size());
  const double min_size = 0.25 * std::pow(static_cast<double>(p), -kappa) * std::sqrt(n);
  u64 xi = 0;
  while ((xi + 1) * (xi + 1) <= p) ++xi;
  std::vector<int> uses(p, 0);
  for (const auto& d : d_sets) {
    if (static_cast<double>(d.size()) < min_size) return "D set too small";
    if (!spaced(p, d)) return "D set not spaced";
    for (u64 x : d) ++uses[x];
  }
  for (const auto& e : e_sets) {
    if (static_cast<double>(e.size()) < min_size) return "E set too small";
    std::vector<u64> dilated;
    for (u64 x : e) dilated.push_back(xi * x % p);
    if (!spaced(p, dilated)) return "dilated E set not spaced";
    for (u64 x : e) ++uses[x];
  }
  if (static_cast<double>(leftover.size()) > 2.0 * std::pow(static_cast<double>(p), -kappa) * n) {
    return "leftover too large";
  }
  for (u64 x : leftover) ++uses[x];
  std::vector<int> member(p, 0);
  for (u64 x : s) member[x] = 1;
  for (u64 x = 0; x < p; ++x) {
    if (uses[x] != member[x]) return "pieces are not a disjoint cover of S";
  }
  return "";
}

}  // namespace brute
