#include "shiftbreak/lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "shiftbreak/error.hpp"

namespace shiftbreak {
namespace {

void require_prime(std::uint64_t p) {
  if (p < 3 || p >= kModulusLimit) throw Error(Errc::Overflow, "modulus out of range");
  if (!is_prime(p)) throw Error(Errc::NotPrime, "modulus is not prime");
}

Residue inverse(Residue a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

void require_enumerable(std::uint64_t h, unsigned nu) {
  long double total = 1;
  for (unsigned i = 0; i < nu; ++i) total *= static_cast<long double>(h);
  if (total > static_cast<long double>(kEnumerationCap)) {
    throw Error(Errc::TooLarge, "h^nu exceeds the enumeration cap");
  }
}

// All products prod (x_i + s) over x in [1, h]^k.
std::vector<Residue> tuple_products(std::uint64_t p, unsigned k, Residue s, std::uint64_t h) {
  std::vector<Residue> out{1};
  for (unsigned i = 0; i < k; ++i) {
    std::vector<Residue> next;
    next.reserve(out.size() * h);
    for (Residue prod : out) {
      for (std::uint64_t x = 1; x <= h; ++x) next.push_back(mul_mod(prod, (x + s) % p, p));
    }
    out.swap(next);
  }
  return out;
}

class ResidueSet {
 public:
  explicit ResidueSet(std::uint64_t p) {
    if (p <= (std::uint64_t{1} << 26)) bits_.assign(p, false);
  }
  bool insert(Residue x) {
    if (!bits_.empty()) {
      if (bits_[x]) return false;
      bits_[x] = true;
      ++size_;
      return true;
    }
    const bool added = hashed_.insert(x).second;
    size_ += added ? 1 : 0;
    return added;
  }
  std::uint64_t size() const { return size_; }

 private:
  std::vector<bool> bits_;
  std::unordered_set<Residue> hashed_;
  std::uint64_t size_ = 0;
};

bool within_third_root(std::uint64_t p, std::uint64_t dist) {
  return 9 * static_cast<unsigned __int128>(dist) * dist < p;
}

// Greedy maximal spaced subset of a sorted list; every skipped element is
// closer than sqrt(p)/3 to a chosen one.
std::vector<Residue> greedy_spaced(std::uint64_t p, const std::vector<Residue>& sorted) {
  std::vector<Residue> chosen;
  for (Residue z : sorted) {
    if (!chosen.empty() && (within_third_root(p, centered_abs(p, z + p - chosen.back())) ||
                            within_third_root(p, centered_abs(p, z + p - chosen.front())))) {
      continue;
    }
    chosen.push_back(z);
  }
  return chosen;
}

void require_character(const ExponentParams& params, std::uint64_t j, bool nonprincipal) {
  if (j >= params.d()) throw Error(Errc::OutOfRange, "character index must be below d");
  if (nonprincipal && j == 0) throw Error(Errc::PrincipalCharacter, "j must be nonzero");
}

}  // namespace

std::uint64_t longest_coset_run(const PrimeContext& ctx, const ExponentParams& params) {
  if (ctx.p() > kCosetRunCap) throw Error(Errc::TooLarge, "p above the exhaustive N(e) cap");
  const PowerTable pw(ctx, params.e());
  std::uint64_t best = 0, run = 0;
  Residue prev = 0;
  for (Residue v = 1; v < ctx.p(); ++v) {
    const Residue label = pw(v);
    run = (v > 1 && label == prev) ? run + 1 : 1;
    best = std::max(best, run);
    prev = label;
  }
  return best;
}

std::uint64_t hyperbola_count(std::uint64_t p, Residue u, Residue v, std::uint64_t H) {
  require_prime(p);
  if (H >= p) throw Error(Errc::OutOfRange, "H must be below p");
  u %= p;
  v %= p;
  if (v == 0) throw Error(Errc::BadV, "v must be invertible");
  std::uint64_t count = 0;
  for (std::uint64_t x = 1; x <= H; ++x) {
    const Residue a = (x + u) % p;
    if (a == 0) continue;
    const Residue y = (mul_mod(v, inverse(a, p), p) + p - u) % p;
    if (y >= 1 && y <= H) ++count;
  }
  return count;
}

std::uint64_t multiplicative_energy_count(std::uint64_t p, Residue a, std::uint64_t H) {
  require_prime(p);
  if (H >= p) throw Error(Errc::OutOfRange, "H must be below p");
  require_enumerable(H, 2);
  std::vector<Residue> products = tuple_products(p, 2, a % p, H);
  std::sort(products.begin(), products.end());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < products.size();) {
    std::size_t j = i;
    while (j < products.size() && products[j] == products[i]) ++j;
    total += static_cast<std::uint64_t>(j - i) * (j - i);
    i = j;
  }
  return total;
}

std::uint64_t subgroup_shift_intersection(const PrimeContext& ctx, const ExponentParams& params,
                                          const std::vector<Shift>& shifts) {
  if (shifts.empty()) throw Error(Errc::InvalidArgument, "need at least one shift");
  if (params.e() > kEnumerationCap) throw Error(Errc::TooLarge, "subgroup too large to list");
  std::vector<std::pair<Residue, Residue>> prepared;  // (mu, lambda^-1)
  std::vector<Residue> mus;
  for (const Shift& sh : shifts) {
    const Residue lambda = sh.lambda % ctx.p(), mu = sh.mu % ctx.p();
    if (lambda == 0 || mu == 0) throw Error(Errc::DegenerateShift, "lambda and mu must be nonzero");
    prepared.emplace_back(mu, ctx.inv(lambda));
    mus.push_back(mu);
  }
  std::sort(mus.begin(), mus.end());
  if (std::adjacent_find(mus.begin(), mus.end()) != mus.end()) {
    throw Error(Errc::DegenerateShift, "shifts must be pairwise distinct");
  }
  std::uint64_t count = 0;
  for (Residue z : subgroup_elements(ctx, params)) {
    const bool inside = std::all_of(prepared.begin(), prepared.end(), [&](const auto& sh) {
      const Residue w = ctx.mul(ctx.sub(z, sh.first), sh.second);
      return w != 0 && ctx.pow(w, params.e()) == 1;
    });
    if (inside) ++count;
  }
  return count;
}

std::uint64_t product_count_J(const PrimeContext& ctx, unsigned nu, Residue lambda, Residue s,
                              std::uint64_t h) {
  if (nu < 1 || nu > 4) throw Error(Errc::InvalidArgument, "nu must lie in 1..4");
  lambda %= ctx.p();
  if (lambda == 0) throw Error(Errc::InvalidArgument, "lambda must be nonzero");
  if (h == 0) return 0;
  require_enumerable(h, nu);
  const std::uint64_t p = ctx.p();
  std::vector<Residue> left = tuple_products(p, nu / 2, s % p, h);
  std::sort(left.begin(), left.end());
  std::uint64_t count = 0;
  for (Residue r : tuple_products(p, nu - nu / 2, s % p, h)) {
    if (r == 0) continue;
    const Residue target = ctx.mul(lambda, ctx.inv(r));
    const auto [lo, hi] = std::equal_range(left.begin(), left.end(), target);
    count += static_cast<std::uint64_t>(hi - lo);
  }
  return count;
}

std::uint64_t product_set_size(const PrimeContext& ctx, unsigned nu, Residue s,
                               std::optional<Residue> t, std::uint64_t h) {
  if (nu < 1 || nu > 4) throw Error(Errc::InvalidArgument, "nu must lie in 1..4");
  const std::uint64_t p = ctx.p();
  s %= p;
  if (t && *t % p == s) throw Error(Errc::DegeneratePair, "fractional kind needs s != t");
  require_enumerable(h, nu);

  std::vector<Residue> base;
  {
    ResidueSet seen(p);
    for (std::uint64_t x = 1; x <= h; ++x) {
      Residue a = (x + s) % p;
      if (t) {
        const Residue den = (x + *t) % p;
        if (den == 0) continue;
        a = ctx.mul(a, ctx.inv(den));
      }
      if (seen.insert(a)) base.push_back(a);
    }
  }
  std::vector<Residue> current = base;
  for (unsigned k = 1; k < nu; ++k) {
    ResidueSet seen(p);
    std::vector<Residue> next;
    for (Residue c : current) {
      for (Residue a : base) {
        const Residue prod = ctx.mul(c, a);
        if (seen.insert(prod)) next.push_back(prod);
      }
    }
    current.swap(next);
  }
  return current.size();
}

std::uint64_t centered_abs(std::uint64_t p, Residue x) {
  x %= p;
  return std::min(x, p - x);
}

bool is_third_root_spaced(std::uint64_t p, const std::vector<Residue>& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (within_third_root(p, centered_abs(p, set[i] + p - set[j]))) return false;
    }
  }
  return true;
}

SpacedPartition spaced_partition(std::uint64_t p, std::vector<Residue> s, double kappa) {
  require_prime(p);
  if (p < 37) throw Error(Errc::OutOfRange, "p must be at least 37");
  if (!(kappa >= 0.0)) throw Error(Errc::InvalidArgument, "kappa must be nonnegative");
  for (Residue x : s) {
    if (x >= p) throw Error(Errc::OutOfRange, "element is not a residue");
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const auto n = static_cast<double>(s.size());
  const double pd = static_cast<double>(p);
  if (n < 16.0 * std::pow(pd, 2.0 * kappa)) {
    throw Error(Errc::TooSmall, "|S| below 16 p^(2 kappa)");
  }

  SpacedPartition out;
  std::vector<Residue> rest = s;
  std::vector<Residue> cover;
  for (;;) {
    std::vector<Residue> spaced = greedy_spaced(p, rest);
    if (static_cast<double>(spaced.size()) < std::sqrt(n)) {
      cover = std::move(spaced);
      break;
    }
    std::vector<Residue> remaining;
    std::set_difference(rest.begin(), rest.end(), spaced.begin(), spaced.end(),
                        std::back_inserter(remaining));
    out.d_sets.push_back(std::move(spaced));
    rest.swap(remaining);
  }

  // Pieces T cap [x - U, x + U] around each cover point; big ones are kept.
  const double big = std::pow(pd, -kappa) * std::sqrt(n);
  std::vector<std::vector<Residue>> pieces(cover.size());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (Residue z : rest) {
      if (within_third_root(p, centered_abs(p, z + p - cover[i]))) pieces[i].push_back(z);
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (static_cast<double>(pieces[i].size()) > big) kept.push_back(i);
  }

  // Elements shared by two kept pieces are split floor/ceil between them.
  std::vector<std::vector<std::size_t>> owners(rest.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (Residue z : pieces[kept[k]]) {
      const auto pos = std::lower_bound(rest.begin(), rest.end(), z) - rest.begin();
      owners[pos].push_back(k);
    }
  }
  out.e_sets.assign(kept.size(), {});
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Residue>> pairs;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (owners[i].empty()) {
      out.leftover.push_back(rest[i]);
    } else if (owners[i].size() == 1) {
      out.e_sets[owners[i][0]].push_back(rest[i]);
    } else {
      pairs.push_back({{owners[i][0], owners[i][1]}, rest[i]});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].first == pairs[i].first) ++j;
    const std::size_t half = (j - i) / 2;
    for (std::size_t k = i; k < j; ++k) {
      const auto owner = k - i < half ? pairs[k].first.first : pairs[k].first.second;
      out.e_sets[owner].push_back(pairs[k].second);
    }
    i = j;
  }
  for (auto& set : out.e_sets) std::sort(set.begin(), set.end());
  return out;
}

bool spaced_partition_valid(std::uint64_t p, const std::vector<Residue>& s, double kappa,
                            const SpacedPartition& part) {
  std::vector<Residue> all(s);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const auto n = static_cast<double>(all.size());
  const double floor_size = 0.25 * std::pow(static_cast<double>(p), -kappa) * std::sqrt(n);
  const std::uint64_t xi = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(p)));

  std::vector<Residue> seen;
  for (const auto& d : part.d_sets) {
    if (static_cast<double>(d.size()) < floor_size || !is_third_root_spaced(p, d)) return false;
    seen.insert(seen.end(), d.begin(), d.end());
  }
  for (const auto& e : part.e_sets) {
    std::vector<Residue> dilated;
    for (Residue x : e) dilated.push_back(mul_mod(xi, x, p));
    if (static_cast<double>(e.size()) < floor_size || !is_third_root_spaced(p, dilated)) {
      return false;
    }
    seen.insert(seen.end(), e.begin(), e.end());
  }
  if (static_cast<double>(part.leftover.size()) >
      2.0 * std::pow(static_cast<double>(p), -kappa) * n) {
    return false;
  }
  seen.insert(seen.end(), part.leftover.begin(), part.leftover.end());
  std::sort(seen.begin(), seen.end());
  return seen == all;
}

std::complex<double> char_sum_fraction(const PrimeContext& ctx, const IndexTable& table,
                                       const ExponentParams& params, std::uint64_t j, Residue s,
                                       Residue t, std::uint64_t h) {
  require_character(params, j, false);
  const std::uint64_t p = ctx.p();
  s %= p;
  t %= p;
  if (s == t) throw Error(Errc::DegeneratePair, "s and t must differ");
  if (h > p) throw Error(Errc::OutOfRange, "h must not exceed p");
  std::complex<double> total = 0;
  for (std::uint64_t x = 1; x <= h; ++x) {
    const Residue den = (x + t) % p;
    if (den == 0) continue;
    total += character_eval(table, params, j, ctx.mul((x + s) % p, ctx.inv(den)));
  }
  return total;
}

std::complex<double> char_sum_interval(const IndexTable& table, const ExponentParams& params,
                                       std::uint64_t j, std::uint64_t h) {
  require_character(params, j, true);
  if (h > table.p()) throw Error(Errc::OutOfRange, "h must not exceed p");
  std::complex<double> total = 0;
  for (std::uint64_t y = 1; y <= h; ++y) total += character_eval(table, params, j, y % table.p());
  return total;
}

std::complex<double> char_sum_shifted_power(const PrimeContext& ctx, const IndexTable& table,
                                            const ExponentParams& params, std::uint64_t j,
                                            std::uint64_t f, Residue a) {
  require_character(params, j, true);
  std::complex<double> total = 0;
  for (std::uint64_t x = 1; x <= ctx.p(); ++x) {
    total += character_eval(table, params, j, ctx.add(ctx.pow(x % ctx.p(), f), a % ctx.p()));
  }
  return total;
}

std::uint64_t psi_count(std::uint64_t x, std::uint64_t y) {
  if (x > kEnumerationCap) throw Error(Errc::TooLarge, "x above the sieve cap");
  if (x == 0) return 0;
  if (y >= x) return x;
  if (y < 2) return 1;

  // After dividing out every prime up to min(y, sqrt x), n is y-smooth
  // exactly when what remains is at most y.
  std::uint64_t limit = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while ((limit + 1) * (limit + 1) <= x) ++limit;
  limit = std::min(limit, y);
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t q = 2; q <= limit; ++q) {
    if (composite[q]) continue;
    primes.push_back(q);
    for (std::uint64_t m = q * q; m <= limit; m += q) composite[m] = true;
  }

  constexpr std::uint64_t kBlock = 1 << 16;
  std::vector<std::uint64_t> rem(kBlock);
  std::uint64_t count = 0;
  for (std::uint64_t lo = 1; lo <= x; lo += kBlock) {
    const std::uint64_t hi = std::min(x, lo + kBlock - 1);
    for (std::uint64_t n = lo; n <= hi; ++n) rem[n - lo] = n;
    for (std::uint64_t q : primes) {
      for (std::uint64_t m = (lo + q - 1) / q * q; m <= hi; m += q) {
        std::uint64_t& r = rem[m - lo];
        do r /= q;
        while (r % q == 0);
      }
    }
    for (std::uint64_t n = lo; n <= hi; ++n) count += rem[n - lo] <= y ? 1 : 0;
  }
  return count;
}

std::uint64_t smooth_subgroup_order(const PrimeContext& ctx, const IndexTable& table,
                                    std::uint64_t y) {
  if (y == 0) throw Error(Errc::InvalidArgument, "y must be positive");
  const std::uint64_t q = ctx.p() - 1;
  std::uint64_t g = q;
  for (std::uint64_t x = 1; x <= std::min(y, q) && g > 1; ++x) g = std::gcd(g, table.ind(x));
  return q / g;
}

}  // namespace shiftbreak
