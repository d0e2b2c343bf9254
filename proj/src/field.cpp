#include "shiftbreak/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shiftbreak/error.hpp"

namespace shiftbreak {

Residue pow_mod(Residue a, std::uint64_t k, std::uint64_t m) {
  Residue result = 1 % m;
  a %= m;
  while (k > 0) {
    if (k & 1) result = mul_mod(result, a, m);
    a = mul_mod(a, a, m);
    k >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is exact below 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Residue x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<PrimeFactor> factorize(std::uint64_t n) {
  std::vector<PrimeFactor> out;
  auto strip = [&](std::uint64_t q) {
    unsigned k = 0;
    while (n % q == 0) {
      n /= q;
      ++k;
    }
    if (k > 0) out.push_back({q, k});
  };
  strip(2);
  for (std::uint64_t q = 3; q <= n / q; q += 2) strip(q);
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [q, k] : factorize(n)) {
    const std::size_t base = out.size();
    std::uint64_t power = 1;
    for (unsigned i = 0; i < k; ++i) {
      power *= q;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned valuation(std::uint64_t n, std::uint64_t ell) {
  unsigned k = 0;
  while (n % ell == 0) {
    n /= ell;
    ++k;
  }
  return k;
}

unsigned PrimeContext::alpha(std::uint64_t ell) const noexcept {
  for (const auto& f : factors_) {
    if (f.prime == ell) return f.multiplicity;
  }
  return 0;
}

Residue PrimeContext::reduce(std::int64_t v) const noexcept {
  const auto m = static_cast<std::int64_t>(p_);
  std::int64_t r = v % m;
  return static_cast<Residue>(r < 0 ? r + m : r);
}

Residue PrimeContext::inv(Residue a) const {
  if (a % p_ == 0) throw Error(Errc::NoInverse, "zero has no inverse");
  return pow_mod(a, p_ - 2, p_);
}

PrimeContext make_context(std::uint64_t p) {
  if (p < 3 || p >= kModulusLimit) {
    throw Error(Errc::Overflow, "modulus must lie in [3, 2^61)");
  }
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is composite");
  auto factors = factorize(p - 1);
  Residue g = 2;
  for (;; ++g) {
    bool primitive = std::all_of(factors.begin(), factors.end(), [&](const PrimeFactor& f) {
      return pow_mod(g, (p - 1) / f.prime, p) != 1;
    });
    if (primitive) break;
  }
  return PrimeContext(p, g, std::move(factors));
}

ExponentParams make_exponent(const PrimeContext& ctx, std::uint64_t e) {
  if (e == 0 || ctx.group_order() % e != 0) {
    throw Error(Errc::NotDivisor, std::to_string(e) + " does not divide p - 1");
  }
  return ExponentParams(e, ctx.group_order() / e, factorize(e));
}

Residue mod_pow(Residue a, std::uint64_t k, const PrimeContext& ctx) { return ctx.pow(a, k); }

Residue mod_inv(Residue a, const PrimeContext& ctx) { return ctx.inv(a); }

std::vector<Residue> subgroup_elements(const PrimeContext& ctx, const ExponentParams& params) {
  const Residue step = ctx.pow(ctx.g(), params.d());
  std::vector<Residue> out;
  out.reserve(params.e());
  Residue cur = 1;
  for (std::uint64_t k = 0; k < params.e(); ++k) {
    out.push_back(cur);
    cur = ctx.mul(cur, step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t IndexTable::ind(Residue x) const {
  if (x == 0 || x >= p_) throw Error(Errc::OutOfRange, "index defined on [1, p - 1] only");
  return ind_[x];
}

IndexTable build_index_table(const PrimeContext& ctx) {
  if (ctx.p() > kDenseIndexCap) {
    throw Error(Errc::TooLarge, "dense index table is capped at p <= 2^24");
  }
  IndexTable table(ctx.p());
  Residue cur = 1;
  for (std::uint64_t k = 1; k < ctx.p(); ++k) {
    cur = ctx.mul(cur, ctx.g());
    table.ind_[cur] = static_cast<std::uint32_t>(k);
  }
  return table;
}

std::complex<double> character_eval(const IndexTable& table, const ExponentParams& params,
                                    std::uint64_t j, Residue x) {
  if (j >= params.d()) throw Error(Errc::OutOfRange, "character index must be below d");
  if (x % table.p() == 0) return {0.0, 0.0};
  const auto phase = static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(j) * table.ind(x % table.p()) % params.d());
  const double angle =
      2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(params.d());
  return std::polar(1.0, angle);
}

Residue least_nonresidue(const PrimeContext& ctx, std::uint64_t ell) {
  if (ell < 2 || ctx.group_order() % ell != 0) {
    throw Error(Errc::NotDividing, "ell must divide p - 1");
  }
  const std::uint64_t k = ctx.group_order() / ell;
  for (Residue a = 2;; ++a) {
    if (ctx.pow(a, k) != 1) return a;
  }
}

PowerTable::PowerTable(const PrimeContext& ctx, std::uint64_t e) : p_(ctx.p()), e_(e) {
  if (p_ > kTableCap) return;
  table_.resize(p_);
  for (Residue v = 0; v < p_; ++v) table_[v] = pow_mod(v, e, p_);
}

}  // namespace shiftbreak
