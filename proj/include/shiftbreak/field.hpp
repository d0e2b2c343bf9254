#pragma once

// Prime-field arithmetic over F_p with p < 2^61, the multiplicative group
// F_p^* and its subgroups G_e = {mu : mu^e = 1}, discrete indices and the
// multiplicative characters trivial on G_e.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace shiftbreak {

using Residue = std::uint64_t;

inline constexpr std::uint64_t kModulusLimit = std::uint64_t{1} << 61;
inline constexpr std::uint64_t kDenseIndexCap = std::uint64_t{1} << 24;

struct PrimeFactor {
  std::uint64_t prime;
  unsigned multiplicity;

  bool operator==(const PrimeFactor&) const = default;
};

inline Residue mul_mod(Residue a, Residue b, std::uint64_t m) {
  return static_cast<Residue>(static_cast<unsigned __int128>(a) * b % m);
}

Residue pow_mod(Residue a, std::uint64_t k, std::uint64_t m);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Trial-division factorization, ascending primes.
std::vector<PrimeFactor> factorize(std::uint64_t n);

std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Largest k with ell^k | n (n > 0).
unsigned valuation(std::uint64_t n, std::uint64_t ell);

/// A validated prime modulus together with its least primitive root and the
/// factorization of p - 1. Immutable.
class PrimeContext {
 public:
  std::uint64_t p() const noexcept { return p_; }
  Residue g() const noexcept { return g_; }
  std::uint64_t group_order() const noexcept { return p_ - 1; }
  const std::vector<PrimeFactor>& group_order_factors() const noexcept { return factors_; }

  /// alpha_ell with ell^alpha || p - 1; zero when ell does not divide p - 1.
  unsigned alpha(std::uint64_t ell) const noexcept;

  Residue reduce(std::int64_t v) const noexcept;
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return mul_mod(a, b, p_); }
  Residue pow(Residue a, std::uint64_t k) const { return pow_mod(a, k, p_); }
  Residue inv(Residue a) const;

 private:
  friend PrimeContext make_context(std::uint64_t p);
  PrimeContext(std::uint64_t p, Residue g, std::vector<PrimeFactor> factors)
      : p_(p), g_(g), factors_(std::move(factors)) {}

  std::uint64_t p_;
  Residue g_;
  std::vector<PrimeFactor> factors_;
};

/// Throws NotPrime for composite p, Overflow outside [3, 2^61).
PrimeContext make_context(std::uint64_t p);

/// The oracle exponent e | p - 1 with cofactor d = (p - 1) / e.
class ExponentParams {
 public:
  std::uint64_t e() const noexcept { return e_; }
  std::uint64_t d() const noexcept { return d_; }
  const std::vector<PrimeFactor>& e_factors() const noexcept { return e_factors_; }

 private:
  friend ExponentParams make_exponent(const PrimeContext& ctx, std::uint64_t e);
  ExponentParams(std::uint64_t e, std::uint64_t d, std::vector<PrimeFactor> f)
      : e_(e), d_(d), e_factors_(std::move(f)) {}

  std::uint64_t e_;
  std::uint64_t d_;
  std::vector<PrimeFactor> e_factors_;
};

/// Throws NotDivisor unless 1 <= e and e | p - 1.
ExponentParams make_exponent(const PrimeContext& ctx, std::uint64_t e);

Residue mod_pow(Residue a, std::uint64_t k, const PrimeContext& ctx);
Residue mod_inv(Residue a, const PrimeContext& ctx);

/// G_e in ascending order.
std::vector<Residue> subgroup_elements(const PrimeContext& ctx, const ExponentParams& params);

/// Dense discrete-log table, ind(x) in [1, p - 1] with g^ind(x) = x.
class IndexTable {
 public:
  std::uint64_t p() const noexcept { return p_; }
  std::uint32_t ind(Residue x) const;

 private:
  friend IndexTable build_index_table(const PrimeContext& ctx);
  explicit IndexTable(std::uint64_t p) : p_(p), ind_(p, 0) {}

  std::uint64_t p_;
  std::vector<std::uint32_t> ind_;
};

/// Throws TooLarge above kDenseIndexCap.
IndexTable build_index_table(const PrimeContext& ctx);

/// chi_j(x) = exp(2 pi i j ind(x) / d), chi_j(0) = 0, for 0 <= j < d.
std::complex<double> character_eval(const IndexTable& table, const ExponentParams& params,
                                    std::uint64_t j, Residue x);

/// Smallest a >= 2 with a^((p-1)/ell) != 1.
Residue least_nonresidue(const PrimeContext& ctx, std::uint64_t ell);

/// v -> v^e, tabulated for small p and computed on demand otherwise.
class PowerTable {
 public:
  static constexpr std::uint64_t kTableCap = std::uint64_t{1} << 17;

  PowerTable(const PrimeContext& ctx, std::uint64_t e);

  Residue operator()(Residue v) const {
    return table_.empty() ? pow_mod(v, e_, p_) : table_[v];
  }
  std::uint64_t exponent() const noexcept { return e_; }

 private:
  std::uint64_t p_;
  std::uint64_t e_;
  std::vector<Residue> table_;
};

}  // namespace shiftbreak
