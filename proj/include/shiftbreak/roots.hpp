#pragma once

// Deterministic solution of binomial equations x^e = A over F_p, with the
// optional restriction n | ind x, given power nonresidues as witnesses.
// All returned sets are sorted ascending.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shiftbreak/field.hpp"

namespace shiftbreak {

/// Witness for one prime ell | e. When gamma < alpha (ell^alpha || p - 1)
/// the value is an ell^(gamma+1)-th power nonresidue; when gamma == alpha no
/// value is needed.
struct Witness {
  std::uint64_t prime = 0;
  unsigned alpha = 0;
  unsigned gamma = 0;
  std::optional<Residue> value;
};

class WitnessSet {
 public:
  /// gamma = 0 for every ell | e, witnessed by the least ell-th power nonresidue.
  static WitnessSet nonresidues(const PrimeContext& ctx, const ExponentParams& params);

  /// Validates every entry; throws BadWitness or InvalidArgument.
  static WitnessSet make(const PrimeContext& ctx, const ExponentParams& params,
                         std::vector<Witness> entries);

  /// n = prod ell^gamma_ell.
  std::uint64_t modulus() const noexcept { return modulus_; }
  const std::vector<Witness>& entries() const noexcept { return entries_; }
  const Witness* find(std::uint64_t ell) const noexcept;

 private:
  std::vector<Witness> entries_;
  std::uint64_t modulus_ = 1;
};

/// Largest gamma <= alpha_ell with w^((p-1)/ell^gamma) == 1, i.e. the
/// ell-adic valuation of ind w, found by direct testing.
unsigned index_valuation(const PrimeContext& ctx, std::uint64_t ell, Residue w);

/// Unique solution a^f of x^d_exp = a in the order-m subgroup, d_exp f = 1 mod m.
Residue root_coprime(const PrimeContext& ctx, std::uint64_t m, std::uint64_t d_exp, Residue a);

/// All solutions of x^r = a in the order-m subgroup of F_p^*, given b in that
/// subgroup with no r-th root there. Pohlig-Hellman descent in the r-part.
std::vector<Residue> roots_prime_given_witness(const PrimeContext& ctx, std::uint64_t m,
                                               std::uint64_t r, Residue b, Residue a);

/// Every solution of x^e = A. Needs gamma = 0 witnesses for all ell | e.
std::vector<Residue> all_eth_roots(const PrimeContext& ctx, const ExponentParams& params,
                                   Residue a, const WitnessSet& witnesses);

/// Solutions of x^ell = A with ell^beta | ind x. With beta == alpha_ell the
/// answer is unique and no witness is used; otherwise the witness must be an
/// ell^(beta+1)-th power nonresidue.
std::vector<Residue> restricted_roots(const PrimeContext& ctx, std::uint64_t ell, unsigned beta,
                                      std::optional<Residue> witness, Residue a);

/// Solutions of x^e = A with n | ind x, where n is the witness modulus.
std::vector<Residue> roots_with_index_divisibility(const PrimeContext& ctx,
                                                   const ExponentParams& params,
                                                   const WitnessSet& witnesses, Residue a);

/// Every x with (x + j)^e = answers[j] for j = 0..n, n the witness modulus.
std::vector<Residue> candidates_from_consecutive_powers(const PrimeContext& ctx,
                                                        const ExponentParams& params,
                                                        const WitnessSet& witnesses,
                                                        std::span<const Residue> answers);

}  // namespace shiftbreak
