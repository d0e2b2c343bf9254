#pragma once

// Exact brute-force counters for the finite quantities behind the
// recovery and identity-testing bounds.

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "shiftbreak/field.hpp"

namespace shiftbreak {

inline constexpr std::uint64_t kCosetRunCap = 1'000'000;
inline constexpr std::uint64_t kEnumerationCap = 100'000'000;

/// N(e): the longest run x + 1, .., x + H inside a single coset r G_e.
/// Runs wrap modulo p and break at 0.
std::uint64_t longest_coset_run(const PrimeContext& ctx, const ExponentParams& params);

/// #{1 <= x, y <= H : (x + u)(y + u) = v (mod p)}.
std::uint64_t hyperbola_count(std::uint64_t p, Residue u, Residue v, std::uint64_t H);

/// #{x in [1, H]^4 : (a + x1)(a + x2) = (a + x3)(a + x4)}.
std::uint64_t multiplicative_energy_count(std::uint64_t p, Residue a, std::uint64_t H);

struct Shift {
  Residue lambda;
  Residue mu;
};

/// #(G_e intersected with lambda_i G_e + mu_i over all shifts).
std::uint64_t subgroup_shift_intersection(const PrimeContext& ctx, const ExponentParams& params,
                                          const std::vector<Shift>& shifts);

/// J_nu(lambda; h) with shift s: #{x in [1, h]^nu : prod (x_i + s) = lambda}.
std::uint64_t product_count_J(const PrimeContext& ctx, unsigned nu, Residue lambda, Residue s,
                              std::uint64_t h);

/// #(A^(nu)) for A = {x + s} or, when t is given, A = {(x + s) / (x + t)},
/// with 1 <= x <= h.
std::uint64_t product_set_size(const PrimeContext& ctx, unsigned nu, Residue s,
                               std::optional<Residue> t, std::uint64_t h);

struct SpacedPartition {
  std::vector<std::vector<Residue>> d_sets;
  std::vector<std::vector<Residue>> e_sets;
  std::vector<Residue> leftover;
};

/// |x| for x in F_p: the least absolute value of a representative.
std::uint64_t centered_abs(std::uint64_t p, Residue x);

/// True when every two distinct elements are at distance >= sqrt(p) / 3.
bool is_third_root_spaced(std::uint64_t p, const std::vector<Residue>& set);

/// Splits S into sqrt(p)/3-spaced sets D_k, sets E_l whose floor(sqrt p)
/// dilation is spaced, and a small leftover. Needs p >= 37 and
/// |S| >= 16 p^(2 kappa).
SpacedPartition spaced_partition(std::uint64_t p, std::vector<Residue> s, double kappa);

/// Checks disjointness, coverage by S and the size and spacing properties.
bool spaced_partition_valid(std::uint64_t p, const std::vector<Residue>& s, double kappa,
                            const SpacedPartition& part);

/// sum over 1 <= x <= h, x != -t of chi_j((x + s) / (x + t)).
std::complex<double> char_sum_fraction(const PrimeContext& ctx, const IndexTable& table,
                                       const ExponentParams& params, std::uint64_t j, Residue s,
                                       Residue t, std::uint64_t h);

/// sum over 1 <= y <= h of chi_j(y), j != 0.
std::complex<double> char_sum_interval(const IndexTable& table, const ExponentParams& params,
                                       std::uint64_t j, std::uint64_t h);

/// sum over 1 <= x <= p of chi_j(x^f + a), j != 0.
std::complex<double> char_sum_shifted_power(const PrimeContext& ctx, const IndexTable& table,
                                            const ExponentParams& params, std::uint64_t j,
                                            std::uint64_t f, Residue a);

/// Psi(x, y): y-smooth integers in [1, x].
std::uint64_t psi_count(std::uint64_t x, std::uint64_t y);

/// Order of the subgroup of F_p^* generated by 1, .., y.
std::uint64_t smooth_subgroup_order(const PrimeContext& ctx, const IndexTable& table,
                                    std::uint64_t y);

}  // namespace shiftbreak
