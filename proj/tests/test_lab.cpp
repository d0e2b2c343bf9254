#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "brute.hpp"
#include "shiftbreak/error.hpp"
#include "shiftbreak/lab.hpp"

using namespace shiftbreak;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::InvalidArgument;
}

std::uint64_t coset_run(std::uint64_t p, std::uint64_t e) {
  const PrimeContext ctx = make_context(p);
  return longest_coset_run(ctx, make_exponent(ctx, e));
}

std::uint64_t naive_J(std::uint64_t p, unsigned nu, std::uint64_t lambda, std::uint64_t s,
                      std::uint64_t h) {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> x(nu, 1);
  for (;;) {
    std::uint64_t prod = 1;
    for (auto xi : x) prod = prod * ((xi + s) % p) % p;
    if (prod == lambda % p) ++count;
    unsigned i = 0;
    while (i < nu && x[i] == h) x[i++] = 1;
    if (i == nu) break;
    ++x[i];
  }
  return count;
}

}  // namespace

TEST(CosetRun, Examples) {
  EXPECT_EQ(coset_run(13, 3), 2u);
  EXPECT_EQ(coset_run(13, 6), 4u);
  EXPECT_EQ(coset_run(13, 1), 1u);
}

TEST(CosetRun, MatchesNaiveScanner) {
  for (auto p : brute::primes_below(110)) {
    for (auto e : brute::divisors_of(p - 1)) EXPECT_EQ(coset_run(p, e), brute::coset_run(p, e));
  }
}

TEST(CosetRun, TooLarge) {
  const PrimeContext ctx = make_context(1000003);
  EXPECT_EQ(code_of([&] { longest_coset_run(ctx, make_exponent(ctx, 2)); }), Errc::TooLarge);
}

TEST(Hyperbola, Examples) {
  EXPECT_EQ(hyperbola_count(13, 0, 1, 3), 1u);
  EXPECT_EQ(hyperbola_count(13, 0, 1, 12), 12u);
  EXPECT_EQ(hyperbola_count(13, 1, 1, 12), 11u);
  EXPECT_EQ(code_of([] { hyperbola_count(13, 0, 13, 3); }), Errc::BadV);
  for (auto p : brute::primes_below(200)) EXPECT_EQ(hyperbola_count(p, 0, 1, p - 1), p - 1);
}

TEST(Hyperbola, MatchesNaive) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t p = brute::primes_below(200)[gen() % 44];
    const std::uint64_t u = gen() % p, v = 1 + gen() % (p - 1), H = 1 + gen() % (p - 1);
    std::uint64_t naive = 0;
    for (std::uint64_t x = 1; x <= H; ++x) {
      for (std::uint64_t y = 1; y <= H; ++y) naive += (x + u) * (y + u) % p == v ? 1 : 0;
    }
    EXPECT_EQ(hyperbola_count(p, u, v, H), naive);
  }
}

TEST(Energy, Examples) {
  EXPECT_EQ(multiplicative_energy_count(13, 0, 3), 15u);
  EXPECT_EQ(multiplicative_energy_count(13, 0, 1), 1u);
  std::uint64_t naive = 0;
  for (int a = 1; a <= 10; ++a) {
    for (int b = 1; b <= 10; ++b) {
      for (int c = 1; c <= 10; ++c) {
        for (int d = 1; d <= 10; ++d) naive += (5 + a) * (5 + b) % 101 == (5 + c) * (5 + d) % 101;
      }
    }
  }
  EXPECT_EQ(multiplicative_energy_count(101, 5, 10), naive);
}

TEST(ShiftIntersection, Examples) {
  const PrimeContext ctx = make_context(13);
  const ExponentParams e3 = make_exponent(ctx, 3);
  EXPECT_EQ(subgroup_shift_intersection(ctx, e3, {{1, 2}}), 1u);
  EXPECT_EQ(subgroup_shift_intersection(ctx, e3, {{1, 1}}), 0u);
  EXPECT_EQ(subgroup_shift_intersection(ctx, make_exponent(ctx, 12), {{1, 1}}), 11u);
  EXPECT_EQ(code_of([&] { subgroup_shift_intersection(ctx, e3, {{0, 1}}); }),
            Errc::DegenerateShift);
  EXPECT_EQ(code_of([&] { subgroup_shift_intersection(ctx, e3, {{1, 0}}); }),
            Errc::DegenerateShift);
  EXPECT_EQ(code_of([&] { subgroup_shift_intersection(ctx, e3, {{1, 2}, {3, 2}}); }),
            Errc::DegenerateShift);
}

TEST(ProductCount, Examples) {
  const PrimeContext ctx = make_context(13);
  EXPECT_EQ(product_count_J(ctx, 2, 1, 0, 3), 1u);
  EXPECT_EQ(product_count_J(ctx, 2, 1, 0, 12), 12u);
  EXPECT_EQ(product_count_J(ctx, 2, 1, 0, 12), hyperbola_count(13, 0, 1, 12));
  for (Residue lambda = 1; lambda < 13; ++lambda) {
    EXPECT_LE(product_count_J(ctx, 1, lambda, 4, 5), 1u);
  }
  const PrimeContext big = make_context(1000003);
  EXPECT_EQ(code_of([&] { product_count_J(big, 4, 1, 0, 200); }), Errc::TooLarge);
}

TEST(ProductCount, MatchesNaive) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 150; ++i) {
    const std::uint64_t p = brute::primes_below(120)[gen() % 29];
    const PrimeContext ctx = make_context(p);
    const unsigned nu = 1 + gen() % 4;
    const std::uint64_t h = 1 + gen() % (nu >= 3 ? 12 : 40);
    const std::uint64_t lambda = 1 + gen() % (p - 1), s = gen() % p;
    EXPECT_EQ(product_count_J(ctx, nu, lambda, s, h), naive_J(p, nu, lambda, s, h));
  }
}

TEST(ProductSet, Examples) {
  const PrimeContext ctx = make_context(13);
  EXPECT_EQ(product_set_size(ctx, 2, 5, Residue{4}, 2), 3u);
  EXPECT_EQ(product_set_size(ctx, 1, 3, std::nullopt, 5), 5u);
  EXPECT_EQ(product_set_size(ctx, 2, 0, std::nullopt, 2), 3u);
  EXPECT_EQ(code_of([&] { product_set_size(ctx, 2, 5, Residue{5}, 2); }), Errc::DegeneratePair);
}

TEST(ProductSet, MatchesNaive) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 150; ++i) {
    const std::uint64_t p = brute::primes_below(150)[gen() % 34];
    const PrimeContext ctx = make_context(p);
    const unsigned nu = 1 + gen() % 3;
    const std::uint64_t h = 1 + gen() % 20;
    const std::uint64_t s = gen() % p;
    std::optional<Residue> t;
    if (gen() % 2) {
      t = gen() % p;
      if (*t == s) t = (s + 1) % p;
    }
    std::set<std::uint64_t> base, prods{1};
    for (std::uint64_t x = 1; x <= h; ++x) {
      if (t && (x + *t) % p == 0) continue;
      base.insert(t ? (x + s) % p * brute::inverse((x + *t) % p, p) % p : (x + s) % p);
    }
    for (unsigned k = 0; k < nu; ++k) {
      std::set<std::uint64_t> next;
      for (auto a : prods) {
        for (auto b : base) next.insert(a * b % p);
      }
      prods = next;
    }
    EXPECT_EQ(product_set_size(ctx, nu, s, t, h), prods.size());
  }
}

TEST(Partition, TooSmall) {
  EXPECT_EQ(code_of([] { spaced_partition(37, {1, 10, 20}, 0.0); }), Errc::TooSmall);
  EXPECT_EQ(code_of([] { spaced_partition(31, std::vector<Residue>(20, 1), 0.0); }),
            Errc::OutOfRange);
}

TEST(Partition, DenseInterval) {
  std::vector<Residue> s;
  for (Residue x = 1; x <= 30; ++x) s.push_back(x);
  const SpacedPartition part = spaced_partition(37, s, 0.05);
  EXPECT_EQ(brute::partition_defect(37, s, 0.05, part.d_sets, part.e_sets, part.leftover), "");
  EXPECT_TRUE(spaced_partition_valid(37, s, 0.05, part));
}

TEST(Partition, RandomSetsSatisfyProperties) {
  std::mt19937_64 gen(21);
  const auto primes = brute::primes_below(3000);
  for (int i = 0; i < 30; ++i) {
    std::uint64_t p = 0;
    while (p < 37) p = primes[gen() % primes.size()];
    const double kappa = 0.02 + 0.2 * static_cast<double>(gen() % 1000) / 1000.0;
    const auto min_size = static_cast<std::uint64_t>(std::ceil(16 * std::pow(double(p), 2 * kappa)));
    if (min_size >= p) continue;
    const std::uint64_t size = min_size + gen() % (p - min_size);
    std::set<Residue> pick;
    while (pick.size() < size) pick.insert(gen() % p);
    const std::vector<Residue> s(pick.begin(), pick.end());
    const SpacedPartition part = spaced_partition(p, s, kappa);
    EXPECT_EQ(brute::partition_defect(p, s, kappa, part.d_sets, part.e_sets, part.leftover), "")
        << "p=" << p << " kappa=" << kappa << " |S|=" << size;
  }
}

TEST(CharSums, Examples) {
  const PrimeContext ctx = make_context(13);
  const IndexTable table = build_index_table(ctx);
  const ExponentParams e3 = make_exponent(ctx, 3);
  EXPECT_LT(std::abs(char_sum_fraction(ctx, table, e3, 0, 5, 4, 10) - 8.0), 1e-9);
  EXPECT_LT(std::abs(char_sum_fraction(ctx, table, e3, 1, 5, 4, 13) + 1.0), 1e-9);
  EXPECT_LE(std::abs(char_sum_fraction(ctx, table, e3, 1, 5, 4, 3)),
            4 * std::sqrt(13.0) * std::log(13.0));
  EXPECT_EQ(code_of([&] { char_sum_fraction(ctx, table, e3, 1, 5, 5, 3); }),
            Errc::DegeneratePair);
  EXPECT_LT(std::abs(char_sum_interval(table, e3, 1, 12)), 1e-9);
  EXPECT_LE(std::abs(char_sum_interval(table, e3, 1, 6)), 2 * std::sqrt(13.0));
  EXPECT_EQ(code_of([&] { char_sum_interval(table, e3, 0, 6); }), Errc::PrincipalCharacter);
  const ExponentParams e6 = make_exponent(ctx, 6);
  EXPECT_LE(std::abs(char_sum_shifted_power(ctx, table, e6, 1, 2, 1)), 2 * std::sqrt(13.0));
}

TEST(CharSums, CompleteFractionSumIsMinusOne) {
  for (auto p : brute::primes_below(100)) {
    const PrimeContext ctx = make_context(p);
    const IndexTable table = build_index_table(ctx);
    for (auto e : brute::divisors_of(p - 1)) {
      const ExponentParams params = make_exponent(ctx, e);
      for (std::uint64_t j = 1; j < params.d(); ++j) {
        EXPECT_LT(std::abs(char_sum_fraction(ctx, table, params, j, 1, 0, p) + 1.0), 1e-9);
      }
    }
  }
}

TEST(Psi, Examples) {
  EXPECT_EQ(psi_count(10, 2), 4u);
  EXPECT_EQ(psi_count(57, 100), 57u);
  EXPECT_EQ(psi_count(100, 3), 20u);
  EXPECT_EQ(code_of([] { psi_count(100'000'001, 3); }), Errc::TooLarge);
}

TEST(Psi, MatchesNaive) {
  for (std::uint64_t x : {1ull, 2ull, 50ull, 1000ull, 5000ull}) {
    for (std::uint64_t y : {1ull, 2ull, 3ull, 7ull, 30ull, 71ull, 4999ull}) {
      std::uint64_t naive = 0;
      for (std::uint64_t n = 1; n <= x; ++n) {
        std::uint64_t r = n, largest = 1;
        for (std::uint64_t q = 2; q * q <= r; ++q) {
          while (r % q == 0) {
            r /= q;
            largest = q;
          }
        }
        if (r > 1) largest = std::max(largest, r);
        naive += largest <= y;
      }
      EXPECT_EQ(psi_count(x, y), naive) << x << " " << y;
    }
  }
}

TEST(SmoothSubgroup, ExamplesAndClosure) {
  const PrimeContext p13 = make_context(13);
  const IndexTable t13 = build_index_table(p13);
  EXPECT_EQ(smooth_subgroup_order(p13, t13, 2), 12u);
  EXPECT_EQ(smooth_subgroup_order(p13, t13, 1), 1u);
  for (auto p : brute::primes_below(200)) {
    const PrimeContext ctx = make_context(p);
    const IndexTable table = build_index_table(ctx);
    for (std::uint64_t y = 1; y < 8 && y < p; ++y) {
      std::set<std::uint64_t> closure{1};
      bool grew = true;
      while (grew) {
        grew = false;
        for (auto a : std::set<std::uint64_t>(closure)) {
          for (std::uint64_t x = 1; x <= y; ++x) grew |= closure.insert(a * x % p).second;
        }
      }
      EXPECT_EQ(smooth_subgroup_order(ctx, table, y), closure.size()) << p << " " << y;
      EXPECT_GE(smooth_subgroup_order(ctx, table, y), psi_count(p - 1, y));
    }
  }
}
