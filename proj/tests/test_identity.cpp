#include <gtest/gtest.h>

#include "brute.hpp"
#include "shiftbreak/error.hpp"
#include "shiftbreak/identity.hpp"

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

struct Field {
  Field(std::uint64_t p, std::uint64_t e) : ctx(make_context(p)), params(make_exponent(ctx, e)) {}
  PrimeContext ctx;
  ExponentParams params;
};

// Largest first-disagreement index over all s != t, by direct simulation.
std::uint64_t brute_unknown_window(std::uint64_t p, std::uint64_t e) {
  const auto pw = brute::powers(p, e);
  std::uint64_t worst = 0;
  for (std::uint64_t s = 0; s < p; ++s) {
    for (std::uint64_t t = 0; t < p; ++t) {
      if (s == t) continue;
      std::uint64_t x = 0;
      while (pw[(x + s) % p] == pw[(x + t) % p]) ++x;
      worst = std::max(worst, x);
    }
  }
  return worst;
}

}  // namespace

TEST(ChooseH, Examples) {
  HPolicy theory{HMode::Theoretical, 0.05, 1.0, std::nullopt};
  Field e81(487, 81);
  EXPECT_EQ(choose_h(e81.ctx, e81.params, Variant::KnownT, theory), 4u);

  // sqrt(p) (ln p)^2 ~ 1520 is above p - 1 = 1008, so the cap matters for
  // the ceiling term; at e = 504 the schedule term e^2 p^(eps - 1) wins.
  Field p1009(1009, 504);
  EXPECT_EQ(choose_h(p1009.ctx, p1009.params, Variant::UnknownT, theory), 356u);
  HPolicy low_cap = theory;
  low_cap.cap = 100;
  EXPECT_EQ(choose_h(p1009.ctx, p1009.params, Variant::UnknownT, low_cap), 100u);

  Field small(13, 3);
  HPolicy exact{HMode::Exact, 0.05, 1.0, std::nullopt};
  EXPECT_EQ(choose_h(small.ctx, small.params, Variant::KnownT, exact), 3u);
  Field too_big(13, 12);
  EXPECT_EQ(code_of([&] { choose_h(too_big.ctx, too_big.params, Variant::KnownT, exact); }),
            Errc::RangeViolation);
  HPolicy capped = exact;
  capped.cap = 2;
  EXPECT_EQ(choose_h(small.ctx, small.params, Variant::KnownT, capped), 2u);
}

TEST(ChooseH, UnknownWindowMatchesSimulation) {
  for (auto p : brute::primes_below(120)) {
    for (auto e : brute::divisors_of(p - 1)) {
      Field f(p, e);
      EXPECT_EQ(unknown_t_window(f.ctx, f.params), brute_unknown_window(p, e)) << p << " " << e;
    }
  }
}

TEST(KnownT, Examples) {
  Field f(13, 3);
  {
    ShiftOracle o = new_oracle(f.ctx, f.params, 5, {9});
    const IdentityResult r = test_known_t(o, 4, 3);
    EXPECT_EQ(r.verdict, Verdict::Distinct);
    EXPECT_EQ(o.call_count(), r.probes);
  }
  {
    ShiftOracle o = new_oracle(f.ctx, f.params, 4, {9});
    const IdentityResult r = test_known_t(o, 4, 3);
    EXPECT_EQ(r.verdict, Verdict::Equal);
    EXPECT_EQ(r.probes, 3u);
  }
}

TEST(KnownT, FirstProbeDetail) {
  // y = 1 probes x = 1 - 4 = 10: (10 + 5)^3 = 8 against (10 + 4)^3 = 1.
  Field f(13, 3);
  ShiftOracle o = new_oracle(f.ctx, f.params, 5, {9});
  EXPECT_EQ(o.query(10), 8u);
  EXPECT_EQ(brute::power(14, 3, 13), 1u);
}

TEST(KnownT, SingleProbeIsUnsound) {
  Field f(13, 3);
  bool fooled = false;
  for (Residue s = 0; s < 13 && !fooled; ++s) {
    for (Residue t = 0; t < 13 && !fooled; ++t) {
      if (s == t) continue;
      ShiftOracle o = new_oracle(f.ctx, f.params, s, {(13 - t) % 13});
      fooled = test_known_t(o, t, 1).verdict == Verdict::Equal;
    }
  }
  EXPECT_TRUE(fooled);
}

TEST(KnownT, RequiresForbiddenMinusT) {
  Field f(13, 3);
  ShiftOracle o = new_oracle(f.ctx, f.params, 5);
  EXPECT_EQ(code_of([&] { test_known_t(o, 4, 3); }), Errc::InvalidArgument);
}

TEST(UnknownT, Examples) {
  Field f(13, 3);
  ShiftOracle a = new_oracle(f.ctx, f.params, 5);
  ShiftOracle b = new_oracle(f.ctx, f.params, 4);
  const IdentityResult r = test_unknown_t(a, b, HPolicy{});
  EXPECT_EQ(r.verdict, Verdict::Distinct);
  EXPECT_EQ(r.probes, 1u);

  ShiftOracle c = new_oracle(f.ctx, f.params, 7);
  ShiftOracle d = new_oracle(f.ctx, f.params, 7);
  const IdentityResult same = test_unknown_t(c, d, HPolicy{});
  EXPECT_EQ(same.verdict, Verdict::Equal);
  EXPECT_EQ(same.probes, same.h + 1);
  EXPECT_EQ(c.call_count() + d.call_count(), 2 * (same.h + 1));

  Field other(13, 6);
  ShiftOracle e = new_oracle(other.ctx, other.params, 7);
  EXPECT_EQ(code_of([&] { test_unknown_t(c, e, HPolicy{}); }), Errc::MismatchedParams);
}

TEST(UnknownT, SixthPowersAtThirteen) {
  Field f(13, 6);
  const std::uint64_t h = choose_h(f.ctx, f.params, Variant::UnknownT, HPolicy{});
  for (Residue s = 0; s < 13; ++s) {
    for (Residue t = 0; t < 13; ++t) {
      ShiftOracle a = new_oracle(f.ctx, f.params, s);
      ShiftOracle b = new_oracle(f.ctx, f.params, t);
      EXPECT_EQ(test_unknown_t(a, b, h).verdict == Verdict::Equal, s == t);
    }
  }
}

TEST(SmallE, Window) {
  EXPECT_EQ(small_e_window(1, 0.5, Variant::KnownT, 1.0), 1u);
  EXPECT_EQ(small_e_window(16, 0.5, Variant::KnownT, 1.0), 4u);
  EXPECT_GE(small_e_window(16, 0.125, Variant::UnknownT, 1.0), 4u);
}
