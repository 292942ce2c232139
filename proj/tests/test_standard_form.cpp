#include <gtest/gtest.h>

#include <random>

#include "fftower/standard_form.hpp"
#include "helpers.hpp"

using namespace fftower;
using namespace testing_helpers;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvariantViolation;
}

RatFun random_laurent_tail(const FiniteField& k, const Poly& pi, int max_order, std::mt19937_64& rng) {
  RatFun r(k);
  for (int j = 1; j <= max_order; ++j) {
    const FieldElement c(static_cast<std::uint32_t>(rng() % k.q()));
    if (c == k.zero()) continue;
    r += RatFun(Poly::constant(k, c), pi.pow(static_cast<std::uint64_t>(j)));
  }
  return r;
}

}  // namespace

TEST(WeakStandardForm, CubeTermCancels) {
  const auto& k = Fp(3);
  RatFun r = RatFun(Poly::one(k), X(k).pow(3)) + RatFun(Poly::one(k), X(k));
  auto out = as_weak_standard_form(r, {});
  EXPECT_EQ(out.value, RatFun(P(k, {2}), X(k)));
  ASSERT_EQ(out.chain.steps.size(), 1u);
  EXPECT_EQ(out.chain.steps[0].witness, RatFun(Poly::one(k), X(k)));
  EXPECT_EQ(out.chain.steps[0].before, -3);
  EXPECT_EQ(out.chain.steps[0].after, -1);
  EXPECT_EQ(replay(r, out.chain, 3), out.value);
}

TEST(WeakStandardForm, StandardInputUnchanged) {
  const auto& k = Fp(3);
  RatFun r(P(k, {-1, 2}), X(k) * lin(k, 1));
  auto out = as_weak_standard_form(r, {});
  EXPECT_EQ(out.value, r);
  EXPECT_TRUE(out.chain.steps.empty());
}

TEST(WeakStandardForm, SixthOrderPole) {
  const auto& k = Fp(3);
  RatFun r = RatFun(Poly::one(k), X(k).pow(6)) + RatFun(Poly::one(k), lin(k, 1));
  auto out = as_weak_standard_form(r, {});
  const auto vx = valuation(out.value, place(X(k)));
  EXPECT_LT(vx, 0);
  EXPECT_NE(vx % 3, 0);
  EXPECT_EQ(valuation(out.value, place(lin(k, 1))), -1);
  EXPECT_EQ(out.chain.steps[0].witness, RatFun(Poly::one(k), X(k).pow(2)));
  EXPECT_EQ(replay(r, out.chain, 3), out.value);
}

TEST(WeakStandardForm, PoleAtInfinity) {
  const auto& k = Fp(3);
  RatFun r = RatFun(X(k).pow(3)) + RatFun(Poly::one(k), X(k));
  auto out = as_weak_standard_form(r, {});
  EXPECT_EQ(valuation(out.value, Place::infinity()), -1);
  EXPECT_EQ(replay(r, out.chain, 3), out.value);
}

TEST(WeakStandardForm, RandomInputsAcrossFields) {
  std::mt19937_64 rng(17);
  for (auto [p, h] : {std::pair{2u, 1u}, std::pair{3u, 1u}, std::pair{2u, 2u}, std::pair{3u, 2u}, std::pair{5u, 1u}}) {
    const auto& k = Fq(p, h);
    for (int it = 0; it < 15; ++it) {
      // coprime poles at x-1, wild poles at x and at a quadratic place
      Poly quad = Poly(k);
      for (std::uint32_t c = 0; c < k.q() && quad.is_zero(); ++c) {
        Poly cand = X(k).pow(2) + X(k) + Poly::constant(k, FieldElement(c));
        if (is_irreducible(cand)) quad = cand;
      }
      RatFun w = random_laurent_tail(k, X(k), 3, rng) + random_laurent_tail(k, quad, 2, rng);
      RatFun r = artin_schreier_of(w) + RatFun(Poly::one(k), lin(k, 1));
      if (it % 2) r += RatFun(Poly::one(k), X(k).pow(static_cast<std::uint64_t>(p + 1)));
      auto out = as_weak_standard_form(r, {Place::infinity()});
      EXPECT_EQ(replay(r, out.chain, p), out.value);
      for (const auto& P : pole_places(out.value)) {
        const auto v = valuation(out.value, P);
        EXPECT_NE(v % static_cast<std::int64_t>(p), 0);
        // poles never appear outside the input poles
        EXPECT_LT(valuation(r, P), 0);
      }
      // coprime poles of the input are untouched
      EXPECT_EQ(valuation(out.value, place(lin(k, 1))), -1);
      if (it % 2) EXPECT_EQ(valuation(out.value, place(X(k))), -static_cast<std::int64_t>(p + 1));
      else EXPECT_GE(valuation(out.value, place(X(k))), 0);
    }
  }
}

TEST(WeakStandardForm, ValuationIsMaximalOverSampledShifts) {
  const auto& k = Fp(3);
  RatFun r = RatFun(Poly::one(k), X(k).pow(6)) + RatFun(P(k, {1, 1}), X(k).pow(4));
  auto out = as_weak_standard_form(r, {});
  const Place Px = place(X(k));
  const auto reported = valuation(out.value, Px);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (int j = 0; j <= 3; ++j)
    for (std::int64_t c : {0, 1, 2}) {
      RatFun w(P(k, {c}), X(k).pow(static_cast<std::uint64_t>(j)));
      best = std::max(best, valuation(out.value - artin_schreier_of(w), Px));
    }
  EXPECT_EQ(best, reported);
}

TEST(WeakStandardForm, Errors) {
  const auto& k = Fp(3);
  EXPECT_EQ(code_of([&] { as_weak_standard_form(artin_schreier_of(RatFun(X(k)) + RatFun(Poly::one(k), X(k))), {}); }),
            Errc::NotAnASExtension);
  EXPECT_EQ(code_of([&] { as_weak_standard_form(RatFun(k), {}); }), Errc::NotAnASExtension);
  // constant with nonzero trace: constant field extension, accepted
  EXPECT_EQ(as_weak_standard_form(RatFun(P(k, {1})), {}).value, RatFun(P(k, {1})));
  EXPECT_EQ(code_of([&] { as_weak_standard_form(RatFun(Poly::one(k), X(k)), {place(X(k))}); }),
            Errc::StandardFormViolation);
}

TEST(ZeroNormal, ZeroAtKeptPlace) {
  const auto& k = FiniteField::get(FieldSpec{3, 2, {1, 0, 1}});
  RatFun r(lin(k, 1), X(k).pow(2));  // v_{x-1} = 1
  const Place keep = place(lin(k, 1));
  auto out = as_zero_normal(r, {keep});
  EXPECT_EQ(valuation(out.value, keep), 0);
  EXPECT_EQ(valuation(out.value, place(X(k))), -2);
  EXPECT_EQ(replay(r, out.chain, 3), out.value);
}

TEST(ZeroNormal, AllThreeCasesAndInfinity) {
  for (auto spec : {FieldSpec{3, 2, {1, 0, 1}}, first_irreducible_spec(2, 2), first_irreducible_spec(5, 2)}) {
    const auto& k = FiniteField::get(spec);
    // ramified at x; keep places chosen where r vanishes, is a nonzero AS image, or is not one
    RatFun r = RatFun(Poly::one(k), X(k)) + RatFun(lin(k, 1) * lin(k, 1));
    std::vector<Place> keep;
    for (std::uint32_t a = 1; a < k.q() && keep.size() < 4; ++a) keep.push_back(place(Poly::linear(k, FieldElement(a))));
    auto out = as_zero_normal(r, keep);
    for (const auto& P : keep) EXPECT_EQ(valuation(out.value, P), 0);
    EXPECT_EQ(valuation(out.value, place(X(k))), -1);
    EXPECT_EQ(replay(r, out.chain, k.p()), out.value);
    // infinity is ramified here (pole of order 2 prime to p when p != 2)
    if (k.p() != 2) EXPECT_FALSE(out.auxiliary->infinite);
    // keep infinity too, on a generator regular there
    RatFun s(Poly::one(k), X(k) * lin(k, 1).pow(2));
    if (k.p() == 2) s = RatFun(Poly::one(k), X(k) * lin(k, 1).pow(3));
    const Place off = place(Poly::linear(k, FieldElement(k.p())));  // x - t, t outside F_p
    auto out2 = as_zero_normal(s, {Place::infinity(), off});
    EXPECT_EQ(valuation(out2.value, Place::infinity()), 0);
    EXPECT_EQ(valuation(out2.value, off), 0);
    EXPECT_EQ(valuation(out2.value, place(X(k))), -1);
  }
}

TEST(ZeroNormal, Errors) {
  const auto& k = Fp(3);
  RatFun r(Poly::one(k), X(k));
  EXPECT_EQ(code_of([&] { as_zero_normal(r, {place(lin(k, 1))}); }), Errc::ConstantFieldTooSmall);
  auto id = as_zero_normal(r, {});
  EXPECT_EQ(id.value, r);
  EXPECT_TRUE(id.chain.steps.empty());
}

TEST(KummerStandardForm, ShiftsExponents) {
  const auto& k = Fp(5);
  RatFun c(X(k).pow(3) * lin(k, 1));
  auto out = kummer_standard_form(c, 2);
  EXPECT_EQ(out.value, RatFun(X(k) * lin(k, 1)));
  ASSERT_EQ(out.chain.steps.size(), 1u);
  EXPECT_EQ(out.chain.steps[0].witness, RatFun(Poly::one(k), X(k)));
  EXPECT_EQ(replay(c, out.chain, 2), out.value);
  RatFun std_c(X(k) * lin(k, 1));
  EXPECT_TRUE(kummer_standard_form(std_c, 2).chain.steps.empty());
}

TEST(KummerStandardForm, RandomQuotientIsNthPower) {
  std::mt19937_64 rng(23);
  const auto& k = Fp(7);
  for (int it = 0; it < 30; ++it) {
    const std::int64_t n = it % 2 ? 3 : 6;
    RatFun c = RatFun::constant(k, k.from_int(1 + static_cast<std::int64_t>(rng() % 6)));
    std::int64_t deg = 0;
    for (std::int64_t a = 0; a < 4; ++a) {
      const std::int64_t v = static_cast<std::int64_t>(rng() % 15) - 7;
      c *= RatFun(lin(k, a)).pow(v);
      deg += v;
    }
    // balance the degree so infinity is unramified, and keep one simple zero for primitivity
    c *= RatFun(lin(k, 5));
    deg += 1;
    const std::int64_t fix = ((-deg) % n + n) % n;
    c *= RatFun(lin(k, 6)).pow(fix);
    try {
      auto out = kummer_standard_form(c, n);
      RatFun alpha = out.chain.steps.empty() ? RatFun::one(k) : out.chain.steps[0].witness;
      EXPECT_EQ(out.value / c, alpha.pow(n));
      for (const auto& P : support(out.value)) {
        const auto v = valuation(out.value, P);
        EXPECT_GE(v, 0);
        EXPECT_LT(v, n);
      }
      EXPECT_EQ(valuation(out.value, Place::infinity()) % n, 0);
    } catch (const Error& e) {
      ADD_FAILURE() << e.what();
    }
  }
}

TEST(KummerStandardForm, Errors) {
  const auto& k = Fp(5);
  EXPECT_EQ(code_of([&] { kummer_standard_form(RatFun(X(k).pow(2) * lin(k, 1).pow(2)), 4); }), Errc::NotPrimitive);
  EXPECT_EQ(code_of([&] { kummer_standard_form(RatFun(P(k, {2})), 2); }), Errc::NotPrimitive);
  EXPECT_EQ(code_of([&] { kummer_standard_form(RatFun(X(k)), 2); }), Errc::StandardFormViolation);
  EXPECT_EQ(code_of([&] { kummer_standard_form(RatFun(X(k) * lin(k, 1)), 5); }), Errc::NotCoprimeToCharacteristic);
}

TEST(Compositum, MixedTowerFromComponents) {
  const auto& k = Fp(3);
  auto d = compositum_to_tower(k.spec(), {{StepKind::Kummer, 2, RatFun(X(k) * lin(k, 1))},
                                          {StepKind::ArtinSchreier, 3, RatFun(Poly::one(k), lin(k, 2))}});
  ASSERT_EQ(d.steps.size(), 2u);
  EXPECT_EQ(d.steps[0].kind, StepKind::ArtinSchreier);
  EXPECT_EQ(d.steps[1].kind, StepKind::Kummer);
  EXPECT_EQ(genus(analyze(d)), 2);
}

TEST(Compositum, DisjointTameRamificationAccepted) {
  const auto& k = Fp(5);
  auto d = compositum_to_tower(k.spec(), {{StepKind::Kummer, 2, RatFun(X(k) * lin(k, 1))},
                                          {StepKind::Kummer, 2, RatFun(lin(k, 2) * lin(k, 3))}});
  EXPECT_EQ(genus(analyze(d)), 1);
}

TEST(Compositum, Obstructions) {
  const auto& k = Fp(5);
  EXPECT_EQ(code_of([&] {
              compositum_to_tower(k.spec(), {{StepKind::Kummer, 2, RatFun(X(k) * lin(k, 1))},
                                             {StepKind::Kummer, 2, RatFun(X(k) * lin(k, 2))}});
            }),
            Errc::DivisibilityObstruction);
  const auto& f3 = Fp(3);
  EXPECT_EQ(code_of([&] {
              compositum_to_tower(f3.spec(), {{StepKind::ArtinSchreier, 3, RatFun(Poly::one(f3), X(f3))},
                                              {StepKind::ArtinSchreier, 3, RatFun(Poly::one(f3), X(f3) * lin(f3, 1))}});
            }),
            Errc::SharedRamification);
}

TEST(Merge, PredictedValuationsConfirmed) {
  const auto& k = FiniteField::get(FieldSpec{3, 2, {1, 0, 1}});
  RatFun z(Poly::one(k), X(k));
  auto res = elementary_abelian_merge(RatFun(Poly::one(k), lin(k, 1)), z, k.one(), k.one(), 2);
  EXPECT_EQ(res.alpha, k.one());
  ASSERT_EQ(res.predicted.size(), 2u);
  EXPECT_EQ(res.predicted[0].place, place(lin(k, 1)));
  EXPECT_EQ(res.predicted[0].valuation, -1);
  EXPECT_EQ(res.predicted[1].place, place(X(k)));
  EXPECT_EQ(res.predicted[1].valuation, -4);
  EXPECT_TRUE(res.verified);
  auto A = analyze(res.tower);
  // ramified at x in both steps, at x-1 only in the second
  EXPECT_EQ(A.find(place(X(k)))->e_upto(2), 9);
  EXPECT_EQ(A.find(place(lin(k, 1)))->e_upto(2), 3);
}

TEST(Merge, DegenerateAndZeroCases) {
  const auto& k = FiniteField::get(FieldSpec{3, 2, {1, 0, 1}});
  RatFun z(Poly::one(k), X(k));
  auto only_z = elementary_abelian_merge(RatFun(k), z, k.one(), k.one(), 2);
  ASSERT_EQ(only_z.predicted.size(), 1u);
  EXPECT_EQ(only_z.predicted[0].valuation, -4);
  EXPECT_TRUE(only_z.verified);
  auto flat = elementary_abelian_merge(RatFun(Poly::one(k), lin(k, 1)), z, k.one(), k.one(), 1);
  EXPECT_FALSE(flat.predicted[1].ramified);
  EXPECT_TRUE(flat.verified);
  const FieldElement t(3);  // outside F_3, so alpha - alpha^3 != 0
  auto tilted = elementary_abelian_merge(RatFun(Poly::one(k), lin(k, 1)), z, t, k.one(), 1);
  EXPECT_TRUE(tilted.predicted[1].ramified);
  EXPECT_EQ(tilted.predicted[1].valuation, -1);
  EXPECT_TRUE(tilted.verified);
  EXPECT_EQ(code_of([&] { elementary_abelian_merge(z, z, k.one(), k.one(), 2); }), Errc::SharedPoles);
}

TEST(Merge, LargerExponents) {
  const auto& k = Fp(5);
  for (std::int64_t n : {2, 3, 4, 6}) {
    RatFun z(Poly::one(k), X(k) * lin(k, 1));
    auto res = elementary_abelian_merge(RatFun(Poly::one(k), lin(k, 2).pow(2)), z, k.from_int(2), k.from_int(3), n);
    EXPECT_TRUE(res.verified) << "n = " << n;
    for (const auto& pr : res.predicted)
      if (pr.place != place(lin(k, 2))) EXPECT_EQ(pr.valuation, -(1 + 5 * (n - 1)));
  }
}
