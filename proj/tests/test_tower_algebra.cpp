#include <gtest/gtest.h>

#include <random>

#include "fftower/tower.hpp"
#include "helpers.hpp"

using namespace fftower;
using namespace testing_helpers;

namespace {

AlgebraElement random_element(const TowerAlgebra& alg, std::mt19937_64& rng) {
  const auto& k = alg.field();
  AlgebraElement a;
  for (const auto& e : alg.monomial_basis(alg.levels())) {
    if (rng() % 3 == 0) continue;
    Poly num = P(k, {static_cast<std::int64_t>(rng() % 5), static_cast<std::int64_t>(rng() % 5)});
    if (num.is_zero()) continue;
    Poly den = rng() % 2 ? lin(k, static_cast<std::int64_t>(rng() % 5)) : Poly::one(k);
    TowerAlgebra::add_term(a, e, RatFun(num, den));
  }
  return a;
}

// y1^2 = x(x-1), y2^2 = (x-2) y1 + 1 over F_5
TowerAlgebra two_level_kummer() {
  const auto& k = Fp(5);
  auto d = TowerBuilder(k, 2)
               .kummer(2, RatFun(X(k) * lin(k, 1)))
               .kummer(2, plus(term(RatFun(lin(k, 2)), {1, 0}), base_element(RatFun(P(k, {1})), 2)))
               .build();
  return make_algebra(d);
}

}  // namespace

TEST(TowerAlgebra, RelationsReduce) {
  const auto& k = Fp(3);
  auto d = TowerBuilder(k, 2).kummer(2, RatFun(X(k))).as(RatFun(Poly::one(k), X(k))).build();
  auto alg = make_algebra(d);
  auto y1 = alg.generator(0), y2 = alg.generator(1);
  EXPECT_EQ(alg.mul(y1, y1), alg.from_ratfun(RatFun(X(k))));
  // y2^3 = y2 + 1/x
  EXPECT_EQ(alg.pow(y2, 3), alg.add(y2, alg.from_ratfun(RatFun(Poly::one(k), X(k)))));
  EXPECT_TRUE(alg.is_reduced(alg.pow(alg.add(y1, y2), 7)));
}

TEST(TowerAlgebra, RingAxiomsOnRandomElements) {
  auto alg = two_level_kummer();
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    auto a = random_element(alg, rng), b = random_element(alg, rng), c = random_element(alg, rng);
    EXPECT_EQ(alg.mul(alg.mul(a, b), c), alg.mul(a, alg.mul(b, c)));
    EXPECT_EQ(alg.mul(a, alg.add(b, c)), alg.add(alg.mul(a, b), alg.mul(a, c)));
    EXPECT_EQ(alg.mul(a, b), alg.mul(b, a));
  }
}

TEST(TowerAlgebra, NormIsMultiplicative) {
  auto alg = two_level_kummer();
  std::mt19937_64 rng(5);
  for (int it = 0; it < 10; ++it) {
    auto a = random_element(alg, rng), b = random_element(alg, rng);
    if (a.is_zero() || b.is_zero()) continue;
    EXPECT_EQ(alg.norm(alg.mul(a, b), 2), alg.norm(a, 2) * alg.norm(b, 2));
  }
}

TEST(TowerAlgebra, NormOfQuadraticElement) {
  const auto& k = Fp(5);
  auto d = TowerBuilder(k, 1).kummer(2, RatFun(X(k) * lin(k, 1))).build();
  auto alg = make_algebra(d);
  // N(a + b y) = a^2 - b^2 c
  RatFun a(lin(k, 3)), b(Poly::one(k), X(k));
  auto el = alg.add(alg.from_ratfun(a), alg.scale(alg.generator(0), b));
  EXPECT_EQ(alg.norm(el, 1), a * a - b * b * RatFun(X(k) * lin(k, 1)));
}

TEST(TowerAlgebra, AutomorphismsRespectRelations) {
  const auto& k = Fp(5);
  auto d = TowerBuilder(k, 1).kummer(4, RatFun(X(k) * lin(k, 1) * lin(k, 2).pow(2))).build();
  auto alg = make_algebra(d);
  const FieldElement zeta = k.root_of_unity(4);
  auto img = alg.scale(alg.generator(0), RatFun::constant(k, zeta));
  EXPECT_TRUE(alg.respects_relations({img}));
  EXPECT_FALSE(alg.respects_relations({alg.add(alg.generator(0), alg.one())}));
  const auto& f3 = Fp(3);
  auto as = make_algebra(TowerBuilder(f3, 1).as(RatFun(Poly::one(f3), X(f3))).build());
  EXPECT_TRUE(as.respects_relations({as.add(as.generator(0), as.one())}));
}

TEST(TowerAlgebra, ValuationTiesAreConservative) {
  // y^3 - y = x^2/(x-1): at x the tracked place has y = +-1 mod x, so 1 - y may cancel
  const auto& k = Fp(3);
  auto A = run_analysis(TowerBuilder(k, 1).as(RatFun(X(k).pow(2), lin(k, 1))).build());
  const auto* tp = A.find(place(X(k)));
  ASSERT_NE(tp, nullptr);
  EXPECT_TRUE(tp->levels[0].representative_choice);
  EXPECT_EQ(tp->levels[0].inertia, 1);
  auto el = A.alg->sub(A.alg->one(), A.alg->generator(0));
  EXPECT_FALSE(valuation_at(el, *tp, 1).certified);
  EXPECT_TRUE(valuation_at(A.alg->generator(0), *tp, 1).certified);
}

TEST(TowerAlgebra, ValuationTieAtInertPlace) {
  // c(0) = 2 has nonzero trace: x is inert and 1, y stay independent mod x
  const auto& k = Fp(3);
  auto A = run_analysis(TowerBuilder(k, 1).as(RatFun(X(k).pow(2) + Poly::one(k), lin(k, 1))).build());
  const auto* tp = A.find(place(X(k)));
  ASSERT_NE(tp, nullptr);
  EXPECT_FALSE(tp->levels[0].representative_choice);
  EXPECT_EQ(tp->levels[0].inertia, 3);
  auto el = A.alg->sub(A.alg->one(), A.alg->generator(0));
  auto v = valuation_at(el, *tp, 1);
  EXPECT_TRUE(v.certified);
  EXPECT_EQ(v.value, 0);
}
