#include <gtest/gtest.h>

#include <random>

#include "fftower/univariate.hpp"
#include "helpers.hpp"

using namespace fftower;
using namespace testing_helpers;

namespace {

// Every monic polynomial of degree d, in code order.
std::vector<Poly> all_monic(const FiniteField& k, int d) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) count *= k.q();
  for (std::uint64_t c = 0; c < count; ++c) {
    std::vector<FieldElement> v;
    std::uint64_t x = c;
    for (int i = 0; i < d; ++i) {
      v.push_back(FieldElement(static_cast<std::uint32_t>(x % k.q())));
      x /= k.q();
    }
    v.push_back(k.one());
    out.emplace_back(k, v);
  }
  return out;
}

// Trial division oracle.
bool brute_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  for (int d = 1; 2 * d <= f.degree(); ++d)
    for (const auto& g : all_monic(f.field(), d))
      if ((f % g).is_zero()) return false;
  return true;
}

Poly random_poly(const FiniteField& k, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, k.q() - 1);
  std::vector<FieldElement> v;
  for (int i = 0; i < deg; ++i) v.push_back(FieldElement(dist(rng)));
  v.push_back(FieldElement(1 + dist(rng) % (k.q() - 1)));
  return Poly(k, v);
}

}  // namespace

TEST(Poly, ArithmeticIdentities) {
  const auto& k = Fq(3, 2);
  std::mt19937_64 rng(11);
  for (int it = 0; it < 50; ++it) {
    Poly a = random_poly(k, 5, rng), b = random_poly(k, 3, rng);
    auto [q, r] = divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
    auto [g, s, t] = ext_gcd(a, b);
    EXPECT_EQ(s * a + t * b, g);
    EXPECT_TRUE(g.is_monic());
    EXPECT_EQ(a * b - b * a, Poly(k));
  }
}

TEST(Poly, FactorizationMatchesOracle) {
  for (auto [p, h] : {std::pair{2u, 1u}, std::pair{3u, 1u}, std::pair{2u, 2u}, std::pair{5u, 1u}, std::pair{3u, 2u}}) {
    const auto& k = Fq(p, h);
    std::mt19937_64 rng(p * 100 + h);
    for (int it = 0; it < 30; ++it) {
      Poly f = random_poly(k, 1 + static_cast<int>(rng() % 7), rng);
      if (it % 3 == 0) f = f * f * random_poly(k, 1, rng);
      if (it % 5 == 0) f = f.pow(p) * random_poly(k, 2, rng);
      auto fac = factorize(f);
      EXPECT_EQ(fac.product(k), f);
      for (std::size_t i = 0; i < fac.factors.size(); ++i) {
        EXPECT_TRUE(fac.factors[i].first.is_monic());
        EXPECT_TRUE(brute_irreducible(fac.factors[i].first));
        if (i) EXPECT_TRUE(fac.factors[i - 1].first < fac.factors[i].first);
      }
      // Deterministic and seed independent.
      auto fac2 = factorize(f, 12345);
      ASSERT_EQ(fac.factors.size(), fac2.factors.size());
      for (std::size_t i = 0; i < fac.factors.size(); ++i) EXPECT_EQ(fac.factors[i], fac2.factors[i]);
    }
  }
}

TEST(Poly, KnownFactorizations) {
  const auto& f5 = Fp(5);
  auto fac = factorize(X(f5).pow(4) - Poly::one(f5));
  ASSERT_EQ(fac.factors.size(), 4u);
  for (auto& [g, e] : fac.factors) {
    EXPECT_EQ(g.degree(), 1);
    EXPECT_EQ(e, 1);
  }
  const auto& f3 = Fp(3);
  // x^9 - x is the product of all monic irreducibles of degree 1 and 2
  auto f = factorize(X(f3).pow(9) - X(f3));
  int lin = 0, quad = 0;
  for (auto& [g, e] : f.factors) (g.degree() == 1 ? lin : quad)++;
  EXPECT_EQ(lin, 3);
  EXPECT_EQ(quad, 3);
  EXPECT_TRUE(is_irreducible(P(f3, {1, 0, 1})));
  EXPECT_FALSE(is_irreducible(P(f3, {2, 0, 1})));
  EXPECT_THROW(factorize(Poly(f3)), Error);
}

TEST(Poly, IrreducibilityCountsAgreeWithNecklaceFormula) {
  // number of monic irreducibles of degree 4 over F_2 is 3, degree 3 over F_3 is 8
  int c = 0;
  for (const auto& g : all_monic(Fp(2), 4)) c += is_irreducible(g);
  EXPECT_EQ(c, 3);
  c = 0;
  for (const auto& g : all_monic(Fp(3), 3)) c += is_irreducible(g);
  EXPECT_EQ(c, 8);
}

TEST(RatFun, NormalizationAndArithmetic) {
  const auto& k = Fp(5);
  RatFun a(P(k, {0, 2}), P(k, {0, 0, 3}));  // 2x / 3x^2 = 4/x
  EXPECT_EQ(a.num(), P(k, {4}));
  EXPECT_EQ(a.den(), X(k));
  RatFun b(lin(k, 1), lin(k, 2));
  EXPECT_EQ((a + b) - b, a);
  EXPECT_EQ((a * b) / b, a);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_TRUE((a - a).den().is_one());
  EXPECT_THROW(RatFun(X(k), Poly(k)), Error);
  EXPECT_THROW(RatFun(k).inverse(), Error);
}

TEST(RatFun, Valuations) {
  const auto& k = Fp(5);
  // (x^2 + x) / (x - 1)^3
  RatFun r(P(k, {0, 1, 1}), lin(k, 1).pow(3));
  EXPECT_EQ(valuation(r, place(X(k))), 1);
  EXPECT_EQ(valuation(r, place(lin(k, 1))), -3);
  EXPECT_EQ(valuation(r, place(lin(k, 4))), 1);
  EXPECT_EQ(valuation(r, place(lin(k, 2))), 0);
  EXPECT_EQ(valuation(r, Place::infinity()), 1);
  try {
    valuation(RatFun(k), Place::infinity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroArgument);
  }
  // product formula: sum of deg(P) v_P(r) is zero
  std::int64_t s = valuation(r, Place::infinity());
  for (auto& P : support(r)) s += P.degree() * valuation(r, P);
  EXPECT_EQ(s, 0);
}

TEST(RatFun, WeakApproximation) {
  const auto& k = Fp(3);
  auto f = weak_approximant({{place(X(k)), -2}}, k);
  EXPECT_EQ(f, RatFun(Poly::one(k), X(k).pow(2)));
  auto g = weak_approximant({{place(X(k)), 1}, {place(lin(k, 1)), 1}}, k);
  EXPECT_EQ(g, RatFun(X(k) * lin(k, 1)));
  std::vector<std::pair<Place, std::int64_t>> cs = {
      {place(X(k)), -1}, {place(lin(k, 1)), 0}, {place(P(k, {1, 0, 1})), 2}, {Place::infinity(), -5}};
  auto h = weak_approximant(cs, k);
  for (auto& [P, t] : cs) EXPECT_EQ(valuation(h, P), t);
  for (auto& P : support(h)) {
    bool constrained = false;
    for (auto& [Q, t] : cs) constrained |= (Q == P);
    if (!constrained) EXPECT_GE(valuation(h, P), 0);
  }
  try {
    weak_approximant({{place(X(k)), 1}, {Place::infinity(), 0}}, k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WeakApproximationInfeasible);
  }
}

TEST(Places, CanonicalOrder) {
  const auto& k = Fp(3);
  std::vector<Place> ps = {Place::infinity(), place(P(k, {1, 0, 1})), place(lin(k, 2)), place(X(k))};
  std::sort(ps.begin(), ps.end());
  EXPECT_EQ(ps[0], place(X(k)));
  EXPECT_EQ(ps[1], place(lin(k, 2)));  // x + 1 sorts before x + 2 by code
  EXPECT_TRUE(ps.back().infinite);
  EXPECT_THROW(Place::finite(P(k, {2, 0, 1})), Error);
}
