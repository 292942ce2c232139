#pragma once

// Random validated towers: r <= 3, n_i <= 5, at most 6 ramified places, q <= 49.
// Every field in the list has a tame degree n <= 5 with n | q - 1.

#include <random>
#include <vector>

#include "fftower/tower.hpp"

namespace random_towers {

using namespace fftower;

struct Sample {
  TowerAnalysis analysis;
  bool uses_lower_generator = false;
};

struct Stats {
  int attempts = 0;
  int rejected = 0;
  int with_lower_generator = 0;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  // Draws until `count` towers with `levels` steps pass validation and the size limits.
  std::vector<Sample> draw(int levels, int count, Stats& stats) {
    std::vector<Sample> out;
    while (static_cast<int>(out.size()) < count) {
      ++stats.attempts;
      bool lower = false;
      TowerDescriptor d = candidate(levels, lower);
      if (d.levels() != levels) continue;
      try {
        TowerAnalysis A = run_analysis(d);
        if (!A.report.ok || A.ramified().size() > 6 || genus(A) > 30) {
          ++stats.rejected;
          continue;
        }
        if (lower) ++stats.with_lower_generator;
        out.push_back({std::move(A), lower});
      } catch (const Error&) {
        ++stats.rejected;
      }
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  const FiniteField& field() {
    static const std::vector<std::pair<unsigned, unsigned>> specs{
        {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {7, 1}, {7, 2}, {11, 1}, {13, 1}};
    auto [p, h] = specs[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(specs.size()) - 1))];
    return h == 1 ? FiniteField::prime(p) : FiniteField::get(first_irreducible_spec(p, h));
  }

  FieldElement nonzero(const FiniteField& k) { return FieldElement(static_cast<std::uint32_t>(uniform(1, k.q() - 1))); }

  // Monic irreducible of degree 1 or 2.
  Poly place_poly(const FiniteField& k) {
    for (;;) {
      const int deg = uniform(0, 3) == 0 ? 2 : 1;
      std::vector<FieldElement> c;
      for (int i = 0; i < deg; ++i) c.push_back(FieldElement(static_cast<std::uint32_t>(uniform(0, k.q() - 1))));
      c.push_back(k.one());
      Poly f(k, c);
      if (is_irreducible(f)) return f;
    }
  }

  std::vector<Poly> distinct_places(const FiniteField& k, int count) {
    std::vector<Poly> out;
    while (static_cast<int>(out.size()) < count) {
      Poly f = place_poly(k);
      bool dup = false;
      for (const auto& g : out) dup |= g == f;
      if (!dup) out.push_back(f);
    }
    return out;
  }

  RatFun kummer_rhs(const FiniteField& k, int n) {
    const int count = static_cast<int>(uniform(1, 3));
    auto places = distinct_places(k, count + 1);
    Poly c = Poly::constant(k, nonzero(k));
    std::int64_t deg = 0;
    for (int i = 0; i < count; ++i) {
      const auto e = uniform(1, n - 1);
      c *= places[static_cast<std::size_t>(i)].pow(static_cast<std::uint64_t>(e));
      deg += e * places[static_cast<std::size_t>(i)].degree();
    }
    // make the degree divisible by n so infinity stays unramified
    const Poly& last = places.back();
    for (int e = 1; e < n && deg % n != 0; ++e)
      if ((deg + e * last.degree()) % n == 0) {
        c *= last.pow(static_cast<std::uint64_t>(e));
        deg += e * last.degree();
      }
    return RatFun(c);
  }

  RatFun as_rhs(const FiniteField& k) {
    const auto p = static_cast<std::int64_t>(k.p());
    const int count = static_cast<int>(uniform(1, 2));
    RatFun c(k);
    for (const auto& pi : distinct_places(k, count)) {
      std::int64_t m = uniform(1, 3);
      if (m % p == 0) ++m;
      Poly num = Poly::constant(k, nonzero(k));
      if (pi.degree() == 2 && uniform(0, 1)) num = Poly(k, {nonzero(k), nonzero(k)});
      c = c + RatFun(num, pi.pow(static_cast<std::uint64_t>(m)));
    }
    return c;
  }

  TowerDescriptor candidate(int r, bool& lower) {
    const auto& k = field();
    const auto p = static_cast<int>(k.p());
    TowerDescriptor d;
    d.field = k.spec();
    lower = false;
    for (int i = 0; i < r; ++i) {
      std::vector<int> tame;
      for (int n = 2; n <= 5; ++n)
        if (n % p != 0 && (k.q() - 1) % static_cast<unsigned>(n) == 0) tame.push_back(n);
      const bool as_ok = p <= 5;
      const bool use_as = as_ok && (tame.empty() || uniform(0, 1) == 0);
      StepSpec s;
      s.kind = use_as ? StepKind::ArtinSchreier : StepKind::Kummer;
      s.n = use_as ? p : tame[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(tame.size()) - 1))];
      const RatFun base = use_as ? as_rhs(k) : kummer_rhs(k, s.n);
      TowerAlgebra::add_term(s.c, Exps(static_cast<std::size_t>(r), 0), base);
      if (i > 0 && uniform(0, 1) == 0) {
        // a multiple of a lower generator
        Exps e(static_cast<std::size_t>(r), 0);
        const int j = static_cast<int>(uniform(0, i - 1));
        e[static_cast<std::size_t>(j)] = 1;
        const Poly pi = place_poly(k);
        const RatFun coef = use_as ? RatFun(Poly::constant(k, nonzero(k)), pi) : RatFun(Poly::constant(k, nonzero(k)));
        if (use_as) {
          TowerAlgebra::add_term(s.c, e, coef);
        } else {
          // Kummer: c_i = base * y_j keeps the valuation data readable
          s.c = AlgebraElement{};
          TowerAlgebra::add_term(s.c, e, base * coef);
        }
        lower = true;
      }
      d.steps.push_back(std::move(s));
    }
    return d;
  }
};

}  // namespace random_towers
