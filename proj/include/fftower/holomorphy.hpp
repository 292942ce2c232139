#pragma once

// Independent holomorphy oracle: evaluates divisors of candidate differentials
// at every tracked place without consulting the t^mu formula.

#include <optional>
#include <vector>

#include "fftower/boseck.hpp"

namespace fftower {

// v(a dx) at the representative place above tp.base.
inline std::int64_t differential_valuation(const AlgebraElement& a, const TrackedPlace& tp) {
  const int r = static_cast<int>(tp.levels.size());
  ValuationResult v = valuation_at(a, tp, r);
  if (!v.certified) fail(Errc::ValuationAmbiguous, v.note);
  if (tp.base.infinite) return v.value - 2 * tp.e_upto(r);
  return v.value + different_exponent(tp);
}

inline AlgebraElement differential_coefficient(const TowerAnalysis& A, std::int64_t nu, const Exps& mu,
                                               const PlacePowers& g) {
  const auto& k = A.desc.k();
  RatFun coef(Poly::x(k).pow(static_cast<std::uint64_t>(nu)), place_product(g, k));
  return A.alg->monomial(mu, coef);
}

struct HolomorphyReport {
  bool holomorphic = true;
  std::vector<std::pair<Place, std::int64_t>> values;
  std::optional<Place> failing;
};

inline HolomorphyReport holomorphy_check(const TowerAnalysis& A, std::int64_t nu, const Exps& mu,
                                         const PlacePowers& g) {
  HolomorphyReport rep;
  const AlgebraElement a = differential_coefficient(A, nu, mu, g);
  for (const auto& tp : A.places) {
    const std::int64_t v = differential_valuation(a, tp);
    rep.values.emplace_back(tp.base, v);
    if (v < 0 && rep.holomorphic) {
      rep.holomorphic = false;
      rep.failing = tp.base;
    }
  }
  return rep;
}

inline HolomorphyReport holomorphy_check(const TowerAnalysis& A, const BasisElement& b) {
  return holomorphy_check(A, b.nu, b.mu, b.g);
}

}  // namespace fftower
