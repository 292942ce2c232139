#pragma once

// Invariants lambda, rho, t^mu and the explicit basis x^nu g_mu^{-1} y^mu dx
// of holomorphic differentials of a tower in standard form.

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fftower/tower.hpp"

namespace fftower {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {  // NOLINT implicit from integer
    if (den == 0) fail(Errc::DivisionByZero, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }
  bool is_integer() const { return den == 1; }
  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

using PlacePowers = std::vector<std::pair<Place, std::int64_t>>;

inline Poly place_product(const PlacePowers& g, const FiniteField& k) {
  Poly r = Poly::one(k);
  for (const auto& [P, e] : g) r *= P.poly.pow(static_cast<std::uint64_t>(e));
  return r;
}

struct PlaceInvariant {
  Place place;
  std::vector<std::int64_t> delta;  // per level
  std::int64_t e_total = 1;
  std::int64_t lambda = 0;
  std::int64_t rho = 0;
};

struct MuInvariants {
  Exps mu;
  std::vector<PlaceInvariant> places;
  Rational t_exact;
  std::int64_t t = 0;
  PlacePowers g;  // places with lambda > 0
};

struct BasisElement {
  std::int64_t nu = 0;
  Exps mu;
  PlacePowers g;

  friend bool operator==(const BasisElement& a, const BasisElement& b) {
    return a.nu == b.nu && a.mu == b.mu && a.g == b.g;
  }
};

// mu^0: 0 at Kummer levels, p-1 at Artin-Schreier levels.
inline Exps excluded_exponent(const TowerDescriptor& d) {
  Exps mu0;
  for (const auto& s : d.steps) mu0.push_back(s.kind == StepKind::Kummer ? 0 : s.n - 1);
  return mu0;
}

inline std::vector<Exps> exponent_set(const TowerDescriptor& d) {
  std::vector<Exps> out;
  const int r = d.levels();
  Exps mu(static_cast<std::size_t>(r), 0);
  const Exps mu0 = excluded_exponent(d);
  for (;;) {
    if (mu != mu0) out.push_back(mu);
    int i = r - 1;
    while (i >= 0) {
      auto ui = static_cast<std::size_t>(i);
      if (++mu[ui] < d.steps[ui].n) break;
      mu[ui] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

inline PlaceInvariant place_invariant(const TrackedPlace& tp, const Exps& mu, std::int64_t p) {
  const int r = static_cast<int>(tp.levels.size());
  PlaceInvariant inv;
  inv.place = tp.base;
  inv.e_total = tp.e_upto(r);
  std::int64_t sum = 0;
  for (int i = 0; i < r; ++i) {
    const auto& L = tp.levels[static_cast<std::size_t>(i)];
    const std::int64_t m = mu[static_cast<std::size_t>(i)];
    std::int64_t delta = 0;
    if (L.ramified) {
      if (L.kind == StepKind::ArtinSchreier) delta = (p - 1 - m) * (-L.vy) + (p - 1);
      else delta = m * L.vy + (L.e - 1);
    }
    inv.delta.push_back(delta);
    sum += tp.e_between(i + 1, r) * delta;
  }
  inv.lambda = sum / inv.e_total;
  inv.rho = sum % inv.e_total;
  return inv;
}

inline MuInvariants boseck_invariants(const TowerAnalysis& A, const Exps& mu) {
  const int r = A.levels();
  const auto p = static_cast<std::int64_t>(A.desc.k().p());
  MuInvariants out;
  out.mu = mu;
  Rational t(0);
  for (const auto* tp : A.ramified()) {
    PlaceInvariant inv = place_invariant(*tp, mu, p);
    Rational term(inv.lambda);
    for (int i = 0; i < r; ++i) {
      const auto& L = tp->levels[static_cast<std::size_t>(i)];
      if (L.kind != StepKind::Kummer) continue;
      term = term - Rational(L.vy * mu[static_cast<std::size_t>(i)], tp->e_upto(i + 1));
    }
    t = t + Rational(tp->base.degree()) * term;
    if (inv.lambda > 0) out.g.emplace_back(tp->base, inv.lambda);
    out.places.push_back(std::move(inv));
  }
  out.t_exact = t;
  if (!t.is_integer()) fail(Errc::NonIntegralInvariant, "t^mu = " + std::to_string(t.num) + "/" + std::to_string(t.den));
  out.t = t.num;
  return out;
}

inline std::vector<BasisElement> enumerate_basis(const TowerAnalysis& A) {
  std::vector<BasisElement> out;
  for (const auto& mu : exponent_set(A.desc)) {
    MuInvariants inv = boseck_invariants(A, mu);
    for (std::int64_t nu = 0; nu <= inv.t - 2; ++nu) out.push_back({nu, mu, inv.g});
  }
  return out;
}

// y^p - y = f with f in standard form over k(x).
inline std::vector<BasisElement> enumerate_basis_single_as(const RatFun& f) {
  const auto& k = f.field();
  const auto p = static_cast<std::int64_t>(k.p());
  if (f.is_zero() || valuation(f, Place::infinity()) < 0)
    fail(Errc::StandardFormViolation, "f must be nonzero with no pole at infinity");
  std::vector<std::pair<Place, std::int64_t>> poles;  // pole orders
  for (auto& [g, e] : factorize(f.den()).factors) {
    if (e % p == 0) fail(Errc::StandardFormViolation, "pole order divisible by p");
    poles.emplace_back(Place::trusted(g), e);
  }
  if (poles.empty()) fail(Errc::StandardFormViolation, "f has no pole");
  std::vector<BasisElement> out;
  for (std::int64_t mu = 0; mu <= p - 2; ++mu) {
    PlacePowers g;
    std::int64_t t = 0;
    for (const auto& [P, v] : poles) {
      const std::int64_t lam = ((p - 1 - mu) * v + p - 1) / p;
      t += P.degree() * lam;
      if (lam > 0) g.emplace_back(P, lam);
    }
    for (std::int64_t nu = 0; nu <= t - 2; ++nu) out.push_back({nu, {static_cast<int>(mu)}, g});
  }
  return out;
}

struct KummerPlaceData {
  Place place;
  std::int64_t v = 0;  // valuation after normalization, in (0, n)
  std::int64_t e = 1;
};

// Exponents of f reduced into [0, n); rejects ramification at infinity and
// non-primitive generators.
inline std::vector<KummerPlaceData> kummer_reduced_exponents(const RatFun& f, std::int64_t n) {
  if (f.is_zero()) fail(Errc::ZeroArgument, "Kummer generator is zero");
  std::map<Place, std::int64_t> val;
  for (const Poly* part : {&f.num(), &f.den()}) {
    if (part->degree() < 1) continue;
    const std::int64_t sign = part == &f.num() ? 1 : -1;
    for (auto& [g, e] : factorize(*part).factors) val[Place::trusted(g)] += sign * e;
  }
  std::vector<KummerPlaceData> out;
  std::int64_t deg = 0, common = n;
  for (const auto& [P, v] : val) {
    const std::int64_t l = ((v % n) + n) % n;
    if (l == 0) continue;
    const std::int64_t e = n / std::gcd(n, l);
    out.push_back({P, l, e});
    deg += l * P.degree();
    common = std::gcd(common, l);
  }
  if (out.empty() || common > 1) fail(Errc::NotPrimitive, "generator is a proper power up to units and n-th powers");
  if (deg % n != 0) fail(Errc::StandardFormViolation, "infinity ramifies (degree not divisible by n)");
  return out;
}

inline std::int64_t single_kummer_genus(const RatFun& f, std::int64_t n) {
  std::int64_t twice = 2 - 2 * n;
  for (const auto& d : kummer_reduced_exponents(f, n)) twice += (d.e - 1) * (n / d.e) * d.place.degree();
  if (twice % 2 != 0) fail(Errc::NonIntegralGenus, "odd 2g");
  return twice / 2;
}

inline std::int64_t single_as_genus(const RatFun& f) {
  const auto p = static_cast<std::int64_t>(f.field().p());
  std::int64_t s = -2;
  for (auto& [g, e] : factorize(f.den()).factors) s += (e + 1) * g.degree();
  return (p - 1) * s / 2;
}

// y^n = f; f is first brought into the reduced exponent range.
inline std::vector<BasisElement> enumerate_basis_single_kummer(const RatFun& f, std::int64_t n) {
  auto data = kummer_reduced_exponents(f, n);
  std::vector<BasisElement> out;
  for (std::int64_t mu = 1; mu <= n - 1; ++mu) {
    PlacePowers g;
    Rational t(0);
    for (const auto& d : data) {
      const std::int64_t m = d.e * d.v / n;
      const std::int64_t s = mu * m + d.e - 1;
      const std::int64_t lam = s / d.e, rho = s % d.e;
      t = t + Rational(d.place.degree() * (d.e - 1 - rho), d.e);
      if (lam > 0) g.emplace_back(d.place, lam);
    }
    if (!t.is_integer()) fail(Errc::NonIntegralInvariant, "non-integral t");
    for (std::int64_t nu = 0; nu <= t.num - 2; ++nu) out.push_back({nu, {static_cast<int>(mu)}, g});
  }
  return out;
}

}  // namespace fftower
