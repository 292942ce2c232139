#pragma once

// Normalization of single steps over k(x): Artin-Schreier weak standard form,
// the zero-valuation refinement, Kummer standard form, and two ways of turning
// a compositum into a tower in standard form.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fftower/places.hpp"
#include "fftower/tower.hpp"

namespace fftower {

// AS record: y = y' + witness, so r' = r - (w^p - w).
// Kummer record: y' = witness * y, so c' = witness^n * c.
struct Replacement {
  StepKind kind = StepKind::ArtinSchreier;
  RatFun witness;
  std::optional<Place> place;  // place whose valuation was improved, if any
  std::int64_t before = 0;
  std::int64_t after = 0;
};

struct SubstitutionChain {
  std::vector<Replacement> steps;
};

struct NormalForm {
  RatFun value;
  SubstitutionChain chain;
  std::optional<Place> auxiliary;  // zero-normal only: place that received the pole of alpha
};

inline RatFun artin_schreier_of(const RatFun& w) {
  return w.pow(static_cast<std::int64_t>(w.field().p())) - w;
}

// Applies the chain to the right-hand side of the input equation.
inline RatFun replay(const RatFun& rhs, const SubstitutionChain& chain, std::int64_t n) {
  RatFun r = rhs;
  for (const auto& s : chain.steps) {
    if (s.kind == StepKind::ArtinSchreier) r -= artin_schreier_of(s.witness);
    else r *= s.witness.pow(n);
  }
  return r;
}

inline std::vector<Place> pole_places(const RatFun& r) {
  std::vector<Place> out;
  if (r.is_zero()) return out;
  if (r.den().degree() > 0)
    for (auto& [g, e] : factorize(r.den()).factors) out.push_back(Place::trusted(g));
  if (valuation(r, Place::infinity()) < 0) out.push_back(Place::infinity());
  return out;
}

namespace detail {

// Leading coefficient of r at P as an element of the residue field
// (a polynomial of degree < deg P), i.e. the residue of r * pi^{-v}.
inline Poly leading_residue(const RatFun& r, const Place& P, std::int64_t v) {
  const auto& k = r.field();
  if (P.infinite) {
    // r ~ lc x^{-v}; den is monic
    return Poly::constant(k, r.num().lead());
  }
  return residue(r * RatFun(P.poly).pow(-v), P);
}

// Constant value of r at infinity (requires v_inf(r) >= 0).
inline FieldElement value_at_infinity(const RatFun& r) {
  const auto& k = r.field();
  if (r.is_zero() || r.num().degree() < r.den().degree()) return k.zero();
  return r.num().lead();
}

inline std::optional<FieldElement> constant_artin_schreier_root(const FiniteField& k, FieldElement a) {
  for (std::uint32_t c = 0; c < k.q(); ++c) {
    const FieldElement w(c);
    if (k.sub(k.pow(w, k.p()), w) == a) return w;
  }
  return std::nullopt;
}

// Smallest monic irreducible polynomial not among the given places.
inline Place first_place_outside(const FiniteField& k, const std::vector<Place>& avoid) {
  for (int d = 1;; ++d) {
    std::vector<std::uint32_t> digits(static_cast<std::size_t>(d), 0);
    for (;;) {
      std::vector<FieldElement> c;
      for (auto v : digits) c.push_back(FieldElement(v));
      c.push_back(k.one());
      Poly f(k, c);
      if (is_irreducible(f) && std::find(avoid.begin(), avoid.end(), Place::trusted(f)) == avoid.end())
        return Place::trusted(f);
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == k.q()) digits[i++] = 0;
      if (i == digits.size()) break;
    }
  }
}

}  // namespace detail

// Raises every pole of order divisible by p until it is coprime to p. The
// correction at P is w = sigma / pi^a with sigma^p the leading residue, so no
// new poles are created and the keep places are untouched.
inline NormalForm as_weak_standard_form(const RatFun& r, const std::vector<Place>& unramified_keep) {
  const auto& k = r.field();
  const auto p = static_cast<std::int64_t>(k.p());
  if (r.is_zero()) fail(Errc::NotAnASExtension, "r = 0");
  NormalForm out{r, {}, std::nullopt};
  RatFun& cur = out.value;
  for (const auto& P : pole_places(r)) {
    std::int64_t v = valuation(cur, P);
    const std::int64_t cap = -v;
    std::int64_t passes = 0;
    while (v < 0 && v % p == 0) {
      if (++passes > cap) fail(Errc::InvariantViolation, "weak standard form did not terminate");
      const std::int64_t a = -v / p;
      const Poly rho = detail::leading_residue(cur, P, v);
      RatFun w(k);
      if (P.infinite) {
        w = RatFun(Poly::monomial(k, k.pth_root(rho.coeff(0)), static_cast<int>(a)));
      } else {
        ResidueField F(P);
        w = RatFun(F.pth_root(rho), P.poly.pow(static_cast<std::uint64_t>(a)));
      }
      cur -= artin_schreier_of(w);
      const std::int64_t nv = cur.is_zero() ? 0 : valuation(cur, P);
      FFTOWER_ENSURE(cur.is_zero() || nv > v, "correction did not raise the valuation");
      out.chain.steps.push_back({StepKind::ArtinSchreier, w, P, v, nv});
      if (cur.is_zero()) break;
      v = nv;
    }
    if (cur.is_zero()) break;
  }
  if (cur.is_zero() || (cur.den().is_one() && cur.num().degree() <= 0)) {
    const FieldElement c = cur.is_zero() ? k.zero() : cur.num().coeff(0);
    if (k.trace(c) == 0) fail(Errc::NotAnASExtension, "r is of the form w^p - w");
  }
  for (const auto& P : unramified_keep) {
    if (!cur.is_zero() && valuation(cur, P) < 0)
      fail(Errc::StandardFormViolation, "place in the keep set ramifies");
  }
  return out;
}

// Makes the valuation exactly 0 at every keep place, leaving the ramified
// valuations alone. The pole of the CRT element alpha is put at infinity, or
// at the first finite place outside the ramified and keep places when infinity
// is one of them.
inline NormalForm as_zero_normal(const RatFun& r, const std::vector<Place>& keep) {
  const auto& k = r.field();
  if (keep.empty()) return {r, {}, std::nullopt};
  if (k.h() == 1) fail(Errc::ConstantFieldTooSmall, "needs a constant outside the prime field");
  NormalForm out = as_weak_standard_form(r, keep);
  const RatFun r0 = out.value;
  const auto ramified = pole_places(r0);

  // target residues of alpha at the keep places
  std::vector<std::pair<Poly, Poly>> congruences;  // (modulus, residue)
  std::optional<FieldElement> infinity_target;
  for (const auto& P : keep) {
    const std::int64_t v = valuation(r0, P);
    if (P.infinite) {
      if (v > 0) infinity_target = k.zero();
      else {
        auto root = detail::constant_artin_schreier_root(k, detail::value_at_infinity(r0));
        infinity_target = root ? *root : k.one();
      }
      continue;
    }
    Poly target = Poly::one(k);  // S3: anything nonzero
    if (v > 0) {
      target = Poly(k);  // S1
    } else {
      ResidueField F(P);
      auto root = F.artin_schreier_root(residue(r0, P));
      if (root) target = *root;  // S2
    }
    congruences.emplace_back(P.poly, target);
  }

  std::vector<Place> avoid = ramified;
  avoid.insert(avoid.end(), keep.begin(), keep.end());
  const bool infinity_free = std::find(avoid.begin(), avoid.end(), Place::infinity()) == avoid.end();
  Poly modulus = Poly::one(k);
  for (auto& [m, t] : congruences) modulus *= m;
  RatFun alpha(k);
  if (infinity_free) {
    std::vector<Poly> ms, rs;
    for (auto& [m, t] : congruences) { ms.push_back(m); rs.push_back(t); }
    alpha = RatFun(ms.empty() ? Poly(k) : crt(rs, ms, k));
    out.auxiliary = Place::infinity();
  } else {
    const Place Q = detail::first_place_outside(k, avoid);
    const int D = modulus.degree();
    const int dq = Q.degree();
    const int m = std::max(1, (D + dq - 1) / dq);
    const Poly Qm = Q.poly.pow(static_cast<std::uint64_t>(m));
    std::vector<Poly> ms, rs;
    for (auto& [mod, t] : congruences) {
      ms.push_back(mod);
      rs.push_back((t * Qm) % mod);
    }
    Poly N = ms.empty() ? Poly(k) : crt(rs, ms, k);
    if (infinity_target)
      N += Poly::monomial(k, *infinity_target, m * dq - D) * modulus;
    alpha = RatFun(N, Qm);
    out.auxiliary = Q;
  }
  const FieldElement gamma(k.p());  // smallest constant outside F_p
  const RatFun w = alpha + RatFun::constant(k, gamma);
  const RatFun result = r0 - artin_schreier_of(w);
  for (const auto& P : keep) FFTOWER_ENSURE(valuation(result, P) == 0, "zero-normal: keep valuation not zero");
  for (const auto& P : ramified)
    FFTOWER_ENSURE(valuation(result, P) == valuation(r0, P), "zero-normal: ramified valuation changed");
  out.chain.steps.push_back({StepKind::ArtinSchreier, w, std::nullopt, 0, 0});
  out.value = result;
  return out;
}

// c' = alpha^n c with finite valuations reduced into [0, n).
inline NormalForm kummer_standard_form(const RatFun& c, std::int64_t n) {
  const auto& k = c.field();
  if (c.is_zero()) fail(Errc::ZeroArgument, "Kummer generator is zero");
  if (n < 2) fail(Errc::NotPrimitive, "degree must be at least 2");
  if (!k.has_nth_roots_of_unity(static_cast<std::uint64_t>(n)))
    fail(Errc::StandardFormViolation, "k lacks primitive " + std::to_string(n) + "-th roots of unity");
  std::map<Place, std::int64_t> val;
  for (const Poly* part : {&c.num(), &c.den()}) {
    if (part->degree() < 1) continue;
    const std::int64_t sign = part == &c.num() ? 1 : -1;
    for (auto& [g, e] : factorize(*part).factors) val[Place::trusted(g)] += sign * e;
  }
  std::int64_t common = n;
  for (auto& [P, v] : val) common = std::gcd(common, v < 0 ? -v : v);
  if (common > 1)
    fail(Errc::NotPrimitive, "c is a " + std::to_string(common) + "-th power up to constants");
  RatFun alpha = RatFun::one(k);
  for (auto& [P, v] : val) {
    const std::int64_t fl = v >= 0 ? v / n : -((-v + n - 1) / n);
    if (fl != 0) alpha *= RatFun(P.poly).pow(-fl);
  }
  NormalForm out{c, {}, std::nullopt};
  if (!alpha.is_one()) {
    out.value = c * alpha.pow(n);
    out.chain.steps.push_back({StepKind::Kummer, alpha, std::nullopt, 0, 0});
  }
  const std::int64_t vinf = valuation(out.value, Place::infinity());
  if (vinf % n != 0) fail(Errc::StandardFormViolation, "infinity ramifies: v_inf(c) = " + std::to_string(vinf));
  return out;
}

struct CyclicComponent {
  StepKind kind = StepKind::Kummer;
  int n = 2;
  RatFun c;
};

// Artin-Schreier components first, then Kummer components, each in input order.
inline TowerDescriptor compositum_to_tower(const FieldSpec& field, const std::vector<CyclicComponent>& components) {
  const auto& k = FiniteField::get(field);
  const auto p = static_cast<std::int64_t>(k.p());
  std::vector<CyclicComponent> as, ku;
  for (const auto& comp : components) {
    if (&comp.c.field() != &k) fail(Errc::FieldMismatch, "component over a different field");
    if (comp.kind == StepKind::ArtinSchreier) {
      if (comp.n != p) fail(Errc::ValidationFailed, "Artin-Schreier component must have degree p");
      as.push_back({comp.kind, comp.n, as_weak_standard_form(comp.c, {}).value});
    } else {
      ku.push_back({comp.kind, comp.n, kummer_standard_form(comp.c, comp.n).value});
    }
  }
  std::map<Place, std::int64_t> e_prev;
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (const auto& P : pole_places(as[i].c)) {
      if (e_prev.count(P))
        fail(Errc::SharedRamification, "two Artin-Schreier components ramify at the same place");
      e_prev[P] = p;
    }
  }
  for (const auto& comp : ku) {
    std::map<Place, std::int64_t> next = e_prev;
    for (const auto& P : support(comp.c)) {
      const std::int64_t v = valuation(comp.c, P);
      if (v % comp.n == 0) continue;
      const std::int64_t e = e_prev.count(P) ? e_prev[P] : 1;
      const std::int64_t g = std::gcd(static_cast<std::int64_t>(comp.n), (v * e) < 0 ? -(v * e) : v * e);
      if (g != 1)
        fail(Errc::DivisibilityObstruction,
             "n = " + std::to_string(comp.n) + " shares a factor with v(c) e = " + std::to_string(v * e));
      next[P] = e * comp.n;
    }
    e_prev = std::move(next);
  }
  TowerDescriptor d;
  d.field = field;
  const auto r = as.size() + ku.size();
  for (const auto* list : {&as, &ku}) {
    for (const auto& comp : *list) {
      AlgebraElement c;
      c.terms.emplace(Exps(r, 0), comp.c);
      d.steps.push_back({comp.kind, comp.n, c});
    }
  }
  auto rep = validate(d);
  if (!rep.ok) fail(Errc::ValidationFailed, rep.first_failure());
  return d;
}

struct MergePrediction {
  Place place;
  bool ramified = true;
  std::int64_t valuation = 0;  // at the place of K(y2) above, when ramified
};

struct MergeResult {
  FieldElement alpha;        // y1' = y1 - alpha y2^n
  AlgebraElement rhs;        // y1'^p - y1' over K(y2)
  TowerDescriptor tower;     // y2 first, then y1'
  std::vector<MergePrediction> predicted;
  bool verified = false;     // predictions agree with the valuation oracle
};

// y1^p - y1 = a1 + m1 z^n and y2^p - y2 = m2 z.
inline MergeResult elementary_abelian_merge(const RatFun& a1, const RatFun& z, FieldElement m1, FieldElement m2,
                                            std::int64_t n) {
  const auto& k = z.field();
  const auto p = static_cast<std::int64_t>(k.p());
  if (n < 1 || n % p == 0) fail(Errc::NotCoprimeToCharacteristic, "n must be positive and prime to p");
  if (m1 == k.zero() || m2 == k.zero()) fail(Errc::ZeroArgument, "m1 and m2 must be nonzero");
  const auto a_poles = pole_places(a1);
  const auto z_poles = pole_places(z);
  for (const auto& P : a_poles)
    if (std::find(z_poles.begin(), z_poles.end(), P) != z_poles.end())
      fail(Errc::SharedPoles, "a1 and z share a pole");

  MergeResult res;
  res.alpha = k.pth_root(k.mul(m1, k.inv(k.pow(m2, n))));
  const FieldElement drift = k.sub(res.alpha, k.pow(res.alpha, p));  // alpha - alpha^p

  // a1 + (alpha - alpha^p) y2^n - m1 sum_{j=1}^{n-1} C(n,j) m2^{-j} z^{n-j} y2^j
  TowerDescriptor d;
  d.field = k.spec();
  AlgebraElement c1;
  if (!z.is_zero()) c1.terms.emplace(Exps{0}, z.scaled(m2));
  d.steps.push_back({StepKind::ArtinSchreier, static_cast<int>(p), c1});
  const TowerAlgebra lower = make_algebra(d);
  d.steps[0].c = {};
  if (!z.is_zero()) d.steps[0].c.terms.emplace(Exps{0, 0}, z.scaled(m2));
  const AlgebraElement y2 = lower.generator(0);
  AlgebraElement rhs = lower.from_ratfun(a1);
  rhs = lower.add(rhs, lower.scale(lower.pow(y2, static_cast<std::uint64_t>(n)), RatFun::constant(k, drift)));
  std::int64_t binom = 1;
  for (std::int64_t j = 1; j < n; ++j) {
    binom = binom * (n - j + 1) / j;
    const FieldElement coef =
        k.neg(k.mul(m1, k.mul(k.from_int(binom), k.inv(k.pow(m2, j)))));
    if (coef == k.zero()) continue;
    const RatFun zc = z.pow(n - j).scaled(coef);
    rhs = lower.add(rhs, lower.scale(lower.pow(y2, static_cast<std::uint64_t>(j)), zc));
  }
  AlgebraElement rhs2;
  for (const auto& [e, c] : rhs.terms) rhs2.terms.emplace(Exps{e[0], 0}, c);
  res.rhs = rhs2;
  d.steps.push_back({StepKind::ArtinSchreier, static_cast<int>(p), rhs2});
  d.options.assume_uniform = true;
  res.tower = d;

  for (const auto& P : a_poles) res.predicted.push_back({P, true, valuation(a1, P)});
  for (const auto& P : z_poles) {
    const std::int64_t vz = valuation(z, P);
    if (n >= 2) res.predicted.push_back({P, true, vz * (1 + p * (n - 1))});
    else if (drift != k.zero()) res.predicted.push_back({P, true, vz});
    else res.predicted.push_back({P, false, 0});
  }

  TowerAnalysis A = run_analysis(d);
  res.verified = true;
  for (const auto& pr : res.predicted) {
    const TrackedPlace* tp = A.find(pr.place);
    if (!tp || tp->levels.size() < 2) {
      res.verified = false;
      continue;
    }
    const auto& L = tp->levels[1];
    if (pr.ramified) res.verified = res.verified && L.ramified && L.vc == pr.valuation;
    else res.verified = res.verified && !L.ramified && L.vc >= 0;
  }
  return res;
}

}  // namespace fftower
