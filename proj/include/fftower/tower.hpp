#pragma once

// Tower descriptors, validation and ramification analysis.

#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fftower/places.hpp"
#include "fftower/tower_algebra.hpp"

namespace fftower {

struct StepSpec {
  StepKind kind = StepKind::Kummer;
  int n = 2;  // Kummer degree, or p for Artin-Schreier steps
  AlgebraElement c;
};

struct ValuationCertificate {
  int step = 1;  // 1-based
  Place place;
  std::int64_t valuation = 0;
};

struct TowerOptions {
  bool assume_uniform = false;
  std::vector<ValuationCertificate> certificates;
  // Images of (y_1, ..., y_r) under the generator of step i (1-based), replacing
  // the default y_i -> zeta y_i or y_i + 1 with the other generators fixed.
  std::map<int, std::vector<AlgebraElement>> actions;
  std::vector<Place> keep;
  bool zero_normal = false;
  std::uint64_t seed = 0;  // factorization PRNG; results do not depend on it
};

struct TowerDescriptor {
  FieldSpec field;
  std::vector<StepSpec> steps;
  TowerOptions options;

  const FiniteField& k() const { return FiniteField::get(field); }
  int levels() const { return static_cast<int>(steps.size()); }
};

inline TowerAlgebra make_algebra(const TowerDescriptor& d) {
  std::vector<StepKind> kinds;
  std::vector<int> degrees;
  std::vector<AlgebraElement> cs;
  for (const auto& s : d.steps) {
    kinds.push_back(s.kind);
    degrees.push_back(s.n);
    cs.push_back(s.c);
  }
  return TowerAlgebra(d.k(), std::move(kinds), std::move(degrees), std::move(cs));
}

struct CheckResult {
  std::string check;  // "a" .. "h"
  int step = 0;       // 1-based, 0 for tower-wide checks
  std::optional<Place> place;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  void add(const std::string& check, int step, std::optional<Place> place, bool passed, std::string detail) {
    if (!passed) ok = false;
    checks.push_back({check, step, std::move(place), passed, std::move(detail)});
  }
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return "check (" + c.check + ") step " + std::to_string(c.step) + ": " + c.detail;
    return {};
  }
};

inline std::int64_t as_jump(const LevelData& L) {
  return L.kind == StepKind::ArtinSchreier ? 1 - L.vc : 1;
}

// Different exponent d(P|P) at the top of the tower.
inline std::int64_t different_exponent(const TrackedPlace& tp) {
  const int r = static_cast<int>(tp.levels.size());
  std::int64_t d = 0;
  for (int i = 0; i < r; ++i) {
    const auto& L = tp.levels[static_cast<std::size_t>(i)];
    if (!L.ramified) continue;
    d += tp.e_between(i + 1, r) * (L.e - 1) * as_jump(L);
  }
  return d;
}

inline bool is_ramified(const TrackedPlace& tp) {
  for (const auto& L : tp.levels)
    if (L.ramified) return true;
  return false;
}

struct TowerAnalysis {
  TowerDescriptor desc;
  std::shared_ptr<const TowerAlgebra> alg;
  std::vector<TrackedPlace> places;  // finite candidates in canonical order, infinity last
  std::vector<RatFun> norms;         // N_{L_{i-1}/K}(c_i), empty when c_i lies in K
  std::int64_t degree = 1;
  ValidationReport report;

  int levels() const { return desc.levels(); }
  const TrackedPlace& infinity() const { return places.back(); }
  std::vector<const TrackedPlace*> ramified() const {
    std::vector<const TrackedPlace*> out;
    for (const auto& tp : places)
      if (!tp.base.infinite && is_ramified(tp)) out.push_back(&tp);
    return out;
  }
  const TrackedPlace* find(const Place& P) const {
    for (const auto& tp : places)
      if (tp.base == P) return &tp;
    return nullptr;
  }
};

namespace detail {

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// Order of the class of a in F'^* / F'^{*n}, F' the degree-F extension of the residue field.
inline std::optional<std::int64_t> kummer_class_order(const ResidueField& F, const Poly& a, std::int64_t n,
                                                      std::int64_t ext) {
  auto Q = F.size();
  if (!Q || (*Q - 1) % static_cast<std::uint64_t>(n) != 0) return std::nullopt;
  const std::uint64_t e = ((*Q - 1) / static_cast<std::uint64_t>(n)) * static_cast<std::uint64_t>(ext % n);
  Poly b = F.pow(a, e);
  Poly c = b;
  std::int64_t ord = 1;
  while (!c.is_one()) {
    c = F.mul(c, b);
    if (++ord > n) return std::nullopt;
  }
  return ord;
}

inline std::optional<std::int64_t> step_inertia(const TowerAlgebra& alg, const StepSpec& s, const TrackedPlace& tp,
                                                int i, std::int64_t ext) {
  const auto& L = tp.levels[static_cast<std::size_t>(i)];
  if (L.ramified && (L.kind == StepKind::ArtinSchreier || L.e == L.degree)) return 1;
  if (!s.c.in_base_field()) return std::nullopt;
  const RatFun c = s.c.terms.begin()->second;
  ResidueField F(tp.base);
  const auto p = static_cast<std::int64_t>(alg.field().p());
  if (L.kind == StepKind::ArtinSchreier) {
    if (L.vc > 0) return 1;
    if (L.vc < 0) return std::nullopt;
    const std::int64_t t = static_cast<std::int64_t>(F.trace_to_prime(residue(c, tp.base))) * (ext % p) % p;
    return t == 0 ? 1 : p;
  }
  if (!L.ramified) {
    if (L.vc != 0) return std::nullopt;
    return kummer_class_order(F, residue(c, tp.base), L.degree, ext);
  }
  if (tp.e_upto(i) != 1) return std::nullopt;
  const std::int64_t v = valuation(c, tp.base);
  const RatFun unit = c * RatFun(tp.base.poly).pow(-v);
  return kummer_class_order(F, residue(unit, tp.base), L.degree / L.e, ext);
}

}  // namespace detail

// Runs every check and, where possible, the per-place analysis.
inline TowerAnalysis run_analysis(const TowerDescriptor& desc) {
  TowerAnalysis A;
  A.desc = desc;
  auto& rep = A.report;
  const auto& k = desc.k();
  const int r = desc.levels();
  const auto p = static_cast<std::int64_t>(k.p());
  const bool uniform = desc.options.assume_uniform;

  // (a) roots of unity / degrees, (b) shape of c_i
  bool shape_ok = true;
  for (int i = 0; i < r; ++i) {
    const auto& s = desc.steps[static_cast<std::size_t>(i)];
    if (s.kind == StepKind::Kummer) {
      const bool tame = s.n >= 2 && s.n % static_cast<int>(p) != 0;
      rep.add("a", i + 1, std::nullopt, tame, tame ? "degree prime to p" : "Kummer degree must be >= 2 and prime to p");
      if (tame && !uniform) {
        const bool roots = (k.q() - 1) % static_cast<std::uint32_t>(s.n) == 0;
        rep.add("a", i + 1, std::nullopt, roots,
                roots ? "roots of unity present" : "k lacks primitive " + std::to_string(s.n) + "-th roots of unity");
      }
    } else {
      const bool ok = s.n == static_cast<int>(p);
      rep.add("a", i + 1, std::nullopt, ok, ok ? "Artin-Schreier degree p" : "Artin-Schreier step must have degree p");
    }
    bool ok = !s.c.is_zero();
    std::string why = ok ? "c nonzero and reduced" : "c is zero";
    for (const auto& [e, coef] : s.c.terms) {
      if (e.size() != static_cast<std::size_t>(r) || coef.is_zero()) {
        ok = false;
        why = "malformed term";
        break;
      }
      for (int j = 0; j < r && ok; ++j) {
        const int ej = e[static_cast<std::size_t>(j)];
        if (j >= i && ej != 0) { ok = false; why = "c involves y_" + std::to_string(j + 1); }
        else if (ej < 0 || ej >= desc.steps[static_cast<std::size_t>(j)].n) { ok = false; why = "exponent not reduced"; }
      }
    }
    rep.add("b", i + 1, std::nullopt, ok, why);
    shape_ok = shape_ok && ok;
  }
  if (!shape_ok) return A;

  A.alg = std::make_shared<const TowerAlgebra>(make_algebra(desc));
  const auto& alg = *A.alg;
  A.degree = alg.total_degree(r);

  // candidate places
  std::vector<Place> cand;
  A.norms.assign(static_cast<std::size_t>(r), RatFun());
  for (int i = 0; i < r; ++i) {
    const auto& s = desc.steps[static_cast<std::size_t>(i)];
    for (const auto& [e, coef] : s.c.terms)
      for (auto& P : support(coef, desc.options.seed)) cand.push_back(P);
    if (!s.c.in_base_field()) {
      A.norms[static_cast<std::size_t>(i)] = alg.norm(s.c, i);
      for (auto& P : support(A.norms[static_cast<std::size_t>(i)], desc.options.seed)) cand.push_back(P);
    }
  }
  for (const auto& cert : desc.options.certificates)
    if (!cert.place.infinite) cand.push_back(cert.place);
  cand.push_back(Place::trusted(Poly::x(k)));  // basis coefficients carry powers of x
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.push_back(Place::infinity());

  std::vector<std::vector<std::int64_t>> ram_vals(static_cast<std::size_t>(r));
  std::vector<bool> step_has_ramified(static_cast<std::size_t>(r), false);

  for (const auto& P : cand) {
    TrackedPlace tp{P, {}};
    std::optional<std::int64_t> ext = 1;
    for (int i = 0; i < r; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto& s = desc.steps[ui];
      LevelData L;
      L.kind = s.kind;
      L.degree = s.n;
      ValuationResult vr = valuation_at(s.c, tp, i);
      const std::int64_t eprev = tp.e_upto(i);
      const std::int64_t Dprev = alg.total_degree(i);
      for (const auto& cert : desc.options.certificates) {
        if (cert.step == i + 1 && cert.place == P) {
          vr = {cert.valuation, true, "certificate"};
          rep.notes.push_back("valuation of c_" + std::to_string(i + 1) + " taken from certificate");
        }
      }
      if (!vr.certified && !A.norms[ui].is_zero()) {
        const std::int64_t vN = valuation(A.norms[ui], P);
        if (vN == (Dprev / eprev) * vr.value) {
          vr.certified = true;
          vr.note = "certified by norm";
        }
      }
      if (!vr.certified && s.kind == StepKind::ArtinSchreier && vr.value >= 0) {
        // the term minimum is a lower bound, and v(c) >= 0 already means unramified
        vr.certified = true;
        rep.notes.push_back("step " + std::to_string(i + 1) + ": only a lower bound for v(c) is known, step unramified");
      }
      if (!vr.certified) {
        rep.add(s.kind == StepKind::Kummer ? "d" : "c", i + 1, P, false, "ValuationAmbiguous: " + vr.note);
      }
      L.vc = vr.value;
      const std::int64_t vc = L.vc;
      if (s.kind == StepKind::Kummer) {
        const std::int64_t n = s.n;
        const std::int64_t g = detail::gcd64(n, vc == 0 ? n : vc);
        L.e = n / g;
        L.vy = L.e * vc / n;
        L.ramified = L.e > 1;
        if (P.infinite) {
          if (L.ramified) rep.add("f", i + 1, P, false, "infinity ramified in Kummer step");
          if (vc > 0) rep.add("d", i + 1, P, false, "v(c) > 0 above infinity");
        } else if (L.ramified) {
          if (!(vc > 0 && vc < n)) rep.add("d", i + 1, P, false, "ramified valuation " + std::to_string(vc) + " outside [0, n)");
          ram_vals[ui].push_back(vc);
          step_has_ramified[ui] = true;
        } else if (vc != 0) {
          rep.add("d", i + 1, P, false, "unramified finite place with v(c) = " + std::to_string(vc));
        }
      } else {
        if (vc < 0 && vc % p != 0) {
          L.e = p;
          L.vy = vc;
          L.ramified = true;
          if (P.infinite) rep.add("f", i + 1, P, false, "infinity ramified in Artin-Schreier step");
          else step_has_ramified[ui] = true;
        } else if (vc < 0) {
          rep.add("c", i + 1, P, false, "v(c) = " + std::to_string(vc) + " negative and divisible by p");
          L.vy = vc / p;
        } else {
          L.vy = 0;
          L.representative_choice = vc > 0;
        }
      }
      // (h) uniformity across the places above P, via the norm
      if (!uniform && !A.norms[ui].is_zero()) {
        const std::int64_t vN = valuation(A.norms[ui], P);
        const std::int64_t expect = (Dprev / eprev) * vc;
        bool ok = true;
        if (s.kind == StepKind::ArtinSchreier && vc >= 0) ok = vN >= 0;
        else ok = vN == expect;
        if (!ok)
          rep.add("h", i + 1, P, false,
                  "norm valuation " + std::to_string(vN) + " inconsistent with uniform valuation " + std::to_string(vc));
      }
      tp.levels.push_back(L);
      // residue degree of the step; later ties are only resolved at inert levels
      if (!P.infinite && ext) {
        auto f = detail::step_inertia(alg, s, tp, i, *ext);
        tp.levels.back().inertia = f;
        ext = f ? std::optional<std::int64_t>(*ext * *f) : std::nullopt;
      }
    }
    A.places.push_back(std::move(tp));
  }

  for (int i = 0; i < r; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto& s = desc.steps[ui];
    if (s.kind == StepKind::Kummer) {
      std::int64_t g = s.n;
      for (auto v : ram_vals[ui]) g = detail::gcd64(g, v);
      rep.add("e", i + 1, std::nullopt, g == 1,
              g == 1 ? "no common divisor of n and the ramified valuations"
                     : "d = " + std::to_string(g) + " divides n and every ramified valuation");
    } else {
      rep.add("g", i + 1, std::nullopt, step_has_ramified[ui],
              step_has_ramified[ui] ? "has a ramified place" : "Artin-Schreier step without a ramified place");
    }
  }
  return A;
}

inline ValidationReport validate(const TowerDescriptor& desc) { return run_analysis(desc).report; }

inline TowerAnalysis analyze(const TowerDescriptor& desc) {
  TowerAnalysis A = run_analysis(desc);
  if (!A.report.ok) fail(Errc::ValidationFailed, A.report.first_failure());
  return A;
}

inline std::int64_t genus(const TowerAnalysis& A) {
  const std::int64_t D = A.degree;
  std::int64_t twice = 2 - 2 * D;
  for (const auto* tp : A.ramified()) {
    const std::int64_t e = tp->e_upto(A.levels());
    if (D % e != 0) fail(Errc::NonIntegralGenus, "ramification index does not divide the degree");
    twice += (D / e) * tp->base.degree() * different_exponent(*tp);
  }
  if (twice % 2 != 0 || twice < 0) fail(Errc::NonIntegralGenus, "2g = " + std::to_string(twice));
  return twice / 2;
}

// Riemann-Hurwitz step by step. In a Galois tower the places of L_{i-1}
// above P have total degree d_P [L_{i-1}:K] / e(L_{i-1}|P).
inline std::vector<std::int64_t> genus_stepwise(const TowerAnalysis& A) {
  std::vector<std::int64_t> out;
  std::int64_t g = 0;
  const auto ram = A.ramified();
  for (int i = 0; i < A.levels(); ++i) {
    const std::int64_t n = A.desc.steps[static_cast<std::size_t>(i)].n;
    const std::int64_t Dprev = A.alg->total_degree(i);
    std::int64_t twice = 2 * (1 - n + n * g);
    for (const auto* tp : ram) {
      const auto& L = tp->levels[static_cast<std::size_t>(i)];
      if (!L.ramified) continue;
      const std::int64_t eprev = tp->e_upto(i);
      if (Dprev % eprev != 0) fail(Errc::NonIntegralGenus, "degree not divisible by ramification");
      twice += (n / L.e) * (L.e - 1) * as_jump(L) * tp->base.degree() * (Dprev / eprev);
    }
    if (twice % 2 != 0 || twice < 0)
      fail(Errc::NonIntegralGenus, "step " + std::to_string(i + 1) + ": 2g = " + std::to_string(twice));
    g = twice / 2;
    out.push_back(g);
  }
  return out;
}

}  // namespace fftower
