#pragma once

#include <initializer_list>
#include <vector>

#include "fftower/tower.hpp"

namespace testing_helpers {

using namespace fftower;

inline const FiniteField& Fp(unsigned p) { return FiniteField::prime(p); }
inline const FiniteField& Fq(unsigned p, unsigned h) { return FiniteField::get(first_irreducible_spec(p, h)); }

// Polynomial from ascending integer coefficients (prime field embedding).
inline Poly P(const FiniteField& k, std::initializer_list<std::int64_t> c) {
  std::vector<FieldElement> v;
  for (auto x : c) v.push_back(k.from_int(x));
  return Poly(k, v);
}

inline Poly X(const FiniteField& k) { return Poly::x(k); }
inline Poly lin(const FiniteField& k, std::int64_t a) { return Poly::linear(k, k.from_int(a)); }

inline Place place(const Poly& f) { return Place::finite(f); }

inline AlgebraElement base_element(const RatFun& r, int levels) {
  AlgebraElement a;
  a.terms.emplace(Exps(static_cast<std::size_t>(levels), 0), r);
  return a;
}

inline AlgebraElement term(const RatFun& r, Exps e) {
  AlgebraElement a;
  a.terms.emplace(std::move(e), r);
  return a;
}

inline AlgebraElement plus(AlgebraElement a, const AlgebraElement& b) {
  for (const auto& [e, c] : b.terms) TowerAlgebra::add_term(a, e, c);
  return a;
}

struct TowerBuilder {
  FieldSpec field;
  std::vector<StepSpec> steps;
  int levels;

  TowerBuilder(const FiniteField& k, int r) : field(k.spec()), levels(r) {}

  TowerBuilder& kummer(int n, const RatFun& c) {
    steps.push_back({StepKind::Kummer, n, base_element(c, levels)});
    return *this;
  }
  TowerBuilder& as(const RatFun& c) {
    steps.push_back({StepKind::ArtinSchreier, static_cast<int>(field.p), base_element(c, levels)});
    return *this;
  }
  TowerBuilder& kummer(int n, const AlgebraElement& c) {
    steps.push_back({StepKind::Kummer, n, c});
    return *this;
  }
  TowerBuilder& as(const AlgebraElement& c) {
    steps.push_back({StepKind::ArtinSchreier, static_cast<int>(field.p), c});
    return *this;
  }
  TowerDescriptor build() const {
    TowerDescriptor d;
    d.field = field;
    d.steps = steps;
    return d;
  }
};

}  // namespace testing_helpers
