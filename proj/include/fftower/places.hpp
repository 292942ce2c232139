#pragma once

// Residue fields of finite places of k(x) and tests inside them.

#include <optional>
#include <string>
#include <vector>

#include "fftower/linalg.hpp"
#include "fftower/univariate.hpp"

namespace fftower {

// F_q[x]/(pi) for a finite place pi; elements are reduced polynomials.
class ResidueField {
 public:
  explicit ResidueField(const Place& P) : k_(&P.poly.field()), m_(P.poly) {
    if (P.infinite) fail(Errc::InfinitePlaceUnsupported, "residue field at infinity is k itself; use a finite chart");
  }

  const FiniteField& base() const { return *k_; }
  const Poly& modulus() const { return m_; }
  int degree() const { return m_.degree(); }
  unsigned prime_degree() const { return k_->h() * static_cast<unsigned>(m_.degree()); }

  // Size q^d, or nullopt when it does not fit into 62 bits.
  std::optional<std::uint64_t> size() const {
    std::uint64_t s = 1;
    for (int i = 0; i < m_.degree(); ++i) {
      if (s > (std::uint64_t{1} << 62) / k_->q()) return std::nullopt;
      s *= k_->q();
    }
    return s;
  }

  Poly reduce(const Poly& a) const { return a % m_; }
  Poly zero() const { return Poly(*k_); }
  Poly one() const { return Poly::one(*k_); }
  Poly add(const Poly& a, const Poly& b) const { return a + b; }
  Poly sub(const Poly& a, const Poly& b) const { return a - b; }
  Poly mul(const Poly& a, const Poly& b) const { return (a * b) % m_; }
  Poly inv(const Poly& a) const { return inverse_mod(a, m_); }
  Poly pow(const Poly& a, std::uint64_t e) const { return a.powmod(e, m_); }

  Poly frobenius(const Poly& a) const { return pow(a, k_->p()); }

  Poly pth_root(const Poly& a) const {
    Poly r = reduce(a);
    for (unsigned i = 1; i < prime_degree(); ++i) r = frobenius(r);
    return r;
  }

  unsigned trace_to_prime(const Poly& a) const {
    Poly s = zero(), x = reduce(a);
    for (unsigned i = 0; i < prime_degree(); ++i) {
      s = s + x;
      x = frobenius(x);
    }
    if (s.degree() > 0 || !k_->in_prime_field(s.coeff(0)))
      fail(Errc::InvariantViolation, "trace not in prime field");
    return s.coeff(0).code;
  }

  // Order of a in F^*/(F^*)^n for n dividing q^d - 1.
  std::uint64_t power_class_order(const Poly& a, std::uint64_t n) const {
    auto Q = size();
    if (!Q) fail(Errc::SplittingUndetermined, "residue field too large");
    if ((*Q - 1) % n != 0) fail(Errc::InvariantViolation, "n does not divide the unit group order");
    Poly b = pow(a, (*Q - 1) / n);
    std::uint64_t ord = 1;
    Poly c = b;
    while (!c.is_one()) {
      c = mul(c, b);
      ++ord;
      if (ord > n) fail(Errc::InvariantViolation, "power class order exceeds n");
    }
    return ord;
  }

  bool is_nth_power(const Poly& a, std::uint64_t n) const {
    if (reduce(a).is_zero()) return true;
    return power_class_order(a, n) == 1;
  }

  // Coordinates over F_p: coefficient j of x^j contributes h digits.
  std::vector<FieldElement> to_prime_coords(const Poly& a) const {
    const auto& Fp = FiniteField::prime(k_->p());
    std::vector<FieldElement> v;
    Poly r = reduce(a);
    for (int j = 0; j < degree(); ++j)
      for (auto d : k_->coeffs(r.coeff(j))) v.push_back(Fp.element(d));
    return v;
  }

  Poly from_prime_coords(const std::vector<FieldElement>& v) const {
    std::vector<FieldElement> c;
    for (int j = 0; j < degree(); ++j) {
      std::vector<std::int64_t> digits;
      for (unsigned i = 0; i < k_->h(); ++i) digits.push_back(v[static_cast<std::size_t>(j) * k_->h() + i].code);
      c.push_back(k_->from_coeffs(digits));
    }
    return Poly(*k_, std::move(c));
  }

  // Solves w^p - w = a by F_p-linear algebra.
  std::optional<Poly> artin_schreier_root(const Poly& a) const {
    const auto& Fp = FiniteField::prime(k_->p());
    const std::size_t N = prime_degree();
    Matrix M = zero_matrix(Fp, N, N);
    std::size_t col = 0;
    for (int j = 0; j < degree(); ++j) {
      for (unsigned i = 0; i < k_->h(); ++i, ++col) {
        std::uint32_t code = 1;
        for (unsigned t = 0; t < i; ++t) code *= k_->p();
        Poly b = Poly::monomial(*k_, FieldElement(code), j);
        auto img = to_prime_coords(sub(frobenius(b), b));
        for (std::size_t r = 0; r < N; ++r) M[r][col] = img[r];
      }
    }
    auto sol = mat_solve(Fp, M, to_prime_coords(a));
    if (!sol) return std::nullopt;
    return from_prime_coords(*sol);
  }

  // Every element, for exhaustive searches on tiny fields.
  std::vector<Poly> elements() const {
    auto Q = size();
    if (!Q || *Q > (1u << 20)) fail(Errc::SplittingUndetermined, "residue field too large to enumerate");
    std::vector<Poly> out;
    for (std::uint64_t c = 0; c < *Q; ++c) {
      std::vector<FieldElement> coeffs;
      std::uint64_t x = c;
      for (int j = 0; j < degree(); ++j) {
        coeffs.push_back(FieldElement(static_cast<std::uint32_t>(x % k_->q())));
        x /= k_->q();
      }
      out.emplace_back(*k_, std::move(coeffs));
    }
    return out;
  }

 private:
  const FiniteField* k_;
  Poly m_;
};

// Image of r in the residue field of a finite place.
inline Poly residue(const RatFun& r, const Place& P) {
  if (P.infinite) fail(Errc::InfinitePlaceUnsupported, "residue at infinity");
  if (r.is_zero()) return Poly(r.field());
  if (valuation(r, P) < 0) fail(Errc::NegativeValuation, "residue of an element with a pole");
  return (r.num() * inverse_mod(r.den(), P.poly)) % P.poly;
}

struct ImageTest {
  bool in_image = false;
  std::optional<Poly> witness;
};

// Is a of the form w^p - w in the residue field? Returns a witness when it is.
inline ImageTest artin_schreier_image_test(const Poly& a, const ResidueField& F) {
  auto w = F.artin_schreier_root(a);
  ImageTest t;
  t.in_image = w.has_value();
  t.witness = w;
  if (w) FFTOWER_ENSURE(F.reduce(F.sub(F.frobenius(*w), *w)) == F.reduce(a), "AS witness check");
  return t;
}

}  // namespace fftower
