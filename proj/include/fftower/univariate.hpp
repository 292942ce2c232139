#pragma once

// Polynomials and rational functions over a finite field, factorization,
// valuations at places of k(x) and constructive weak approximation.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fftower/finite_field.hpp"

namespace fftower {

class Poly {
 public:
  Poly() = default;
  explicit Poly(const FiniteField& k) : k_(&k) {}
  Poly(const FiniteField& k, std::vector<FieldElement> c) : k_(&k), c_(std::move(c)) { trim(); }

  static Poly constant(const FiniteField& k, FieldElement a) { return Poly(k, {a}); }
  static Poly one(const FiniteField& k) { return constant(k, k.one()); }
  static Poly x(const FiniteField& k) { return Poly(k, {k.zero(), k.one()}); }
  static Poly monomial(const FiniteField& k, FieldElement a, int d) {
    std::vector<FieldElement> c(static_cast<std::size_t>(d) + 1, k.zero());
    c[static_cast<std::size_t>(d)] = a;
    return Poly(k, std::move(c));
  }
  // x - a
  static Poly linear(const FiniteField& k, FieldElement a) { return Poly(k, {k.neg(a), k.one()}); }

  const FiniteField& field() const { return *k_; }
  bool has_field() const { return k_ != nullptr; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == k_->one(); }
  bool is_monic() const { return !c_.empty() && c_.back() == k_->one(); }
  FieldElement coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : k_->zero();
  }
  FieldElement lead() const { return c_.empty() ? k_->zero() : c_.back(); }
  const std::vector<FieldElement>& coeffs() const { return c_; }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(k_->inv(lead()));
  }

  Poly scaled(FieldElement a) const {
    std::vector<FieldElement> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = k_->mul(c_[i], a);
    return Poly(*k_, std::move(r));
  }

  Poly shifted(int d) const {  // multiply by x^d
    if (is_zero()) return *this;
    std::vector<FieldElement> r(static_cast<std::size_t>(d), k_->zero());
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(*k_, std::move(r));
  }

  Poly derivative() const {
    std::vector<FieldElement> r;
    for (std::size_t i = 1; i < c_.size(); ++i)
      r.push_back(k_->mul(c_[i], k_->from_int(static_cast<std::int64_t>(i))));
    return Poly(*k_, std::move(r));
  }

  FieldElement eval(FieldElement a) const {
    FieldElement r = k_->zero();
    for (std::size_t i = c_.size(); i-- > 0;) r = k_->add(k_->mul(r, a), c_[i]);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check_same(a, b);
    const auto& k = *a.k_;
    std::vector<FieldElement> r(std::max(a.c_.size(), b.c_.size()), k.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = k.add(r[i], b.c_[i]);
    return Poly(k, std::move(r));
  }

  friend Poly operator-(const Poly& a) {
    std::vector<FieldElement> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.k_->neg(a.c_[i]);
    return Poly(*a.k_, std::move(r));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_same(a, b);
    const auto& k = *a.k_;
    if (a.is_zero() || b.is_zero()) return Poly(k);
    std::vector<FieldElement> r(a.c_.size() + b.c_.size() - 1, k.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] = k.add(r[i + j], k.mul(a.c_[i], b.c_[j]));
    }
    return Poly(k, std::move(r));
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    check_same(a, b);
    const auto& k = *a.k_;
    if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(k), a};
    std::vector<FieldElement> r = a.c_;
    std::vector<FieldElement> qt(a.c_.size() - b.c_.size() + 1, k.zero());
    const FieldElement linv = k.inv(b.lead());
    for (std::size_t i = qt.size(); i-- > 0;) {
      const FieldElement f = k.mul(r[i + b.c_.size() - 1], linv);
      qt[i] = f;
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] = k.sub(r[i + j], k.mul(f, b.c_[j]));
    }
    r.resize(b.c_.size() - 1);
    return {Poly(k, std::move(qt)), Poly(k, std::move(r))};
  }

  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.c_ == b.c_ && (a.c_.empty() || a.k_ == b.k_);
  }

  // Canonical order: degree first, then coefficient codes from the top down.
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = a.c_.size(); i-- > 0;)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  Poly pow(std::uint64_t e) const {
    Poly r = one(*k_), b = *this;
    while (e > 0) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  Poly powmod(std::uint64_t e, const Poly& m) const {
    Poly r = one(*k_) % m, b = *this % m;
    while (e > 0) {
      if (e & 1) r = (r * b) % m;
      e >>= 1;
      if (e) b = (b * b) % m;
    }
    return r;
  }

  // Coefficient-wise p-th root of a polynomial in x^p.
  Poly pth_root() const {
    const unsigned p = k_->p();
    std::vector<FieldElement> r;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i % p == 0) r.push_back(k_->pth_root(c_[i]));
      else if (!c_[i].is_zero()) fail(Errc::InvariantViolation, "pth_root of non-p-th power");
    }
    return Poly(*k_, std::move(r));
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    if (k_) {
      mix(k_->p());
      mix(k_->h());
      for (auto m : k_->spec().modulus) mix(m);
    }
    for (auto c : c_) mix(c.code + 1);
    return h;
  }

 private:
  static void check_same(const Poly& a, const Poly& b) {
    if (a.k_ != b.k_) fail(Errc::FieldMismatch, "polynomials over different fields");
  }
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  const FiniteField* k_ = nullptr;
  std::vector<FieldElement> c_;
};

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Returns (g, s, t) with s*a + t*b = g monic.
inline std::tuple<Poly, Poly, Poly> ext_gcd(const Poly& a, const Poly& b) {
  const auto& k = a.field();
  Poly r0 = a, r1 = b, s0 = Poly::one(k), s1(k), t0(k), t1 = Poly::one(k);
  while (!r1.is_zero()) {
    auto [qt, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - qt * s1, t2 = t0 - qt * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const FieldElement li = k.inv(r0.lead());
  return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

inline Poly inverse_mod(const Poly& a, const Poly& m) {
  auto [g, s, t] = ext_gcd(a % m, m);
  if (!g.is_one()) fail(Errc::DivisionByZero, "polynomial not invertible modulo");
  return s % m;
}

// Chinese remaindering: the unique f with deg f < sum deg m_i, f = r_i mod m_i.
inline Poly crt(const std::vector<Poly>& residues, const std::vector<Poly>& moduli, const FiniteField& k) {
  Poly f(k), M = Poly::one(k);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    // f + M*u = r_i mod m_i
    Poly diff = (residues[i] - f) % moduli[i];
    Poly u = (diff * inverse_mod(M, moduli[i])) % moduli[i];
    f = f + M * u;
    M = M * moduli[i];
  }
  return f;
}

// a^q mod m
inline Poly frobenius_mod(const Poly& a, const Poly& m) { return a.powmod(a.field().q(), m); }

struct Factorization {
  FieldElement unit;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, canonical order

  Poly product(const FiniteField& k) const {
    Poly r = Poly::constant(k, unit);
    for (const auto& [f, e] : factors) r *= f.pow(static_cast<std::uint64_t>(e));
    return r;
  }
};

namespace detail {

inline std::vector<std::pair<Poly, int>> square_free(const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  const auto& k = f.field();
  if (f.degree() < 1) return out;
  Poly c = gcd(f, f.derivative());
  Poly w = f.monic() / c;
  int i = 1;
  while (!w.is_one()) {
    Poly y = gcd(w, c);
    Poly fac = w / y;
    if (!fac.is_one()) out.emplace_back(fac.monic(), i);
    w = y;
    c = c / y;
    ++i;
  }
  if (!c.is_one() && c.degree() > 0) {
    Poly r = c.monic().pth_root();
    for (auto& [g, m] : square_free(r)) out.emplace_back(g, m * static_cast<int>(k.p()));
  }
  return out;
}

inline std::vector<std::pair<Poly, int>> distinct_degree(Poly f) {
  std::vector<std::pair<Poly, int>> out;
  const auto& k = f.field();
  const Poly X = Poly::x(k);
  Poly h = X % f;
  int i = 1;
  while (f.degree() >= 2 * i) {
    h = frobenius_mod(h, f);
    Poly g = gcd(h - X, f);
    if (!g.is_one()) {
      out.emplace_back(g, i);
      f = f / g;
      h = h % f;
    }
    ++i;
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
  return out;
}

inline void equal_degree(const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  const auto& k = f.field();
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  std::uniform_int_distribution<std::uint32_t> dist(0, k.q() - 1);
  for (;;) {
    std::vector<FieldElement> c(static_cast<std::size_t>(f.degree()));
    for (auto& e : c) e = FieldElement(dist(rng));
    Poly a(k, std::move(c));
    if (a.degree() < 1) continue;
    Poly b(k);
    if (k.p() == 2) {
      Poly t = a % f, s = t;
      for (unsigned j = 1; j < k.h() * static_cast<unsigned>(d); ++j) {
        t = (t * t) % f;
        s += t;
      }
      b = s;
    } else {
      Poly prod = Poly::one(k), t = a % f;
      for (int j = 0; j < d; ++j) {
        prod = (prod * t) % f;
        if (j + 1 < d) t = frobenius_mod(t, f);
      }
      b = prod.powmod((k.q() - 1) / 2, f) - Poly::one(k);
    }
    Poly g = gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace detail

// Deterministic factorization; the PRNG is seeded from a hash of the input.
inline Factorization factorize(const Poly& f, std::uint64_t seed = 0) {
  if (f.is_zero()) fail(Errc::ZeroArgument, "factorize zero polynomial");
  const auto& k = f.field();
  Factorization res{f.lead(), {}};
  std::mt19937_64 rng(f.hash() ^ (seed * 0x9e3779b97f4a7c15ull));
  for (auto& [sf, mult] : detail::square_free(f)) {
    for (auto& [g, d] : detail::distinct_degree(sf)) {
      std::vector<Poly> parts;
      detail::equal_degree(g, d, rng, parts);
      for (auto& p : parts) res.factors.emplace_back(p, mult);
    }
  }
  std::sort(res.factors.begin(), res.factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // merge equal factors (cannot happen for square-free parts, kept defensive)
  std::vector<std::pair<Poly, int>> merged;
  for (auto& fe : res.factors) {
    if (!merged.empty() && merged.back().first == fe.first) merged.back().second += fe.second;
    else merged.push_back(fe);
  }
  res.factors = std::move(merged);
  (void)k;
  return res;
}

inline bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  auto fac = factorize(f);
  return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

class RatFun {
 public:
  RatFun() = default;
  explicit RatFun(const FiniteField& k) : num_(k), den_(Poly::one(k)) {}
  RatFun(const Poly& p) : num_(p), den_(Poly::one(p.field())) {}  // NOLINT implicit
  RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFun constant(const FiniteField& k, FieldElement a) { return RatFun(Poly::constant(k, a)); }
  static RatFun one(const FiniteField& k) { return RatFun(Poly::one(k)); }
  static RatFun x(const FiniteField& k) { return RatFun(Poly::x(k)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FiniteField& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return den_.is_one() && num_.is_constant(); }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
    Poly g = gcd(a.den_, b.den_);
    Poly ad = a.den_ / g, bd = b.den_ / g;
    return RatFun(a.num_ * bd + b.num_ * ad, ad * b.den_);
  }
  friend RatFun operator-(const RatFun& a) { return RatFun(-a.num_, a.den_, true); }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return RatFun(a.field());
    Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    return RatFun((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1), true);
  }
  RatFun inverse() const {
    if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero rational function");
    return RatFun(den_, num_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inverse(); }
  RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
  RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
  RatFun& operator*=(const RatFun& b) { return *this = *this * b; }

  RatFun scaled(FieldElement a) const { return RatFun(num_.scaled(a), den_, true); }

  RatFun pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    return RatFun(num_.pow(static_cast<std::uint64_t>(e)), den_.pow(static_cast<std::uint64_t>(e)), true);
  }

  friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const RatFun& a, const RatFun& b) {
    if (a.num_ < b.num_) return true;
    if (b.num_ < a.num_) return false;
    return a.den_ < b.den_;
  }

 private:
  RatFun(Poly num, Poly den, bool /*already reduced*/) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.is_zero()) den_ = Poly::one(num_.field());
  }

  void normalize() {
    if (den_.is_zero()) fail(Errc::DivisionByZero, "rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::one(den_.field());
      return;
    }
    Poly g = gcd(num_, den_);
    num_ = num_ / g;
    den_ = den_ / g;
    const FieldElement l = den_.lead();
    if (l != den_.field().one()) {
      const FieldElement li = den_.field().inv(l);
      num_ = num_.scaled(li);
      den_ = den_.scaled(li);
    }
  }

  Poly num_;
  Poly den_;
};

// A place of k(x): a monic irreducible polynomial or the place at infinity.
struct Place {
  bool infinite = true;
  Poly poly;  // empty for infinity

  static Place infinity() { return Place{}; }
  static Place finite(const Poly& pi) {
    if (pi.degree() < 1 || !pi.is_monic() || !is_irreducible(pi))
      fail(Errc::NotIrreducible, "place polynomial must be monic irreducible");
    return Place{false, pi};
  }
  // Skips the irreducibility test for polynomials known to be irreducible.
  static Place trusted(const Poly& pi) { return Place{false, pi}; }

  int degree() const { return infinite ? 1 : poly.degree(); }
  bool is_infinite() const { return infinite; }

  friend bool operator==(const Place& a, const Place& b) {
    return a.infinite == b.infinite && (a.infinite || a.poly == b.poly);
  }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
  // Finite places in canonical polynomial order, infinity last.
  friend bool operator<(const Place& a, const Place& b) {
    if (a.infinite != b.infinite) return b.infinite;
    if (a.infinite) return false;
    return a.poly < b.poly;
  }
};

inline int multiplicity(Poly f, const Poly& pi) {
  int m = 0;
  for (;;) {
    auto [qt, r] = divmod(f, pi);
    if (!r.is_zero()) return m;
    f = std::move(qt);
    ++m;
  }
}

inline std::int64_t valuation(const RatFun& r, const Place& P) {
  if (r.is_zero()) fail(Errc::ZeroArgument, "valuation of zero");
  if (P.infinite) return r.den().degree() - r.num().degree();
  return multiplicity(r.num(), P.poly) - multiplicity(r.den(), P.poly);
}

inline std::int64_t valuation(const Poly& f, const Place& P) { return valuation(RatFun(f), P); }

// Places where r has a zero or a pole (finite ones), in canonical order.
inline std::vector<Place> support(const RatFun& r, std::uint64_t seed = 0) {
  std::vector<Place> out;
  if (r.is_zero()) return out;
  for (const Poly* f : {&r.num(), &r.den()}) {
    if (f->degree() < 1) continue;
    for (auto& [g, e] : factorize(*f, seed).factors) out.push_back(Place::trusted(g));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Some f in k(x) with v_P(f) = target for each constraint and v >= 0 at every
// unconstrained finite place. A constraint at infinity may be infeasible.
inline RatFun weak_approximant(const std::vector<std::pair<Place, std::int64_t>>& constraints, const FiniteField& k) {
  RatFun f = RatFun::one(k);
  std::int64_t inf_target = 0;
  bool has_inf = false;
  std::vector<Poly> finite;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& [P, t] = constraints[i];
    for (std::size_t j = 0; j < i; ++j)
      if (constraints[j].first == P) fail(Errc::InvariantViolation, "duplicate place in weak approximation");
    if (P.infinite) {
      has_inf = true;
      inf_target = t;
      continue;
    }
    finite.push_back(P.poly);
    f *= RatFun(P.poly).pow(t);
  }
  if (!has_inf) return f;
  const std::int64_t cur = valuation(f, Place::infinity());
  if (cur < inf_target)
    fail(Errc::WeakApproximationInfeasible,
         "valuation at infinity cannot exceed minus the finite degree sum");
  const std::int64_t D = cur - inf_target;
  if (D == 0) return f;
  // smallest monic polynomial of degree D coprime to all constrained places
  std::vector<std::int64_t> digits(static_cast<std::size_t>(D), 0);
  for (;;) {
    std::vector<FieldElement> c(static_cast<std::size_t>(D) + 1, k.zero());
    for (std::size_t i = 0; i < digits.size(); ++i) c[i] = FieldElement(static_cast<std::uint32_t>(digits[i]));
    c.back() = k.one();
    Poly h(k, c);
    bool ok = true;
    for (const auto& pi : finite)
      if (!gcd(h, pi).is_one()) { ok = false; break; }
    if (ok) return f * RatFun(h);
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == static_cast<std::int64_t>(k.q())) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  fail(Errc::WeakApproximationInfeasible, "no coprime polynomial of required degree");
}

}  // namespace fftower
