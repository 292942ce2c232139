#pragma once

// Arithmetic in a finite field F_{p^h} given by a user-supplied irreducible
// modulus over F_p. Elements are stored as integer codes: the code of
// a_0 + a_1 t + ... + a_{h-1} t^{h-1} is sum a_i p^i.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "fftower/errors.hpp"

namespace fftower {

struct FieldSpec {
  unsigned p = 2;
  unsigned h = 1;
  std::vector<unsigned> modulus;  // ascending, length h+1, monic

  auto operator<=>(const FieldSpec&) const = default;
};

struct FieldElement {
  std::uint32_t code = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t c) : code(c) {}
  constexpr bool is_zero() const { return code == 0; }
  auto operator<=>(const FieldElement&) const = default;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p used only to vet the modulus.
using IntPoly = std::vector<std::int64_t>;

inline void ip_trim(IntPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::int64_t ip_inv(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = ((a % p) + p) % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline IntPoly ip_mod(IntPoly a, const IntPoly& m, std::int64_t p) {
  ip_trim(a);
  const std::int64_t linv = ip_inv(m.back(), p);
  while (a.size() >= m.size()) {
    const std::int64_t f = a.back() * linv % p;
    const std::size_t sh = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[sh + i] = ((a[sh + i] - f * m[i]) % p + p) % p;
    ip_trim(a);
  }
  return a;
}

inline IntPoly ip_mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& m,
                         std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return ip_mod(std::move(r), m, p);
}

inline IntPoly ip_gcd(IntPoly a, IntPoly b, std::int64_t p) {
  ip_trim(a);
  ip_trim(b);
  while (!b.empty()) {
    IntPoly r = ip_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod m by repeated p-th powering.
inline IntPoly ip_frob_x(const IntPoly& m, std::int64_t p, unsigned k) {
  IntPoly x = ip_mod({0, 1}, m, p);
  for (unsigned i = 0; i < k; ++i) {
    IntPoly r{1}, b = x;
    std::int64_t e = p;
    while (e > 0) {
      if (e & 1) r = ip_mulmod(r, b, m, p);
      b = ip_mulmod(b, b, m, p);
      e >>= 1;
    }
    x = r;
  }
  return x;
}

// Rabin's irreducibility test.
inline bool ip_irreducible(const IntPoly& m, std::int64_t p) {
  const unsigned n = static_cast<unsigned>(m.size() - 1);
  if (n == 0) return false;
  if (n == 1) return true;
  IntPoly xq = ip_frob_x(m, p, n);
  IntPoly diff = xq;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  if (!ip_mod(diff, m, p).empty()) return false;
  for (auto l : prime_factors(n)) {
    IntPoly y = ip_frob_x(m, p, n / static_cast<unsigned>(l));
    y.resize(std::max<std::size_t>(y.size(), 2), 0);
    y[1] = ((y[1] - 1) % p + p) % p;
    IntPoly g = ip_gcd(m, y, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

class FiniteField {
 public:
  // Interned field lookup; the returned reference lives for the process.
  static const FiniteField& get(const FieldSpec& spec) {
    static std::mutex mu;
    static std::map<FieldSpec, std::unique_ptr<FiniteField>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(spec);
    if (it != registry.end()) return *it->second;
    auto f = std::unique_ptr<FiniteField>(new FiniteField(spec));
    auto& ref = *f;
    registry.emplace(spec, std::move(f));
    return ref;
  }

  static const FiniteField& prime(unsigned p) {
    return get(FieldSpec{p, 1, {0, 1}});
  }

  const FieldSpec& spec() const { return spec_; }
  unsigned p() const { return spec_.p; }
  unsigned h() const { return spec_.h; }
  std::uint32_t q() const { return q_; }

  FieldElement zero() const { return FieldElement(0); }
  FieldElement one() const { return FieldElement(1); }

  FieldElement element(std::uint32_t code) const {
    if (code >= q_) fail(Errc::FieldMismatch, "code " + std::to_string(code) + " outside field of size " + std::to_string(q_));
    return FieldElement(code);
  }

  FieldElement from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(spec_.p);
    if (r < 0) r += spec_.p;
    return FieldElement(static_cast<std::uint32_t>(r));
  }

  FieldElement from_coeffs(const std::vector<std::int64_t>& c) const {
    if (c.size() > spec_.h) fail(Errc::FieldMismatch, "too many coefficients for field element");
    std::uint32_t code = 0, pw = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::int64_t r = c[i] % static_cast<std::int64_t>(spec_.p);
      if (r < 0) r += spec_.p;
      code += static_cast<std::uint32_t>(r) * pw;
      pw *= spec_.p;
    }
    return FieldElement(code);
  }

  std::vector<unsigned> coeffs(FieldElement a) const {
    std::vector<unsigned> out(spec_.h);
    std::uint32_t c = a.code;
    for (unsigned i = 0; i < spec_.h; ++i) {
      out[i] = c % spec_.p;
      c /= spec_.p;
    }
    return out;
  }

  bool in_prime_field(FieldElement a) const { return a.code < spec_.p; }

  FieldElement add(FieldElement a, FieldElement b) const {
    if (spec_.h == 1) return FieldElement((a.code + b.code) % spec_.p);
    std::uint32_t r = 0, pw = 1, x = a.code, y = b.code;
    for (unsigned i = 0; i < spec_.h; ++i) {
      r += ((x % spec_.p + y % spec_.p) % spec_.p) * pw;
      x /= spec_.p;
      y /= spec_.p;
      pw *= spec_.p;
    }
    return FieldElement(r);
  }

  FieldElement neg(FieldElement a) const {
    if (spec_.h == 1) return FieldElement((spec_.p - a.code) % spec_.p);
    std::uint32_t r = 0, pw = 1, x = a.code;
    for (unsigned i = 0; i < spec_.h; ++i) {
      r += ((spec_.p - x % spec_.p) % spec_.p) * pw;
      x /= spec_.p;
      pw *= spec_.p;
    }
    return FieldElement(r);
  }

  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

  FieldElement mul(FieldElement a, FieldElement b) const {
    if (a.code == 0 || b.code == 0) return zero();
    return FieldElement(exp_[log_[a.code] + log_[b.code]]);
  }

  FieldElement inv(FieldElement a) const {
    if (a.code == 0) fail(Errc::DivisionByZero, "inverse of zero");
    return FieldElement(exp_[(q_ - 1 - log_[a.code]) % (q_ - 1)]);
  }

  FieldElement div(FieldElement a, FieldElement b) const {
    if (b.code == 0) fail(Errc::DivisionByZero, "division by zero");
    return mul(a, inv(b));
  }

  FieldElement pow(FieldElement a, std::int64_t e) const {
    if (a.code == 0) {
      if (e == 0) return one();
      if (e < 0) fail(Errc::DivisionByZero, "negative power of zero");
      return zero();
    }
    const std::int64_t m = q_ - 1;
    std::int64_t k = (static_cast<std::int64_t>(log_[a.code]) * (((e % m) + m) % m)) % m;
    return FieldElement(exp_[k]);
  }

  // a^(p^(h-1)) inverts Frobenius.
  FieldElement pth_root(FieldElement a) const {
    std::int64_t e = 1;
    for (unsigned i = 1; i < spec_.h; ++i) e *= spec_.p;
    return pow(a, e);
  }

  // Generator of the multiplicative group used for all root-of-unity choices.
  FieldElement primitive() const { return FieldElement(exp_[1 % std::max<std::uint32_t>(q_ - 1, 1)]); }

  std::uint32_t log(FieldElement a) const {
    if (a.code == 0) fail(Errc::ZeroArgument, "log of zero");
    return log_[a.code];
  }

  bool has_nth_roots_of_unity(std::uint64_t n) const {
    if (n == 0) fail(Errc::ZeroArgument, "order zero");
    if (n % spec_.p == 0) fail(Errc::NotCoprimeToCharacteristic, "n=" + std::to_string(n) + " divisible by p=" + std::to_string(spec_.p));
    return (q_ - 1) % n == 0;
  }

  // Canonical primitive n-th root of unity: g^((q-1)/n) for the table generator g.
  FieldElement root_of_unity(std::uint64_t n) const {
    if (!has_nth_roots_of_unity(n))
      fail(Errc::InvalidFieldSpec, "no primitive " + std::to_string(n) + "-th root of unity in F_" + std::to_string(q_));
    return FieldElement(exp_[(q_ - 1) / n]);
  }

  // Absolute trace to F_p as an integer residue.
  unsigned trace(FieldElement a) const {
    FieldElement s = zero(), x = a;
    for (unsigned i = 0; i < spec_.h; ++i) {
      s = add(s, x);
      x = pow(x, spec_.p);
    }
    return s.code;
  }

 private:
  explicit FiniteField(const FieldSpec& spec) : spec_(spec) {
    if (!detail::is_prime(spec.p)) fail(Errc::InvalidFieldSpec, "p=" + std::to_string(spec.p) + " is not prime");
    if (spec.h < 1) fail(Errc::InvalidFieldSpec, "h must be positive");
    if (spec.modulus.size() != spec.h + 1) fail(Errc::InvalidFieldSpec, "modulus must have h+1 coefficients");
    for (auto c : spec.modulus)
      if (c >= spec.p) fail(Errc::InvalidFieldSpec, "modulus coefficient out of range");
    if (spec.modulus.back() != 1) fail(Errc::InvalidFieldSpec, "modulus must be monic");
    detail::IntPoly m(spec.modulus.begin(), spec.modulus.end());
    if (!detail::ip_irreducible(m, spec.p)) fail(Errc::InvalidFieldSpec, "modulus is reducible");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < spec.h; ++i) {
      q *= spec.p;
      if (q > (1u << 22)) fail(Errc::InvalidFieldSpec, "field too large");
    }
    q_ = static_cast<std::uint32_t>(q);
    build_tables();
  }

  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    detail::IntPoly x, y;
    for (unsigned i = 0; i < spec_.h; ++i) {
      x.push_back(a % spec_.p);
      y.push_back(b % spec_.p);
      a /= spec_.p;
      b /= spec_.p;
    }
    detail::ip_trim(x);
    detail::ip_trim(y);
    detail::IntPoly m(spec_.modulus.begin(), spec_.modulus.end());
    auto r = detail::ip_mulmod(x, y, m, spec_.p);
    std::uint32_t code = 0, pw = 1;
    for (auto c : r) {
      code += static_cast<std::uint32_t>(c) * pw;
      pw *= spec_.p;
    }
    return code;
  }

  void build_tables() {
    const std::uint32_t n = q_ - 1;
    exp_.assign(2 * static_cast<std::size_t>(n) + 1, 0);
    log_.assign(q_, 0);
    if (n == 1) {
      exp_ = {1, 1, 1};
      log_[1] = 0;
      return;
    }
    auto factors = detail::prime_factors(n);
    for (std::uint32_t g = 2; g < q_; ++g) {
      auto powc = [&](std::uint64_t e) {
        std::uint32_t r = 1, b = g;
        while (e > 0) {
          if (e & 1) r = slow_mul(r, b);
          b = slow_mul(b, b);
          e >>= 1;
        }
        return r;
      };
      bool primitive = true;
      for (auto l : factors)
        if (powc(n / l) == 1) { primitive = false; break; }
      if (!primitive) continue;
      std::uint32_t x = 1;
      for (std::uint32_t i = 0; i < n; ++i) {
        exp_[i] = x;
        log_[x] = i;
        x = slow_mul(x, g);
      }
      for (std::uint32_t i = n; i < exp_.size(); ++i) exp_[i] = exp_[i - n];
      return;
    }
    fail(Errc::InvariantViolation, "no primitive element found");
  }

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

// Searches monic moduli in code order for the first irreducible one of degree h.
inline FieldSpec first_irreducible_spec(unsigned p, unsigned h) {
  if (h == 1) return FieldSpec{p, 1, {0, 1}};
  std::uint64_t count = 1;
  for (unsigned i = 0; i < h; ++i) count *= p;
  for (std::uint64_t c = 0; c < count; ++c) {
    std::vector<unsigned> m(h + 1, 0);
    std::uint64_t x = c;
    for (unsigned i = 0; i < h; ++i) {
      m[i] = static_cast<unsigned>(x % p);
      x /= p;
    }
    m[h] = 1;
    detail::IntPoly ip(m.begin(), m.end());
    if (detail::ip_irreducible(ip, p)) return FieldSpec{p, h, m};
  }
  fail(Errc::InvalidFieldSpec, "no irreducible modulus found");
}

}  // namespace fftower
