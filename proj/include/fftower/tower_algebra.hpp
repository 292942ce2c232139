#pragma once

// Elements of a tower L = K(y_1, ..., y_r) over K = k(x), kept in reduced
// monomial form sum_mu a_mu(x) y^mu with 0 <= mu_i < n_i.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fftower/univariate.hpp"

namespace fftower {

enum class StepKind { Kummer, ArtinSchreier };

using Exps = std::vector<int>;

struct AlgebraElement {
  std::map<Exps, RatFun> terms;  // no zero coefficients

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.terms == b.terms; }
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

  // Highest level (1-based) whose generator occurs, 0 for elements of K.
  int top_level() const {
    int top = 0;
    for (const auto& [e, c] : terms)
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) top = std::max(top, static_cast<int>(i) + 1);
    return top;
  }

  bool in_base_field() const { return top_level() == 0; }
};

class TowerAlgebra {
 public:
  TowerAlgebra(const FiniteField& k, std::vector<StepKind> kinds, std::vector<int> degrees,
               std::vector<AlgebraElement> c)
      : k_(&k), kinds_(std::move(kinds)), n_(std::move(degrees)), c_(std::move(c)) {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (const auto& [e, coef] : c_[i].terms) {
        if (e.size() != n_.size()) fail(Errc::InvariantViolation, "exponent vector length mismatch");
        for (std::size_t j = i; j < e.size(); ++j)
          if (e[j] != 0) fail(Errc::InvariantViolation, "c_i may only involve lower generators");
      }
    }
  }

  const FiniteField& field() const { return *k_; }
  int levels() const { return static_cast<int>(n_.size()); }
  int degree(int level) const { return n_[static_cast<std::size_t>(level)]; }
  StepKind kind(int level) const { return kinds_[static_cast<std::size_t>(level)]; }
  const AlgebraElement& relation_rhs(int level) const { return c_[static_cast<std::size_t>(level)]; }
  std::int64_t total_degree(int upto) const {
    std::int64_t d = 1;
    for (int i = 0; i < upto; ++i) d *= n_[static_cast<std::size_t>(i)];
    return d;
  }

  Exps zero_exps() const { return Exps(n_.size(), 0); }

  AlgebraElement zero() const { return {}; }
  AlgebraElement from_ratfun(const RatFun& r) const {
    AlgebraElement a;
    if (!r.is_zero()) a.terms.emplace(zero_exps(), r);
    return a;
  }
  AlgebraElement one() const { return from_ratfun(RatFun::one(*k_)); }
  AlgebraElement monomial(const Exps& e, const RatFun& coef) const {
    AlgebraElement a;
    add_term(a, e, coef);
    return reduce(a);
  }
  AlgebraElement generator(int level) const {
    Exps e = zero_exps();
    e[static_cast<std::size_t>(level)] = 1;
    return monomial(e, RatFun::one(*k_));
  }

  static void add_term(AlgebraElement& a, const Exps& e, const RatFun& coef) {
    if (coef.is_zero()) return;
    auto it = a.terms.find(e);
    if (it == a.terms.end()) {
      a.terms.emplace(e, coef);
      return;
    }
    it->second += coef;
    if (it->second.is_zero()) a.terms.erase(it);
  }

  AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) const {
    AlgebraElement r = a;
    for (const auto& [e, c] : b.terms) add_term(r, e, c);
    return r;
  }

  AlgebraElement neg(const AlgebraElement& a) const {
    AlgebraElement r;
    for (const auto& [e, c] : a.terms) r.terms.emplace(e, -c);
    return r;
  }

  AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) const { return add(a, neg(b)); }

  AlgebraElement scale(const AlgebraElement& a, const RatFun& s) const {
    AlgebraElement r;
    if (s.is_zero()) return r;
    for (const auto& [e, c] : a.terms) r.terms.emplace(e, c * s);
    return r;
  }

  // Reduced form of the monomial y^e (exponents may exceed n_i).
  const AlgebraElement& reduce_monomial(const Exps& e) const {
    auto it = memo_.find(e);
    if (it != memo_.end()) return it->second;
    int top = -1;
    for (int i = levels() - 1; i >= 0; --i)
      if (e[static_cast<std::size_t>(i)] >= n_[static_cast<std::size_t>(i)]) { top = i; break; }
    AlgebraElement r;
    if (top < 0) {
      r.terms.emplace(e, RatFun::one(*k_));
    } else {
      const auto ti = static_cast<std::size_t>(top);
      Exps base = e;
      base[ti] -= n_[ti];
      if (kinds_[ti] == StepKind::ArtinSchreier) {
        // y^p = y + c
        Exps shifted = base;
        shifted[ti] += 1;
        r = reduce_monomial(shifted);
      }
      for (const auto& [ce, cc] : c_[ti].terms) {
        Exps m = base;
        for (std::size_t j = 0; j < m.size(); ++j) m[j] += ce[j];
        for (const auto& [re, rc] : reduce_monomial(m).terms) add_term(r, re, rc * cc);
      }
    }
    return memo_.emplace(e, std::move(r)).first->second;
  }

  AlgebraElement reduce(const AlgebraElement& a) const {
    AlgebraElement r;
    for (const auto& [e, c] : a.terms)
      for (const auto& [re, rc] : reduce_monomial(e).terms) add_term(r, re, rc * c);
    return r;
  }

  bool is_reduced(const AlgebraElement& a) const {
    for (const auto& [e, c] : a.terms) {
      if (e.size() != n_.size()) return false;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] < 0 || e[i] >= n_[i]) return false;
    }
    return true;
  }

  AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const {
    AlgebraElement r;
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        Exps e = ea;
        for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
        const RatFun c = ca * cb;
        for (const auto& [re, rc] : reduce_monomial(e).terms) add_term(r, re, rc * c);
      }
    return r;
  }

  AlgebraElement pow(const AlgebraElement& a, std::uint64_t e) const {
    AlgebraElement r = one(), b = a;
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      e >>= 1;
      if (e) b = mul(b, b);
    }
    return r;
  }

  // phi(a) where phi sends y_i to images[i] and fixes K.
  AlgebraElement substitute(const AlgebraElement& a, const std::vector<AlgebraElement>& images) const {
    std::vector<std::vector<AlgebraElement>> powers(images.size());
    AlgebraElement r;
    for (const auto& [e, c] : a.terms) {
      AlgebraElement t = from_ratfun(c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(one());
        while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(mul(pw.back(), images[i]));
        t = mul(t, pw[static_cast<std::size_t>(e[i])]);
      }
      r = add(r, t);
    }
    return r;
  }

  // Do the images satisfy every defining relation?
  bool respects_relations(const std::vector<AlgebraElement>& images) const {
    for (int i = 0; i < levels(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      AlgebraElement lhs = pow(images[ui], static_cast<std::uint64_t>(n_[ui]));
      if (kinds_[ui] == StepKind::ArtinSchreier) lhs = sub(lhs, images[ui]);
      if (lhs != substitute(c_[ui], images)) return false;
    }
    return true;
  }

  std::size_t basis_size(int upto) const { return static_cast<std::size_t>(total_degree(upto)); }

  std::vector<Exps> monomial_basis(int upto) const {
    std::vector<Exps> out;
    Exps e = zero_exps();
    for (;;) {
      out.push_back(e);
      int i = upto - 1;
      while (i >= 0) {
        auto ui = static_cast<std::size_t>(i);
        if (++e[ui] < n_[ui]) break;
        e[ui] = 0;
        --i;
      }
      if (i < 0) break;
    }
    return out;
  }

  // N_{L_upto / K}(a) as the determinant of multiplication by a.
  RatFun norm(const AlgebraElement& a, int upto) const {
    if (a.is_zero()) return RatFun(*k_);
    auto basis = monomial_basis(upto);
    const std::size_t D = basis.size();
    std::map<Exps, std::size_t> index;
    for (std::size_t i = 0; i < D; ++i) index[basis[i]] = i;
    std::vector<std::vector<RatFun>> M(D, std::vector<RatFun>(D, RatFun(*k_)));
    for (std::size_t j = 0; j < D; ++j) {
      AlgebraElement img = mul(a, monomial(basis[j], RatFun::one(*k_)));
      for (const auto& [e, c] : img.terms) {
        auto it = index.find(e);
        if (it == index.end()) fail(Errc::InvariantViolation, "element does not lie in the requested level");
        M[it->second][j] = c;
      }
    }
    RatFun det = RatFun::one(*k_);
    for (std::size_t c = 0; c < D; ++c) {
      std::size_t piv = c;
      while (piv < D && M[piv][c].is_zero()) ++piv;
      if (piv == D) return RatFun(*k_);
      if (piv != c) {
        std::swap(M[piv], M[c]);
        det = -det;
      }
      det *= M[c][c];
      const RatFun inv = M[c][c].inverse();
      for (std::size_t r = c + 1; r < D; ++r) {
        if (M[r][c].is_zero()) continue;
        const RatFun f = M[r][c] * inv;
        for (std::size_t j = c; j < D; ++j) M[r][j] -= f * M[c][j];
      }
    }
    return det;
  }

 private:
  const FiniteField* k_;
  std::vector<StepKind> kinds_;
  std::vector<int> n_;
  std::vector<AlgebraElement> c_;
  mutable std::map<Exps, AlgebraElement> memo_;
};

// Local data of one step at the representative place above a place of K.
struct LevelData {
  StepKind kind = StepKind::Kummer;
  int degree = 1;
  std::int64_t vc = 0;  // v(c_i) at the place of L_{i-1}
  std::int64_t vy = 0;  // v(y_i) at the place of L_i
  std::int64_t e = 1;   // ramification index of the step
  bool ramified = false;
  bool representative_choice = false;  // AS, v(c) > 0: the place with v(y) = 0 is tracked
  std::optional<std::int64_t> inertia;   // residue degree of the step, if determined
};

struct TrackedPlace {
  Place base;
  std::vector<LevelData> levels;

  // Ramification index of the place of L_upto over base.
  std::int64_t e_upto(int upto) const {
    std::int64_t e = 1;
    for (int i = 0; i < upto; ++i) e *= levels[static_cast<std::size_t>(i)].e;
    return e;
  }
  // e(P | p_i) for the place p_i of L_i below the place of L_upto.
  std::int64_t e_between(int from, int upto) const {
    std::int64_t e = 1;
    for (int i = from; i < upto; ++i) e *= levels[static_cast<std::size_t>(i)].e;
    return e;
  }
  // Valuation of y_level (0-based) normalized at L_upto.
  std::int64_t vy_at(int level, int upto) const {
    return levels[static_cast<std::size_t>(level)].vy * e_between(level + 1, upto);
  }
};

struct ValuationResult {
  std::int64_t value = 0;
  bool certified = true;
  std::string note;
};

// Minimum of term valuations at the representative place of L_upto. Ties are
// only certified when the competing terms differ solely at inert levels.
inline ValuationResult valuation_at(const AlgebraElement& a, const TrackedPlace& tp, int upto) {
  if (a.is_zero()) fail(Errc::ZeroArgument, "valuation of zero");
  const std::int64_t eK = tp.e_upto(upto);
  std::optional<std::int64_t> best;
  std::vector<const Exps*> argmin;
  for (const auto& [e, c] : a.terms) {
    std::int64_t v = eK * valuation(c, tp.base);
    for (int j = 0; j < upto; ++j)
      if (e[static_cast<std::size_t>(j)] != 0) v += e[static_cast<std::size_t>(j)] * tp.vy_at(j, upto);
    for (std::size_t j = static_cast<std::size_t>(upto); j < e.size(); ++j)
      if (e[j] != 0) fail(Errc::InvariantViolation, "valuation: element above requested level");
    if (!best || v < *best) {
      best = v;
      argmin.assign(1, &e);
    } else if (v == *best) {
      argmin.push_back(&e);
    }
  }
  ValuationResult res{*best, true, {}};
  for (std::size_t s = 1; s < argmin.size() && res.certified; ++s) {
    for (int j = 0; j < upto; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if ((*argmin[0])[uj] == (*argmin[s])[uj]) continue;
      const auto& L = tp.levels[uj];
      // inert step: powers of the generator stay independent in the residue field
      if (!L.ramified && L.inertia && *L.inertia == L.degree) continue;
      res.certified = false;
      res.note = "tie between terms differing at level " + std::to_string(j + 1);
      break;
    }
  }
  return res;
}

}  // namespace fftower
