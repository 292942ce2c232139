#pragma once

// Galois action on the basis of holomorphic differentials, the cyclic
// decomposition into modules Delta, and submodules generated by one basis element.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fftower/boseck.hpp"
#include "fftower/linalg.hpp"

namespace fftower {

// Exponents (h_1, ..., h_r): the product of sigma_i^{h_i}.
using GroupElement = std::vector<std::int64_t>;

struct GaloisGroup {
  std::vector<std::vector<AlgebraElement>> generators;  // images of (y_1..y_r) under sigma_i
  std::vector<std::int64_t> orders;
};

namespace detail {

inline std::vector<AlgebraElement> compose_images(const TowerAlgebra& alg, const std::vector<AlgebraElement>& first,
                                                  const std::vector<AlgebraElement>& then) {
  std::vector<AlgebraElement> out;
  for (const auto& f : first) out.push_back(alg.substitute(f, then));
  return out;
}

inline std::vector<AlgebraElement> identity_images(const TowerAlgebra& alg) {
  std::vector<AlgebraElement> out;
  for (int j = 0; j < alg.levels(); ++j) out.push_back(alg.generator(j));
  return out;
}

}  // namespace detail

// Generators of Gal(L/K), one per step, checked to be commuting automorphisms of
// the right order.
inline GaloisGroup galois_group(const TowerAnalysis& A) {
  const auto& alg = *A.alg;
  const auto& k = alg.field();
  const int r = A.levels();
  GaloisGroup G;
  const auto id = detail::identity_images(alg);
  for (int i = 0; i < r; ++i) {
    const auto& s = A.desc.steps[static_cast<std::size_t>(i)];
    std::vector<AlgebraElement> img;
    auto it = A.desc.options.actions.find(i + 1);
    if (it != A.desc.options.actions.end()) {
      img = it->second;
      if (static_cast<int>(img.size()) != r)
        fail(Errc::UnsupportedAction, "step " + std::to_string(i + 1) + ": action needs one image per generator");
      for (auto& a : img) a = alg.reduce(a);
    } else {
      img = id;
      if (s.kind == StepKind::Kummer) {
        if ((k.q() - 1) % static_cast<std::uint32_t>(s.n) != 0)
          fail(Errc::UnsupportedAction, "step " + std::to_string(i + 1) + ": no primitive roots of unity in k");
        img[static_cast<std::size_t>(i)] = alg.scale(id[static_cast<std::size_t>(i)],
                                                     RatFun::constant(k, k.root_of_unity(static_cast<std::uint64_t>(s.n))));
      } else {
        img[static_cast<std::size_t>(i)] = alg.add(id[static_cast<std::size_t>(i)], alg.one());
      }
    }
    if (!alg.respects_relations(img))
      fail(Errc::UnsupportedAction, "generator of step " + std::to_string(i + 1) + " does not respect the relations");
    // the order is exactly n_i: identity after n_i steps, and a primitive root moves y_i before that
    auto cur = img;
    for (int m = 1; m < s.n; ++m) {
      if (cur == id)
        fail(Errc::UnsupportedAction, "generator of step " + std::to_string(i + 1) + " has order " + std::to_string(m));
      cur = detail::compose_images(alg, cur, img);
    }
    if (cur != id) fail(Errc::UnsupportedAction, "generator of step " + std::to_string(i + 1) + " has the wrong order");
    G.generators.push_back(std::move(img));
    G.orders.push_back(s.n);
  }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      const auto& a = G.generators[static_cast<std::size_t>(i)];
      const auto& b = G.generators[static_cast<std::size_t>(j)];
      if (detail::compose_images(alg, a, b) != detail::compose_images(alg, b, a))
        fail(Errc::UnsupportedAction,
             "generators of steps " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");
    }
  return G;
}

// Images of the y's under the group element h.
inline std::vector<AlgebraElement> element_images(const TowerAnalysis& A, const GaloisGroup& G, const GroupElement& h) {
  const auto& alg = *A.alg;
  if (h.size() != G.generators.size()) fail(Errc::UnsupportedAction, "group element has the wrong length");
  auto cur = detail::identity_images(alg);
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::int64_t m = h[i] % G.orders[i];
    if (m < 0) m += G.orders[i];
    for (std::int64_t j = 0; j < m; ++j) cur = detail::compose_images(alg, cur, G.generators[i]);
  }
  return cur;
}

inline AlgebraElement apply_automorphism(const TowerAnalysis& A, const GaloisGroup& G, const GroupElement& h,
                                         const AlgebraElement& a) {
  return A.alg->substitute(a, element_images(A, G, h));
}

// Coordinates of f dx in the basis, for f a K-combination of monomials in the y's.
class BasisCoordinates {
 public:
  explicit BasisCoordinates(const TowerAnalysis& A) : k_(&A.desc.k()), basis_(enumerate_basis(A)) {
    for (const auto& mu : exponent_set(A.desc)) {
      MuInvariants inv = boseck_invariants(A, mu);
      blocks_.emplace(mu, Block{place_product(inv.g, *k_), inv.t, 0});
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i].nu == 0) blocks_.at(basis_[i].mu).first = i;
    }
  }

  const std::vector<BasisElement>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }

  std::vector<FieldElement> coordinates(const AlgebraElement& f) const {
    std::vector<FieldElement> v(basis_.size(), k_->zero());
    for (const auto& [mu, c] : f.terms) {
      auto it = blocks_.find(mu);
      if (it == blocks_.end()) fail(Errc::ClosureFailure, "image involves the excluded exponent " + show(mu));
      const Block& b = it->second;
      const RatFun poly = c * RatFun(b.g);
      if (!poly.is_polynomial() || poly.num().degree() > b.t - 2)
        fail(Errc::ClosureFailure, "coefficient of y^" + show(mu) + " is not x-polynomial of degree <= t-2");
      for (int d = 0; d <= poly.num().degree(); ++d) v[b.first + static_cast<std::size_t>(d)] = poly.num().coeff(d);
    }
    return v;
  }

  // The function in front of dx for the basis element at position i.
  AlgebraElement function(const TowerAlgebra& alg, std::size_t i) const {
    const auto& e = basis_[i];
    const Block& b = blocks_.at(e.mu);
    return alg.monomial(e.mu, RatFun(Poly::monomial(*k_, k_->one(), static_cast<int>(e.nu)), b.g));
  }

  static std::string show(const Exps& mu) {
    std::string s = "(";
    for (std::size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
    return s + ")";
  }

 private:
  struct Block {
    Poly g;
    std::int64_t t = 0;
    std::size_t first = 0;
  };
  const FiniteField* k_;
  std::vector<BasisElement> basis_;
  std::map<Exps, Block> blocks_;
};

// Column j holds the image of basis element j.
inline Matrix action_matrix(const TowerAnalysis& A, const GaloisGroup& G, const BasisCoordinates& B,
                            const GroupElement& h) {
  const auto& k = A.desc.k();
  const auto images = element_images(A, G, h);
  Matrix M = zero_matrix(k, B.size(), B.size());
  for (std::size_t j = 0; j < B.size(); ++j) {
    const auto col = B.coordinates(A.alg->substitute(B.function(*A.alg, j), images));
    for (std::size_t i = 0; i < B.size(); ++i) M[i][j] = col[i];
  }
  return M;
}

inline Matrix action_matrix(const TowerAnalysis& A, const GroupElement& h) {
  return action_matrix(A, galois_group(A), BasisCoordinates(A), h);
}

struct NilpotencyReport {
  bool ok = true;
  std::string witness;
};

// (sigma_i - 1)^{mu_i + 1} y^mu = 0 at every Artin-Schreier level i, with
// (sigma_i - 1)^{mu_i} y^mu nonzero, and equal to mu_i! y^{mu, mu_i = 0} when
// sigma_i fixes the other generators.
inline NilpotencyReport nilpotency_check(const TowerAnalysis& A, const GaloisGroup& G) {
  const auto& alg = *A.alg;
  const auto& k = alg.field();
  const int r = A.levels();
  const auto id = detail::identity_images(alg);
  for (int i = 0; i < r; ++i) {
    if (alg.kind(i) != StepKind::ArtinSchreier) continue;
    const auto ui = static_cast<std::size_t>(i);
    const auto& sigma = G.generators[ui];
    bool plain = true;
    for (int j = 0; j < r; ++j)
      if (j != i && sigma[static_cast<std::size_t>(j)] != id[static_cast<std::size_t>(j)]) plain = false;
    for (const auto& mu : alg.monomial_basis(r)) {
      AlgebraElement z = alg.monomial(mu, RatFun::one(k));
      const std::string where = "level " + std::to_string(i + 1) + ", z = y^" + BasisCoordinates::show(mu);
      for (int m = 0; m < mu[ui]; ++m) z = alg.sub(alg.substitute(z, sigma), z);
      if (z.is_zero()) return {false, where + ": vanishes after " + std::to_string(mu[ui]) + " steps"};
      if (plain) {
        Exps lower = mu;
        lower[ui] = 0;
        FieldElement fact = k.one();
        for (int m = 2; m <= mu[ui]; ++m) fact = k.mul(fact, k.from_int(m));
        if (z != alg.monomial(lower, RatFun::constant(k, fact))) return {false, where + ": unexpected leading term"};
      }
      z = alg.sub(alg.substitute(z, sigma), z);
      if (!z.is_zero()) return {false, where + ": survives " + std::to_string(mu[ui] + 1) + " steps"};
    }
  }
  return {};
}

// Vacuous without Artin-Schreier levels, so the group is only built when needed.
inline NilpotencyReport nilpotency_check(const TowerAnalysis& A) {
  for (int i = 0; i < A.levels(); ++i)
    if (A.alg->kind(i) == StepKind::ArtinSchreier) return nilpotency_check(A, galois_group(A));
  return {};
}

struct DeltaModule {
  std::int64_t mu_p = 0;
  std::vector<std::int64_t> mu_tame;
  std::int64_t dim = 0;
};

struct DecompositionEntry {
  DeltaModule module;
  std::int64_t multiplicity = 0;
};

struct ExponentData {
  Exps mu;
  std::int64_t t = 0;
  bool delta = false;  // t = 0
};

struct DecompositionReport {
  std::vector<DecompositionEntry> entries;
  std::int64_t p_exponent = 0;  // t with |G| = p^t n
  std::int64_t tame_order = 1;
  std::int64_t t_unr = 0;
  std::int64_t base_genus = 0;
  std::int64_t genus = 0;
  std::vector<ExponentData> exponents;
};

namespace detail {

inline std::int64_t jordan_blocks(const FiniteField& k, const Matrix& a, std::int64_t size) {
  const std::size_t n = a.size();
  const Matrix N = mat_sub(k, a, identity_matrix(k, n));
  auto rank_pow = [&](std::int64_t e) -> std::int64_t {
    if (e <= 0) return static_cast<std::int64_t>(n);
    Matrix m = N;
    for (std::int64_t i = 1; i < e; ++i) m = mat_mul(k, m, N);
    return static_cast<std::int64_t>(mat_rank(k, m));
  };
  return rank_pow(size - 1) - 2 * rank_pow(size) + rank_pow(size + 1);
}

}  // namespace detail

// Multiplicities of the indecomposable modules for cyclic G of order p^t n with
// t <= 1, checked against the Jordan form of the action and against the genus.
inline DecompositionReport cyclic_decomposition(const TowerAnalysis& A) {
  const auto& k = A.desc.k();
  const int r = A.levels();
  const auto p = static_cast<std::int64_t>(k.p());
  int as_level = -1, ku_level = -1;
  for (int i = 0; i < r; ++i) {
    int& slot = A.desc.steps[static_cast<std::size_t>(i)].kind == StepKind::Kummer ? ku_level : as_level;
    if (slot >= 0) fail(Errc::NotCyclic, "more than one step of the same kind");
    slot = i;
  }
  if (r == 0) fail(Errc::NotCyclic, "empty tower");

  DecompositionReport rep;
  rep.p_exponent = as_level >= 0 ? 1 : 0;
  rep.tame_order = ku_level >= 0 ? A.desc.steps[static_cast<std::size_t>(ku_level)].n : 1;
  if (as_level >= 0) {
    bool ramified = false;
    for (const auto& tp : A.places)
      if (tp.levels[static_cast<std::size_t>(as_level)].ramified) ramified = true;
    if (!ramified) rep.t_unr = 1;
  }
  if (rep.t_unr != 0) fail(Errc::NotCyclic, "unramified Artin-Schreier step");
  rep.genus = genus(A);
  const std::int64_t top = as_level >= 0 ? p : 1;  // p^t

  auto exps = [&](std::int64_t a, std::int64_t beta) {
    Exps mu(static_cast<std::size_t>(r), 0);
    if (as_level >= 0) mu[static_cast<std::size_t>(as_level)] = static_cast<int>(a);
    if (ku_level >= 0) mu[static_cast<std::size_t>(ku_level)] = static_cast<int>(beta);
    return mu;
  };
  std::map<std::pair<std::int64_t, std::int64_t>, ExponentData> data;
  for (std::int64_t beta = 0; beta < rep.tame_order; ++beta)
    for (std::int64_t a = 0; a < top; ++a) {
      ExponentData d{exps(a, beta), boseck_invariants(A, exps(a, beta)).t, false};
      d.delta = d.t == 0;
      data[{a, beta}] = d;
      rep.exponents.push_back(d);
    }
  auto tt = [&](std::int64_t a, std::int64_t beta) { return data.at({a, beta}).t; };
  auto dl = [&](std::int64_t a, std::int64_t beta) -> std::int64_t { return data.at({a, beta}).delta ? 1 : 0; };

  // Jordan data of the p-part on each tame character block
  const GaloisGroup G = galois_group(A);
  const BasisCoordinates B(A);
  std::map<std::int64_t, Matrix> unipotent;
  std::map<std::int64_t, std::vector<std::size_t>> block_index;
  for (std::size_t i = 0; i < B.size(); ++i)
    block_index[ku_level >= 0 ? B.basis()[i].mu[static_cast<std::size_t>(ku_level)] : 0].push_back(i);
  if (ku_level >= 0) {
    GroupElement h(static_cast<std::size_t>(r), 0);
    h[static_cast<std::size_t>(ku_level)] = 1;
    const Matrix K = action_matrix(A, G, B, h);
    const FieldElement zeta = k.root_of_unity(static_cast<std::uint64_t>(rep.tame_order));
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j) {
        const auto beta = static_cast<std::uint64_t>(B.basis()[j].mu[static_cast<std::size_t>(ku_level)]);
        const FieldElement want = i == j ? k.pow(zeta, beta) : k.zero();
        if (K[i][j] != want)
          fail(Errc::DecompositionInconsistent, "tame generator is not diagonal by its character");
      }
  }
  Matrix S = identity_matrix(k, B.size());
  if (as_level >= 0) {
    GroupElement h(static_cast<std::size_t>(r), 0);
    h[static_cast<std::size_t>(as_level)] = 1;
    S = action_matrix(A, G, B, h);
  }
  for (const auto& [beta, idx] : block_index) {
    Matrix sub = zero_matrix(k, idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub[i][j] = S[idx[i]][idx[j]];
    unipotent[beta] = std::move(sub);
  }

  std::int64_t total = 0;
  for (std::int64_t beta = 0; beta < rep.tame_order; ++beta)
    for (std::int64_t s = 1; s <= top; ++s) {
      std::int64_t d = 0;
      if (s == top) {
        // t^{(p^t, beta)} is read as t^{(p^t - 1, beta)}
        d = rep.base_genus - 1 + tt(top - 1, beta) + dl(top - 1, beta);
      } else if (s == top - 1) {
        d = beta != 0 ? tt(s - 1, beta) - tt(s, beta) + dl(s - 1, beta) : tt(s - 1, beta) - dl(s - 1, beta) - 1;
      } else {
        d = tt(s - 1, beta) - tt(s, beta) + dl(s - 1, beta) - dl(s, beta);
      }
      std::int64_t jordan = 0;
      if (auto it = unipotent.find(beta); it != unipotent.end()) jordan = detail::jordan_blocks(k, it->second, s);
      if (d != jordan)
        fail(Errc::DecompositionInconsistent, "mu_p = " + std::to_string(s) + ", tame exponent " + std::to_string(beta) +
                                                  ": formula gives " + std::to_string(d) + ", action has " +
                                                  std::to_string(jordan) + " blocks");
      std::vector<std::int64_t> tame;
      if (ku_level >= 0) tame.push_back(beta);
      rep.entries.push_back({{s, tame, s}, d});
      total += d * s;
    }
  if (total != rep.genus)
    fail(Errc::DecompositionInconsistent,
         "sum of multiplicities times dimensions is " + std::to_string(total) + ", genus " + std::to_string(rep.genus));
  return rep;
}

struct Submodule {
  std::vector<Exps> mu_primes;
  std::vector<AlgebraElement> functions;  // in front of dx
  Matrix coordinates;                     // one row per generator, in the basis
  std::size_t dimension = 0;
};

// x^nu g_mu^{-1} y^{mu'} dx over mu' <= mu at the Artin-Schreier levels, tame part fixed.
inline Submodule submodule_generators(const TowerAnalysis& A, const Exps& mu, std::int64_t nu) {
  const auto& alg = *A.alg;
  const auto& k = alg.field();
  const int r = A.levels();
  const GaloisGroup G = galois_group(A);
  const BasisCoordinates B(A);
  const MuInvariants inv = boseck_invariants(A, mu);
  if (nu < 0 || nu > inv.t - 2)
    fail(Errc::ClosureFailure, "no basis element with mu " + BasisCoordinates::show(mu) + " and nu " + std::to_string(nu));
  const RatFun base(Poly::monomial(k, k.one(), static_cast<int>(nu)), place_product(inv.g, k));

  Submodule out;
  std::size_t expected = 1;
  for (int i = 0; i < r; ++i)
    if (alg.kind(i) == StepKind::ArtinSchreier) expected *= static_cast<std::size_t>(mu[static_cast<std::size_t>(i)] + 1);
  for (const auto& e : alg.monomial_basis(r)) {
    bool below = true;
    for (int i = 0; i < r && below; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      below = alg.kind(i) == StepKind::ArtinSchreier ? e[ui] <= mu[ui] : e[ui] == mu[ui];
    }
    if (!below) continue;
    out.mu_primes.push_back(e);
    out.functions.push_back(alg.monomial(e, base));
    out.coordinates.push_back(B.coordinates(out.functions.back()));
  }
  out.dimension = mat_rank(k, out.coordinates);
  if (out.dimension != expected)
    fail(Errc::ClosureFailure, "span has dimension " + std::to_string(out.dimension) + ", expected " + std::to_string(expected));
  for (std::size_t i = 0; i < G.generators.size(); ++i) {
    GroupElement h(static_cast<std::size_t>(r), 0);
    h[i] = 1;
    const Matrix M = action_matrix(A, G, B, h);
    for (const auto& v : out.coordinates) {
      Matrix img = mat_mul(k, M, [&] {
        Matrix col;
        for (const auto& c : v) col.push_back({c});
        return col;
      }());
      Matrix ext = out.coordinates;
      std::vector<FieldElement> row;
      for (const auto& c : img) row.push_back(c[0]);
      ext.push_back(row);
      if (mat_rank(k, ext) != out.dimension) fail(Errc::ClosureFailure, "span is not stable under the action");
    }
  }
  return out;
}

}  // namespace fftower
