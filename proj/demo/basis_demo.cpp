// Prints genus, basis and Galois module structure for a few small towers.

#include <iostream>

#include "fftower/cli.hpp"

using namespace fftower;

namespace {

AlgebraElement in_base(const RatFun& r, int levels) {
  AlgebraElement a;
  TowerAlgebra::add_term(a, Exps(static_cast<std::size_t>(levels), 0), r);
  return a;
}

void show(const std::string& title, const TowerDescriptor& d) {
  std::cout << "== " << title << "\n";
  const TowerAnalysis A = analyze(d);
  std::cout << "genus " << genus(A) << "\n";
  for (const auto& b : enumerate_basis(A)) std::cout << "  " << cli_detail::basis_text(b) << "\n";
  try {
    for (const auto& e : cyclic_decomposition(A).entries) {
      if (e.multiplicity == 0) continue;
      std::cout << "  Delta(mu_p = " << e.module.mu_p;
      for (auto b : e.module.mu_tame) std::cout << ", tame " << b;
      std::cout << ") x " << e.multiplicity << "\n";
    }
  } catch (const Error& e) {
    std::cout << "  no cyclic decomposition: " << e.what() << "\n";
  }
}

}  // namespace

int main() {
  const auto& f3 = FiniteField::prime(3);
  const Poly x = Poly::x(f3);

  TowerDescriptor am;
  am.field = f3.spec();
  am.steps.push_back({StepKind::ArtinSchreier, 3, in_base(RatFun(Poly::one(f3), x.pow(3) - x), 1)});
  show("y^3 - y = 1/(x^3 - x) over F_3", am);

  TowerDescriptor mixed;
  mixed.field = f3.spec();
  mixed.steps.push_back({StepKind::Kummer, 2, in_base(RatFun(x * Poly::linear(f3, f3.one())), 2)});
  mixed.steps.push_back({StepKind::ArtinSchreier, 3, in_base(RatFun(Poly::one(f3), Poly::linear(f3, f3.from_int(2))), 2)});
  show("y1^2 = x(x - 1), y2^3 - y2 = 1/(x - 2) over F_3", mixed);

  const auto& f7 = FiniteField::prime(7);
  TowerDescriptor fermat;
  fermat.field = f7.spec();
  fermat.steps.push_back({StepKind::Kummer, 3, in_base(RatFun(Poly::one(f7) - Poly::x(f7).pow(3)), 1)});
  show("y^3 = 1 - x^3 over F_7", fermat);
  return 0;
}
