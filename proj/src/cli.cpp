#include "fftower/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fftower/holomorphy.hpp"

namespace fftower {

namespace cli_detail {

std::string element_text(const FiniteField& k, FieldElement a) {
  if (k.h() == 1) return std::to_string(a.code);
  const auto c = k.coeffs(a);
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += " + ";
    const std::string mono = i == 0 ? "" : i == 1 ? "t" : "t^" + std::to_string(i);
    s += (c[i] != 1 || i == 0 ? std::to_string(c[i]) : "") + mono;
  }
  return "(" + s + ")";
}

std::string poly_text(const Poly& f) {
  if (f.is_zero()) return "0";
  const auto& k = f.field();
  std::string s;
  for (int i = f.degree(); i >= 0; --i) {
    const FieldElement c = f.coeff(i);
    if (c.is_zero()) continue;
    if (!s.empty()) s += " + ";
    const std::string mono = i == 0 ? "" : i == 1 ? "x" : "x^" + std::to_string(i);
    if (c == k.one() && i > 0) s += mono;
    else s += element_text(k, c) + mono;
  }
  return s;
}

std::string basis_text(const BasisElement& b) {
  std::vector<std::string> factors;
  if (b.nu > 0) factors.push_back(b.nu == 1 ? "x" : "x^" + std::to_string(b.nu));
  for (std::size_t i = 0; i < b.mu.size(); ++i) {
    if (b.mu[i] == 0) continue;
    factors.push_back("y" + std::to_string(i + 1) + (b.mu[i] > 1 ? "^" + std::to_string(b.mu[i]) : ""));
  }
  std::string s = factors.empty() ? "1" : factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) s += " * " + factors[i];
  if (!b.g.empty()) {
    s += " / ";
    for (const auto& [P, e] : b.g) {
      s += "(" + poly_text(P.poly) + ")";
      if (e > 1) s += "^" + std::to_string(e);
    }
  }
  return s + " dx";
}

GroupElement parse_element(const std::string& text, int levels) {
  GroupElement h;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      h.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      fail(Errc::ParseError, "--element: \"" + part + "\" is not an integer");
    }
  }
  if (static_cast<int>(h.size()) != levels)
    fail(Errc::ParseError, "--element needs " + std::to_string(levels) + " comma-separated exponents");
  return h;
}

int report_error(const Error& e, std::ostream& out) {
  out << json_io::dump(Json{{"error", std::string(errc_name(e.code()))}, {"detail", e.detail()}});
  return is_internal(e.code()) ? 2 : 1;
}

}  // namespace cli_detail

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kummer and Artin-Schreier towers over F_q(x): genus, holomorphic differentials, Galois action"};
  app.require_subcommand(1);
  std::string input;
  std::uint64_t seed = 0;
  bool assume_uniform = false, pretty = false, check = false;
  std::string element;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "descriptor file (default: standard input)");
    sub->add_option("--seed", seed, "seed for polynomial factorization");
    sub->add_flag("--assume-uniform", assume_uniform, "skip the Galois-only checks");
  };
  for (const char* name : {"validate", "analyze", "genus", "decompose", "standardform"}) common(app.add_subcommand(name));
  auto* basis = app.add_subcommand("basis");
  common(basis);
  basis->add_flag("--pretty", pretty, "human-readable differentials");
  basis->add_flag("--check", check, "run the holomorphy oracle on every element");
  auto* act = app.add_subcommand("act");
  common(act);
  act->add_option("--element", element, "exponents h_1,...,h_r of the group element")->required();
  app.get_subcommand("validate")->description("run every descriptor check");
  app.get_subcommand("analyze")->description("ramification profile per place");
  app.get_subcommand("genus")->description("genus of the top field and of each level");
  basis->description("basis of holomorphic differentials");
  app.get_subcommand("decompose")->description("cyclic Galois module decomposition");
  app.get_subcommand("standardform")->description("normal forms of the steps defined over k(x)");
  act->description("matrix of a group element on the basis");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    std::string text;
    if (input.empty()) {
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    } else {
      std::ifstream f(input);
      if (!f) fail(Errc::ParseError, "cannot open " + input);
      std::stringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    TowerDescriptor d = json_io::descriptor_from_json(json_io::parse_document(text));
    d.options.seed = seed;
    if (assume_uniform) d.options.assume_uniform = true;
    const auto& k = d.k();

    if (cmd == "validate") {
      const auto rep = validate(d);
      out << json_io::dump(json_io::to_json(rep));
      return rep.ok ? 0 : 1;
    }
    if (cmd == "standardform") {
      Json steps = Json::array();
      for (int i = 0; i < d.levels(); ++i) {
        const auto& s = d.steps[static_cast<std::size_t>(i)];
        Json e{{"step", i + 1}, {"kind", json_io::kind_name(s.kind)}};
        if (!s.c.in_base_field()) {
          e["skipped"] = "c involves lower generators";
        } else {
          const RatFun c = s.c.terms.begin()->second;
          NormalForm nf;
          if (s.kind == StepKind::Kummer) nf = kummer_standard_form(c, s.n);
          else if (d.options.zero_normal) nf = as_zero_normal(c, d.options.keep);
          else nf = as_weak_standard_form(c, d.options.keep);
          e.update(json_io::to_json(nf));
        }
        steps.push_back(e);
      }
      out << json_io::dump(Json{{"steps", steps}});
      return 0;
    }

    const TowerAnalysis A = analyze(d);
    if (cmd == "analyze") {
      Json j = json_io::to_json(A);
      j["genus"] = genus(A);
      out << json_io::dump(j);
    } else if (cmd == "genus") {
      out << json_io::dump(Json{{"genus", genus(A)}, {"stepwise", genus_stepwise(A)}});
    } else if (cmd == "basis") {
      const auto B = enumerate_basis(A);
      bool all_ok = true;
      Json list = Json::array();
      for (const auto& b : B) {
        Json e = json_io::to_json(b);
        if (check) {
          const bool ok = holomorphy_check(A, b).holomorphic;
          all_ok = all_ok && ok;
          e["holomorphic"] = ok;
        }
        list.push_back(e);
      }
      if (pretty) {
        for (std::size_t i = 0; i < B.size(); ++i) {
          out << cli_detail::basis_text(B[i]);
          if (check) out << (list[i]["holomorphic"].get<bool>() ? "  [holomorphic]" : "  [NOT holomorphic]");
          out << "\n";
        }
      } else {
        out << json_io::dump(Json{{"genus", genus(A)}, {"basis", list}});
      }
      if (!all_ok) return 2;
    } else if (cmd == "decompose") {
      out << json_io::dump(json_io::to_json(cyclic_decomposition(A)));
    } else if (cmd == "act") {
      const GroupElement h = cli_detail::parse_element(element, A.levels());
      const Matrix M = action_matrix(A, h);
      out << json_io::dump(Json{{"element", h}, {"basis", json_io::to_json(enumerate_basis(A))}, {"matrix", json_io::to_json(k, M)}});
    }
    return 0;
  } catch (const Error& e) {
    return cli_detail::report_error(e, out);
  }
}

}  // namespace fftower
