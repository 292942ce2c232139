#pragma once

// JSON form of descriptors and reports. Everything is integers and arrays;
// objects use sorted keys so a dump is canonical.

#include <json.hpp>

#include <string>
#include <vector>

#include "fftower/boseck.hpp"
#include "fftower/galois.hpp"
#include "fftower/standard_form.hpp"

namespace fftower {

using Json = nlohmann::json;

namespace json_io {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  fail(Errc::ParseError, where + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<std::int64_t>();
}

inline bool boolean(const Json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where, "expected true or false");
  return j.get<bool>();
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

// Document text to JSON, with the failure position as line and column.
inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
}

inline std::string dump(const Json& j) { return j.dump() + "\n"; }

// ---- field ----

inline Json to_json(const FieldSpec& s) {
  Json j{{"p", s.p}, {"h", s.h}};
  if (s.h > 1) j["modulus"] = s.modulus;
  return j;
}

inline FieldSpec field_from_json(const Json& j) {
  FieldSpec s;
  const auto p = integer(member(j, "p", "field"), "field.p");
  if (p < 2 || p > 65535) bad("field.p", "out of range");
  s.p = static_cast<unsigned>(p);
  s.h = 1;
  if (j.contains("h")) {
    const auto h = integer(j["h"], "field.h");
    if (h < 1 || h > 32) bad("field.h", "out of range");
    s.h = static_cast<unsigned>(h);
  }
  if (s.h == 1) {
    s.modulus = {0, 1};
  } else {
    for (const auto& c : array(member(j, "modulus", "field"), "field.modulus")) {
      const auto v = integer(c, "field.modulus");
      if (v < 0 || v >= p) bad("field.modulus", "coefficient outside [0, p)");
      s.modulus.push_back(static_cast<unsigned>(v));
    }
  }
  FiniteField::get(s);  // rejects bad specs
  return s;
}

inline Json to_json(const FiniteField& k, FieldElement a) {
  if (k.h() == 1) return a.code;
  return k.coeffs(a);
}

inline FieldElement element_from_json(const FiniteField& k, const Json& j, const std::string& where) {
  if (k.h() == 1) {
    const auto v = integer(j, where);
    if (v < 0 || v >= static_cast<std::int64_t>(k.p())) bad(where, "element outside [0, p)");
    return k.from_int(v);
  }
  std::vector<std::int64_t> c;
  for (const auto& x : array(j, where)) {
    const auto v = integer(x, where);
    if (v < 0 || v >= static_cast<std::int64_t>(k.p())) bad(where, "coefficient outside [0, p)");
    c.push_back(v);
  }
  if (c.size() > k.h()) bad(where, "too many coefficients");
  return k.from_coeffs(c);
}

// ---- polynomials, rational functions, places ----

inline Json to_json(const Poly& f) {
  Json j = Json::array();
  for (const auto& c : f.coeffs()) j.push_back(to_json(f.field(), c));
  return j;
}

inline Poly poly_from_json(const FiniteField& k, const Json& j, const std::string& where) {
  std::vector<FieldElement> c;
  for (const auto& x : array(j, where)) c.push_back(element_from_json(k, x, where));
  return Poly(k, c);
}

inline Json to_json(const RatFun& r) { return {{"num", to_json(r.num())}, {"den", to_json(r.den())}}; }

inline RatFun ratfun_from_json(const FiniteField& k, const Json& j, const std::string& where) {
  Poly num = poly_from_json(k, member(j, "num", where), where + ".num");
  Poly den = j.contains("den") ? poly_from_json(k, j["den"], where + ".den") : Poly::one(k);
  if (den.is_zero()) bad(where, "zero denominator");
  return RatFun(num, den);
}

inline Json to_json(const Place& P) {
  if (P.infinite) return "infinity";
  return {{"finite", to_json(P.poly)}};
}

inline Place place_from_json(const FiniteField& k, const Json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() != "infinity") bad(where, "unknown place");
    return Place::infinity();
  }
  return Place::finite(poly_from_json(k, member(j, "finite", where), where + ".finite"));
}

// ---- tower algebra ----

inline Json to_json(const AlgebraElement& a) {
  Json j = Json::array();
  for (const auto& [e, c] : a.terms) j.push_back({{"exps", e}, {"num", to_json(c.num())}, {"den", to_json(c.den())}});
  return j;
}

inline AlgebraElement algebra_from_json(const FiniteField& k, const Json& j, int levels, const std::string& where) {
  AlgebraElement a;
  if (j.is_object()) {  // shorthand for an element of K
    TowerAlgebra::add_term(a, Exps(static_cast<std::size_t>(levels), 0), ratfun_from_json(k, j, where));
    return a;
  }
  for (const auto& t : array(j, where)) {
    Exps e;
    for (const auto& x : array(member(t, "exps", where), where + ".exps")) {
      const auto v = integer(x, where + ".exps");
      if (v < 0 || v > 1'000'000) bad(where + ".exps", "exponent out of range");
      e.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(e.size()) != levels) bad(where + ".exps", "needs one exponent per step");
    TowerAlgebra::add_term(a, e, ratfun_from_json(k, t, where));
  }
  return a;
}

inline std::string kind_name(StepKind s) { return s == StepKind::Kummer ? "kummer" : "artin_schreier"; }

inline StepKind kind_from_json(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a step kind");
  const auto s = j.get<std::string>();
  if (s == "kummer") return StepKind::Kummer;
  if (s == "artin_schreier") return StepKind::ArtinSchreier;
  bad(where, "unknown step kind \"" + s + "\"");
}

inline Json to_json(const TowerDescriptor& d) {
  Json steps = Json::array();
  for (const auto& s : d.steps) steps.push_back({{"kind", kind_name(s.kind)}, {"n", s.n}, {"c", to_json(s.c)}});
  Json opt{{"assume_uniform", d.options.assume_uniform}, {"zero_normal", d.options.zero_normal}};
  Json certs = Json::array();
  for (const auto& c : d.options.certificates)
    certs.push_back({{"step", c.step}, {"place", to_json(c.place)}, {"valuation", c.valuation}});
  opt["valuation_certificates"] = certs;
  Json keep = Json::array();
  for (const auto& P : d.options.keep) keep.push_back(to_json(P));
  opt["keep"] = keep;
  Json actions = Json::object();
  for (const auto& [i, imgs] : d.options.actions) {
    Json v = Json::array();
    for (const auto& a : imgs) v.push_back(to_json(a));
    actions[std::to_string(i)] = v;
  }
  opt["actions"] = actions;
  return {{"field", to_json(d.field)}, {"steps", steps}, {"options", opt}};
}

inline TowerDescriptor descriptor_from_json(const Json& j) {
  TowerDescriptor d;
  d.field = field_from_json(member(j, "field", "document"));
  const auto& k = d.k();
  const auto& steps = array(member(j, "steps", "document"), "steps");
  const int r = static_cast<int>(steps.size());
  if (r == 0) bad("steps", "a tower needs at least one step");
  for (int i = 0; i < r; ++i) {
    const std::string where = "steps[" + std::to_string(i) + "]";
    const auto& s = steps[static_cast<std::size_t>(i)];
    StepSpec st;
    st.kind = kind_from_json(member(s, "kind", where), where + ".kind");
    if (s.contains("n")) {
      const auto n = integer(s["n"], where + ".n");
      if (n < 1 || n > 1'000'000) bad(where + ".n", "degree out of range");
      st.n = static_cast<int>(n);
    } else {
      if (st.kind == StepKind::Kummer) bad(where, "missing \"n\"");
      st.n = static_cast<int>(k.p());
    }
    st.c = algebra_from_json(k, member(s, "c", where), r, where + ".c");
    d.steps.push_back(std::move(st));
  }
  if (j.contains("options")) {
    const auto& o = j["options"];
    if (!o.is_object()) bad("options", "expected an object");
    if (o.contains("assume_uniform")) d.options.assume_uniform = boolean(o["assume_uniform"], "options.assume_uniform");
    if (o.contains("zero_normal")) d.options.zero_normal = boolean(o["zero_normal"], "options.zero_normal");
    if (o.contains("valuation_certificates"))
      for (const auto& c : array(o["valuation_certificates"], "options.valuation_certificates")) {
        ValuationCertificate vc;
        const auto step = integer(member(c, "step", "certificate"), "certificate.step");
        if (step < 1 || step > r) bad("certificate.step", "no such step");
        vc.step = static_cast<int>(step);
        vc.place = place_from_json(k, member(c, "place", "certificate"), "certificate.place");
        vc.valuation = integer(member(c, "valuation", "certificate"), "certificate.valuation");
        d.options.certificates.push_back(vc);
      }
    if (o.contains("keep"))
      for (const auto& P : array(o["keep"], "options.keep")) d.options.keep.push_back(place_from_json(k, P, "options.keep"));
    if (o.contains("actions")) {
      const auto& acts = o["actions"];
      if (!acts.is_object()) bad("options.actions", "expected an object keyed by step");
      for (const auto& [key, imgs] : acts.items()) {
        int step = 0;
        try {
          step = std::stoi(key);
        } catch (const std::exception&) {
          bad("options.actions", "key \"" + key + "\" is not a step number");
        }
        if (step < 1 || step > r) bad("options.actions", "no step " + key);
        std::vector<AlgebraElement> v;
        for (const auto& a : array(imgs, "options.actions." + key))
          v.push_back(algebra_from_json(k, a, r, "options.actions." + key));
        d.options.actions[step] = std::move(v);
      }
    }
  }
  return d;
}

// ---- reports ----

inline Json to_json(const ValidationReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e{{"check", c.check}, {"step", c.step}, {"passed", c.passed}, {"detail", c.detail}};
    e["place"] = c.place ? to_json(*c.place) : Json(nullptr);
    checks.push_back(e);
  }
  return {{"ok", rep.ok}, {"checks", checks}, {"notes", rep.notes}};
}

inline Json to_json(const TowerAnalysis& A) {
  Json places = Json::array();
  const int r = A.levels();
  for (const auto& tp : A.places) {
    Json levels = Json::array();
    for (const auto& L : tp.levels) {
      Json l{{"kind", kind_name(L.kind)}, {"n", L.degree}, {"vc", L.vc},      {"vy", L.vy},
             {"e", L.e},                  {"ramified", L.ramified}, {"representative_choice", L.representative_choice}};
      l["inertia"] = L.inertia ? Json(*L.inertia) : Json(nullptr);
      levels.push_back(l);
    }
    places.push_back({{"place", to_json(tp.base)},
                      {"degree", tp.base.degree()},
                      {"e", tp.e_upto(r)},
                      {"different", different_exponent(tp)},
                      {"levels", levels}});
  }
  return {{"degree", A.degree}, {"places", places}, {"notes", A.report.notes}};
}

inline Json to_json(const PlacePowers& g) {
  Json j = Json::array();
  for (const auto& [P, e] : g) j.push_back({to_json(P), e});
  return j;
}

inline Json to_json(const BasisElement& b) { return {{"nu", b.nu}, {"mu", b.mu}, {"g", to_json(b.g)}}; }

inline Json to_json(const std::vector<BasisElement>& basis) {
  Json j = Json::array();
  for (const auto& b : basis) j.push_back(to_json(b));
  return j;
}

inline Json to_json(const DecompositionReport& rep) {
  Json j = Json::array();
  for (const auto& e : rep.entries)
    j.push_back({{"mu_p", e.module.mu_p}, {"mu_tame", e.module.mu_tame}, {"dim", e.module.dim}, {"multiplicity", e.multiplicity}});
  return j;
}

inline Json to_json(const Replacement& rp) {
  Json j{{"kind", kind_name(rp.kind)}, {"witness", to_json(rp.witness)}, {"before", rp.before}, {"after", rp.after}};
  j["place"] = rp.place ? to_json(*rp.place) : Json(nullptr);
  return j;
}

inline Json to_json(const NormalForm& nf) {
  Json chain = Json::array();
  for (const auto& s : nf.chain.steps) chain.push_back(to_json(s));
  Json j{{"c", to_json(nf.value)}, {"chain", chain}};
  j["auxiliary"] = nf.auxiliary ? to_json(*nf.auxiliary) : Json(nullptr);
  return j;
}

inline Json to_json(const FiniteField& k, const Matrix& m) {
  Json j = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(to_json(k, c));
    j.push_back(r);
  }
  return j;
}

}  // namespace json_io
}  // namespace fftower
