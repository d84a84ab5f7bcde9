#pragma once

// JSON encodings. Integers may be given as JSON numbers or as decimal
// strings; numeric literals too large for 64 bits are kept as exact text
// rather than rounded through a double.

#include <array>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "selmer_flat/bigint.hpp"
#include "selmer_flat/curve.hpp"
#include "selmer_flat/frobmod.hpp"
#include "selmer_flat/frobmod_verify.hpp"
#include "selmer_flat/nf.hpp"
#include "selmer_flat/predictor.hpp"
#include "selmer_flat/tate.hpp"
#include "selmer_flat/theorem.hpp"

namespace selmer_flat::json_io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "selmer-flat/v1";

namespace detail {

/// DOM builder that turns integer literals outside the 64-bit range into strings.
class ExactIntegerSax {
 public:
  explicit ExactIntegerSax(json& root) : dom_(root, true) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(json::number_float_t v, const json::string_t& s) {
    if (s.find_first_of(".eE") == std::string::npos) {
      json::string_t copy = s;
      return dom_.string(copy);
    }
    return dom_.number_float(v, s);
  }
  bool string(json::string_t& v) { return dom_.string(v); }
  bool binary(json::binary_t& v) { return dom_.binary(v); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(json::string_t& v) { return dom_.key(v); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& tok, const nlohmann::detail::exception& ex) {
    return dom_.parse_error(pos, tok, ex);
  }

 private:
  nlohmann::detail::json_sax_dom_parser<json> dom_;
};

}  // namespace detail

inline json parse(const std::string& text) {
  json root;
  detail::ExactIntegerSax sax(root);
  try {
    json::sax_parse(text, &sax);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return root;
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline Int to_int(const json& j, const std::string& what = "integer") {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw SchemaError(what + " must be an integer or a decimal string");
}

inline std::int64_t to_int64(const json& j, const std::string& what = "integer") {
  return selmer_flat::to_int64(to_int(j, what));
}

/// Integers that fit in 53 bits are emitted as numbers, larger ones as strings.
inline json from_int(const Int& v) {
  const Int limit = Int(1) << 53;
  if (v < limit && v > -limit) return static_cast<std::int64_t>(v);
  return v.str();
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

// ------------------------------------------------------------ curves

/// Accepts [a1,a2,a3,a4,a6] or an object carrying "ainvs".
inline WeierstrassCurve curve_from_json(const json& j) {
  const json& arr = j.is_object() ? require(j, "ainvs") : j;
  if (!arr.is_array() || arr.size() != 5) throw SchemaError("curve must be a list of five integers [a1,a2,a3,a4,a6]");
  std::array<Int, 5> a;
  for (std::size_t i = 0; i < 5; ++i) a[i] = to_int(arr[i], "Weierstrass coefficient");
  return WeierstrassCurve::from_ainvs(a);
}

inline json curve_to_json(const WeierstrassCurve& c) {
  json arr = json::array();
  for (const auto& a : c.ainvs()) arr.push_back(from_int(a));
  return arr;
}

// ------------------------------------------------------------ frobenius modules

inline frobmod::Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be a list of rows");
  frobmod::Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw SchemaError(std::string(what) + " rows must be lists");
    std::vector<std::int64_t> r;
    for (const auto& x : row) r.push_back(to_int64(x, what));
    m.push_back(std::move(r));
  }
  return m;
}

inline frobmod::FrobModule module_from_json(const json& j, const frobmod::EnumerationLimits& limits = {}) {
  std::vector<std::int64_t> d;
  const json& divs = require(j, "divisors");
  if (!divs.is_array()) throw SchemaError("'divisors' must be a list");
  for (const auto& x : divs) d.push_back(to_int64(x, "divisor"));
  auto frob = matrix_from_json(require(j, "frobenius"), "frobenius");
  if (d.empty()) {
    if (!frob.empty()) throw SchemaError("trivial module must have an empty Frobenius matrix");
    return frobmod::FrobModule::trivial();
  }
  return frobmod::FrobModule::create(d, frob, limits);
}

inline json module_to_json(const frobmod::FrobModule& m) {
  return {{"divisors", m.divisors()}, {"frobenius", m.frobenius()}};
}

/// {"source": module, "target": module, "matrix": [[...]]}
inline frobmod::FrobHom hom_from_json(const json& j, const frobmod::EnumerationLimits& limits = {}) {
  auto src = module_from_json(require(j, "source"), limits);
  auto tgt = module_from_json(require(j, "target"), limits);
  auto mat = matrix_from_json(require(j, "matrix"), "matrix");
  if (tgt.rank() == 0) mat.clear();
  return frobmod::FrobHom::create(src, tgt, mat, limits);
}

inline json hom_to_json(const frobmod::FrobHom& f) {
  return {{"source", module_to_json(f.source())}, {"target", module_to_json(f.target())}, {"matrix", f.matrix()}};
}

// ------------------------------------------------------------ local data

inline json local_data_to_json(const tate::LocalData& ld) {
  return {{"p", from_int(ld.p)},
          {"kodaira", ld.kodaira.str()},
          {"v_min_disc", ld.v_min_disc},
          {"kind", tate::to_string(ld.kind)},
          {"tamagawa", ld.tamagawa},
          {"semiabelian", ld.semiabelian},
          {"pot_good", ld.pot_good},
          {"component_group", module_to_json(ld.component_group)}};
}

// ------------------------------------------------------------ fields

/// "Q", {"rational": true}, {"quadratic": d} or
/// {"poly": [c0, ..., 1], "h_p_override": {"5": 0}}.
inline nf::NumberField field_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return nf::NumberField::rationals();
    throw SchemaError("field string must be \"Q\"");
  }
  if (!j.is_object()) throw SchemaError("field must be an object");
  std::map<std::int64_t, int> override_map;
  if (j.contains("h_p_override")) {
    const json& o = j.at("h_p_override");
    if (!o.is_object()) throw SchemaError("'h_p_override' must map primes to ranks");
    for (const auto& [key, value] : o.items()) {
      std::int64_t p = selmer_flat::to_int64(parse_int(key));
      if (p < 3 || !is_prime(Int(p))) throw SchemaError("'h_p_override' keys must be odd primes");
      std::int64_t rank = to_int64(value, "class-group rank");
      if (rank < 0) throw SchemaError("class-group ranks are non-negative");
      override_map[p] = static_cast<int>(rank);
    }
  }
  int kinds = static_cast<int>(j.contains("quadratic")) + static_cast<int>(j.contains("poly")) +
              static_cast<int>(j.contains("rational"));
  if (kinds != 1) throw SchemaError("field needs exactly one of 'quadratic', 'poly', 'rational'");
  if (j.contains("rational")) return nf::NumberField::rationals();
  if (j.contains("quadratic")) {
    auto k = nf::NumberField::quadratic(to_int(j.at("quadratic"), "quadratic d"));
    if (override_map.empty()) return k;
    return nf::NumberField::polynomial(k.defining_polynomial(), override_map);
  }
  const json& c = j.at("poly");
  if (!c.is_array() || c.size() < 2) throw SchemaError("'poly' must list coefficients c0, ..., 1");
  poly::ZPoly f;
  for (const auto& x : c) f.push_back(to_int(x, "polynomial coefficient"));
  return nf::NumberField::polynomial(f, override_map);
}

template <class K, class V, class F>
json keyed(const std::map<K, V>& m, F value) {
  json out = json::object();
  for (const auto& [k, v] : m) {
    if constexpr (std::is_same_v<K, Int>)
      out[k.str()] = value(v);
    else
      out[std::to_string(k)] = value(v);
  }
  return out;
}

inline json field_invariants_to_json(const nf::FieldInvariants& inv) {
  auto ident = [](const auto& v) { return v; };
  json places = keyed(inv.places, [](const std::vector<nf::Place>& ps) {
    json arr = json::array();
    for (const auto& pl : ps) arr.push_back({{"e", pl.e}, {"f", pl.f}});
    return arr;
  });
  json unsupported = json::array();
  for (const auto& p : inv.unsupported) unsupported.push_back(from_int(p));
  return {{"description", inv.description},
          {"degree", inv.degree},
          {"r1", inv.r1},
          {"r2", inv.r2},
          {"e", keyed(inv.e, ident)},
          {"places", places},
          {"h_p", keyed(inv.h_p, ident)},
          {"u_p", keyed(inv.u_p, ident)},
          {"unsupported_primes", unsupported}};
}

// ------------------------------------------------------------ reports

inline json reasons_to_json(const std::vector<theorem::Reason>& rs) {
  json arr = json::array();
  for (const auto& r : rs) arr.push_back({{"code", r.code}, {"sentence", r.sentence}});
  return arr;
}

inline json sigma_to_json(const theorem::SigmaReport& s) {
  json primes = json::array();
  for (const auto& p : s.primes) primes.push_back(from_int(p));
  return {{"primes", primes}, {"reasons", keyed(s.reasons, [](const auto& v) { return v; })}, {"notes", s.notes}};
}

inline json hypothesis_to_json(const theorem::HypothesisReport& r) {
  return {{"n", r.n},
          {"semiabelian_at_n", r.semiabelian_at_n},
          {"good_at_n", r.good_at_n},
          {"tamagawa_coprime", r.tamagawa_coprime},
          {"tamagawa_coprime_L", r.tamagawa_coprime_L},
          {"real_condition", r.real_condition},
          {"ramification_ok", r.ramification_ok},
          {"conclusions", json(std::vector<std::string>(r.conclusions.begin(), r.conclusions.end()))},
          {"reasons", reasons_to_json(r.reasons)}};
}

inline json companion_to_json(const theorem::CompanionReport& r) {
  json bad = json::array();
  for (const auto& p : r.bad_primes) bad.push_back(from_int(p));
  auto ident = [](const auto& v) { return v; };
  return {{"p", r.p},
          {"applies", r.applies},
          {"bad_primes", bad},
          {"tamagawa_first", keyed(r.tamagawa_first, ident)},
          {"tamagawa_second", keyed(r.tamagawa_second, ident)},
          {"reasons", reasons_to_json(r.reasons)},
          {"sentence", r.sentence}};
}

inline json bounds_to_json(const predictor::Bounds& b) { return json::array({b.lower, b.upper}); }

inline json prediction_to_json(const predictor::Prediction& p) {
  return {{"field", p.field},
          {"h1_dim", p.h1_dim},
          {"places_above_11", p.places_above_11},
          {"sel_lower", p.sel_lower},
          {"sel_upper", p.sel_upper},
          {"bounds",
           {{"raw", bounds_to_json(p.bounds.raw)},
            {"clamped", bounds_to_json(p.bounds.clamped)},
            {"torsion_clamped", bounds_to_json(p.bounds.torsion_clamped)}}},
          {"parity_window", bounds_to_json(p.parity_window)},
          {"parity", p.parity},
          {"case", p.case_label},
          {"narrative", p.narrative}};
}

inline json ss2_to_json(const theorem::SS2Report& r) {
  return {{"applies", r.applies}, {"sel2_determined", r.sel2_determined}, {"reasons", reasons_to_json(r.reasons)}};
}

inline json sha_index_to_json(const predictor::ShaIndexBounds& b) {
  return {{"tamagawa_bound", from_int(b.tamagawa_bound)}, {"real_bound", from_int(b.real_bound)}};
}

inline json defect_to_json(const predictor::Defect& d) {
  return {{"sel_minus_h1_bound", from_int(d.sel_minus_h1_bound)}, {"h1_minus_sel_bound", from_int(d.h1_minus_sel_bound)}};
}

inline json verify_to_json(const frobmod::VerifyResult& r) {
  return {{"instances", r.instances}, {"violations", r.violations}, {"messages", r.messages}};
}

}  // namespace selmer_flat::json_io
