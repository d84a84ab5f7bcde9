#pragma once

// Command dispatch for the selmer-flat tool. Inputs are file paths, inline
// JSON, or one of the named curves (11a1, 2534e1, ...). Every command writes
// one JSON document (or a text rendering with `pretty`) to `out`.
//
// Exit codes: 0 computed, 2 hypotheses not applicable, 1 error.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "selmer_flat/fixtures.hpp"
#include "selmer_flat/frobmod_verify.hpp"
#include "selmer_flat/json_io.hpp"
#include "selmer_flat/nf.hpp"
#include "selmer_flat/predictor.hpp"
#include "selmer_flat/tate.hpp"
#include "selmer_flat/theorem.hpp"

namespace selmer_flat::cli {

using nlohmann::json;

inline constexpr int kComputed = 0;
inline constexpr int kError = 1;
inline constexpr int kNotApplicable = 2;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::int64_t> p;
  std::int64_t n = 0;
  std::optional<std::string> curve_b;
  std::optional<std::string> field_l;
  std::optional<std::string> base;
  std::string real = "unknown";
  std::uint64_t seed = 1;
  std::int64_t iters = 1000;
  std::int64_t max_order = 10'000;
  FactorLimits factor_limits;
  frobmod::EnumerationLimits enumeration_limits;
  bool pretty = false;
};

namespace detail {

inline json load(const std::string& input) {
  auto first = input.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (input[first] == '{' || input[first] == '[' || input[first] == '"'))
    return json_io::parse(input);
  if (input == "Q") return "Q";
  if (!std::filesystem::exists(input)) {
    if (auto c = fixtures::named_curve(input)) return {{"label", input}, {"ainvs", json_io::curve_to_json(*c)}};
    throw Error("cannot read '" + input + "': no such file or named curve");
  }
  return json_io::read_file(input);
}

inline theorem::CurveData curve(const std::string& input, const RunConfig& cfg) {
  json j = load(input);
  std::string label = j.is_object() && j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
  return theorem::CurveData::from_curve(json_io::curve_from_json(j), label, cfg.factor_limits);
}

inline nf::NumberField field(const std::string& input) { return json_io::field_from_json(load(input)); }

inline theorem::RealPlaces real_places(const std::string& s) {
  if (s == "unknown") return theorem::RealPlaces::unknown;
  if (s == "connected") return theorem::RealPlaces::connected;
  if (s == "disconnected") return theorem::RealPlaces::disconnected;
  throw SchemaError("--real must be unknown, connected or disconnected");
}

inline void need_inputs(const RunConfig& cfg, std::size_t k) {
  if (cfg.inputs.size() != k)
    throw SchemaError(cfg.command + " expects " + std::to_string(k) + " input(s), got " + std::to_string(cfg.inputs.size()));
}

inline std::vector<Int> primes_of(std::int64_t n) { return n > 0 ? prime_divisors(Int(n)) : std::vector<Int>{}; }

/// Primes at which the field's splitting is needed for curve statements.
inline std::vector<Int> relevant_primes(const theorem::CurveData& a, const theorem::CurveData* b, std::int64_t n) {
  std::set<Int> s{Int(2)};
  for (const auto& p : a.bad_primes()) s.insert(p);
  if (b)
    for (const auto& p : b->bad_primes()) s.insert(p);
  for (const auto& p : primes_of(n)) s.insert(p);
  return {s.begin(), s.end()};
}

inline json envelope(const std::string& command) { return {{"schema", json_io::kSchemaVersion}, {"command", command}}; }

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

inline std::string text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline void pretty_reasons(std::ostream& out, const json& reasons) {
  for (const auto& r : reasons) out << "  - " << text(r["code"]) << ": " << text(r["sentence"]) << "\n";
}

inline void pretty_print(std::ostream& out, const json& doc) {
  const std::string cmd = doc["command"];
  if (cmd == "tate") {
    out << "curve " << doc["curve"].dump() << "\n";
    for (const auto& ld : doc["local_data"])
      out << "  p = " << text(ld["p"]) << ": " << text(ld["kodaira"]) << ", " << text(ld["kind"])
          << ", c = " << text(ld["tamagawa"]) << ", v(disc) = " << text(ld["v_min_disc"]) << "\n";
  } else if (cmd == "sigma") {
    std::vector<std::string> ps;
    for (const auto& p : doc["sigma"]["primes"]) ps.push_back(text(p));
    out << "Sigma over " << text(doc["field"]["description"]) << " = {" << join(ps, ", ") << "}\n";
    for (const auto& [p, tags] : doc["sigma"]["reasons"].items()) {
      std::vector<std::string> ts;
      for (const auto& t : tags) ts.push_back(text(t));
      out << "  " << p << ": " << join(ts, ", ") << "\n";
    }
    for (const auto& note : doc["sigma"]["notes"]) out << "  note: " << text(note) << "\n";
  } else if (cmd == "check") {
    const auto& h = doc["hypotheses"];
    std::vector<std::string> cs;
    for (const auto& c : h["conclusions"]) cs.push_back(text(c));
    out << "degree " << text(h["n"]) << " over " << text(doc["field"]["description"]) << ": conclusions {"
        << join(cs, ", ") << "}\n";
    pretty_reasons(out, h["reasons"]);
  } else if (cmd == "predict11a1") {
    const auto& p = doc["prediction"];
    out << "11a1 over " << text(p["field"]) << ": case " << text(p["case"]) << "\n";
    out << "  " << text(p["narrative"]) << "\n";
  } else if (cmd == "companion") {
    const auto& c = doc["companion"];
    out << "p = " << text(c["p"]) << ": " << (c["applies"].get<bool>() ? "applies" : "does not apply") << "\n";
    if (!c["sentence"].get<std::string>().empty()) out << "  " << text(c["sentence"]) << "\n";
    pretty_reasons(out, c["reasons"]);
  } else if (cmd == "frobmod-verify") {
    const auto& r = doc["result"];
    out << text(r["instances"]) << " instances, " << text(r["violations"]) << " violations\n";
    for (const auto& m : r["messages"]) out << "  " << text(m) << "\n";
  }
}

// ------------------------------------------------------------ commands

inline int cmd_tate(const RunConfig& cfg, json& doc) {
  need_inputs(cfg, 1);
  auto c = curve(cfg.inputs[0], cfg);
  doc["label"] = c.label;
  doc["curve"] = json_io::curve_to_json(*c.curve);
  doc["discriminant"] = json_io::from_int(c.curve->discriminant());
  json local = json::array();
  if (cfg.p) {
    if (*cfg.p < 2 || !is_prime(Int(*cfg.p))) throw SchemaError("-p must be a prime");
    local.push_back(json_io::local_data_to_json(tate::tate_algorithm(*c.curve, Int(*cfg.p))));
  } else {
    for (const auto& ld : c.bad) local.push_back(json_io::local_data_to_json(ld));
  }
  doc["local_data"] = local;
  doc["tamagawa_product"] = json_io::from_int(c.tamagawa_product());
  return kComputed;
}

inline int cmd_sigma(const RunConfig& cfg, json& doc) {
  need_inputs(cfg, 2);
  auto a = curve(cfg.inputs[0], cfg);
  auto k = nf::compute_invariants(field(cfg.inputs[1]), relevant_primes(a, nullptr, 0), {});
  doc["label"] = a.label;
  doc["field"] = json_io::field_invariants_to_json(k);
  doc["sigma"] = json_io::sigma_to_json(theorem::compute_sigma(a, k));
  return kComputed;
}

inline int cmd_check(const RunConfig& cfg, json& doc) {
  need_inputs(cfg, 2);
  if (cfg.n < 1) throw SchemaError("check needs a positive degree -n");
  auto a = curve(cfg.inputs[0], cfg);
  std::optional<theorem::CurveData> b;
  if (cfg.curve_b) b = curve(*cfg.curve_b, cfg);
  auto primes = relevant_primes(a, b ? &*b : nullptr, cfg.n);
  auto k = nf::compute_invariants(field(cfg.inputs[1]), primes, {});
  std::optional<nf::FieldInvariants> l;
  if (cfg.field_l) l = nf::compute_invariants(field(*cfg.field_l), primes, {});
  auto report = theorem::check_theorem(a, b, cfg.n, k, l, real_places(cfg.real));
  doc["label"] = a.label;
  if (b) doc["label_B"] = b->label;
  doc["field"] = json_io::field_invariants_to_json(k);
  if (l) doc["field_L"] = json_io::field_invariants_to_json(*l);
  doc["hypotheses"] = json_io::hypothesis_to_json(report);
  doc["sigma"] = json_io::sigma_to_json(theorem::compute_sigma(a, k));
  return report.conclusions.empty() ? kNotApplicable : kComputed;
}

inline int cmd_predict(const RunConfig& cfg, json& doc) {
  need_inputs(cfg, 1);
  const std::vector<Int> primes{Int(2), Int(5), Int(11)};
  auto k = nf::compute_invariants(field(cfg.inputs[0]), primes, {5});
  std::optional<nf::FieldInvariants> base;
  if (cfg.base) base = nf::compute_invariants(field(*cfg.base), primes, {5});
  auto p = predictor::predict_11a1(k, base);
  auto e = theorem::CurveData::from_curve(*fixtures::named_curve("11a1"), "11a1", cfg.factor_limits);
  doc["field"] = json_io::field_invariants_to_json(k);
  if (base) doc["base"] = json_io::field_invariants_to_json(*base);
  doc["prediction"] = json_io::prediction_to_json(p);
  // rank statement where the case pins the rank itself
  doc["rank"] = (p.case_label == "a" || p.case_label == "b") ? json(0) : json(nullptr);
  doc["sha_index"] = json_io::sha_index_to_json(predictor::sha_index_bounds(e, k));
  doc["defect"] = json_io::defect_to_json(
      predictor::quantitative_defect(predictor::datum_11a1(k), 5, k.r1, cfg.enumeration_limits));
  return kComputed;
}

inline int cmd_companion(const RunConfig& cfg, json& doc) {
  need_inputs(cfg, 2);
  if (!cfg.p) throw SchemaError("companion needs -p");
  auto e1 = curve(cfg.inputs[0], cfg);
  auto e2 = curve(cfg.inputs[1], cfg);
  auto r = theorem::check_companion(e1, e2, *cfg.p);
  doc["labels"] = {e1.label, e2.label};
  doc["companion"] = json_io::companion_to_json(r);
  return r.applies ? kComputed : kNotApplicable;
}

inline int cmd_verify(const RunConfig& cfg, json& doc) {
  need_inputs(cfg, 0);
  if (cfg.iters < 0) throw SchemaError("--iters must be non-negative");
  if (cfg.max_order < 1) throw SchemaError("--max-order must be positive");
  auto r = frobmod::verify_random(cfg.seed, cfg.iters, cfg.max_order, cfg.enumeration_limits);
  doc["seed"] = cfg.seed;
  doc["result"] = json_io::verify_to_json(r);
  return r.violations == 0 ? kComputed : kError;
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.factor_limits.trial_division_bound < 2 || cfg.factor_limits.rho_iterations < 1 ||
        cfg.enumeration_limits.max_order < 1)
      throw SchemaError("enumeration caps must be positive");
    json doc = detail::envelope(cfg.command);
    int code;
    if (cfg.command == "tate")
      code = detail::cmd_tate(cfg, doc);
    else if (cfg.command == "sigma")
      code = detail::cmd_sigma(cfg, doc);
    else if (cfg.command == "check")
      code = detail::cmd_check(cfg, doc);
    else if (cfg.command == "predict11a1")
      code = detail::cmd_predict(cfg, doc);
    else if (cfg.command == "companion")
      code = detail::cmd_companion(cfg, doc);
    else if (cfg.command == "frobmod-verify")
      code = detail::cmd_verify(cfg, doc);
    else
      throw SchemaError("unknown command '" + cfg.command + "'");
    if (cfg.pretty)
      detail::pretty_print(out, doc);
    else
      out << doc.dump(2) << "\n";
    return code;
  } catch (const NotApplicable& e) {
    err << "selmer-flat: not applicable: " << e.what() << "\n";
    return kNotApplicable;
  } catch (const std::exception& e) {
    err << "selmer-flat: error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace selmer_flat::cli
