#include "peps/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace peps {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_config(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

long long require_int(const ordered_json& j, const char* key) {
  if (!j.contains(key)) bad_config(std::string("missing field '") + key + "'");
  if (!j[key].is_number_integer()) bad_config(std::string("field '") + key + "' must be an integer");
  return j[key].get<long long>();
}

long long optional_int(const ordered_json& j, const char* key, long long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) bad_config(std::string("field '") + key + "' must be an integer");
  return j[key].get<long long>();
}

std::vector<long long> int_list(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad_config(where + " must be a nonempty array of integers");
  std::vector<long long> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) bad_config(where + " must contain only integers");
    out.push_back(v.get<long long>());
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    bad_config(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_config("top level must be an object");

  static const char* known[] = {"p",      "f",     "precision", "kummer",
                                "dwork_c", "scalar", "twist",     "omega",
                                "max_degree_override", "grid"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) { ok = true; break; }
    if (!ok) bad_config("unknown field '" + it.key() + "'");
  }

  RunConfig cfg;
  cfg.p = require_int(j, "p");
  cfg.f = static_cast<int>(optional_int(j, "f", 1));
  cfg.precision = optional_int(j, "precision", 24);

  if (j.contains("kummer")) {
    if (!j["kummer"].is_array()) bad_config("'kummer' must be an array");
    for (const auto& entry : j["kummer"]) {
      if (!entry.is_object()) bad_config("'kummer' entries must be objects");
      cfg.kummer.emplace_back(require_int(entry, "point"), require_int(entry, "a"));
    }
  }
  cfg.dwork_c = optional_int(j, "dwork_c", 0);

  if (j.contains("scalar")) {
    const auto& s = j["scalar"];
    if (s.is_number_integer()) {
      cfg.scalar_num = s.get<long long>();
    } else if (s.is_array() && s.size() == 2 && s[0].is_number_integer() &&
               s[1].is_number_integer()) {
      cfg.scalar_num = s[0].get<long long>();
      cfg.scalar_den = s[1].get<long long>();
    } else {
      bad_config("'scalar' must be an integer or a [num, den] pair");
    }
    if (cfg.scalar_den == 0) bad_config("'scalar' denominator is zero");
  }
  cfg.twist = optional_int(j, "twist", 0);

  if (j.contains("omega")) {
    if (!j["omega"].is_object()) bad_config("'omega' must be an object");
    if (j["omega"].contains("num")) cfg.omega_num = int_list(j["omega"]["num"], "'omega.num'");
    if (j["omega"].contains("den")) cfg.omega_den = int_list(j["omega"]["den"], "'omega.den'");
  }
  cfg.max_degree_override = optional_int(j, "max_degree_override", -1);

  if (j.contains("grid")) {
    if (!j["grid"].is_string()) bad_config("'grid' must be a string");
    cfg.grid = j["grid"].get<std::string>();
    if (cfg.grid != "a") bad_config("unsupported grid '" + cfg.grid + "' (only \"a\")");
    if (cfg.kummer.empty()) bad_config("grid \"a\" needs at least one kummer entry");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

FieldHandle context_of(const RunConfig& cfg) {
  return make_context(cfg.p, cfg.f, true, cfg.precision);
}

RankOneGlobalModule module_of(const RunConfig& cfg, const FieldHandle& K) {
  const FqHandle& k = K->residue;
  std::vector<std::pair<FqElem, long long>> pts;
  for (const auto& [code, a] : cfg.kummer) {
    if (code < 0 || code >= k->q) bad_config("kummer point encoding out of range");
    pts.emplace_back(FqElem::from_encoding(k, code), a);
  }
  if (cfg.dwork_c < 0 || cfg.dwork_c >= k->q) bad_config("dwork_c encoding out of range");
  PadicNumber u0 = PadicNumber::from_rational(K, cfg.scalar_num, cfg.scalar_den);
  return make_global_module(K, std::move(pts), FqElem::from_encoding(k, cfg.dwork_c), u0,
                            cfg.twist);
}

RationalForm omega_of(const RunConfig& cfg, const FieldHandle& K) {
  const FqHandle& k = K->residue;
  for (long long c : cfg.omega_num)
    if (c < 0 || c >= k->q) bad_config("omega coefficient encoding out of range");
  for (long long c : cfg.omega_den)
    if (c < 0 || c >= k->q) bad_config("omega coefficient encoding out of range");
  return make_form(FqPoly::from_encodings(k, cfg.omega_num),
                   FqPoly::from_encodings(k, cfg.omega_den));
}

std::string render_epsilon_report(const std::string& kind, const EpsilonReport& rep,
                                  bool with_timings, long long runtime_ms) {
  ordered_json j;
  j["schema"] = "peps-report/1";
  j["kind"] = kind;
  j["module"] = rep.module_text;
  j["omega"] = rep.omega_text;
  j["lhs"] = rep.lhs.to_string();
  j["rhs"] = rep.rhs.to_string();
  ordered_json factors = ordered_json::array();
  for (const auto& [label, value] : rep.factors) {
    ordered_json f;
    f["label"] = label;
    f["value"] = value;
    factors.push_back(f);
  }
  j["factors"] = factors;
  j["agreed_digits"] = rep.agreed;
  j["required_digits"] = rep.required;
  j["pass"] = rep.pass;
  if (with_timings) j["runtime_ms"] = runtime_ms;
  return j.dump();
}

std::string render_funceq_report(const FunceqReport& rep, bool with_timings,
                                 long long runtime_ms) {
  ordered_json j;
  j["schema"] = "peps-report/1";
  j["kind"] = "funceq";
  j["module"] = rep.module_text;
  j["epsilon"] = rep.epsilon.to_string();
  j["compared_coefficients"] = rep.compared;
  j["agreed_digits"] = rep.agreed;
  j["required_digits"] = rep.required;
  j["pass"] = rep.pass;
  if (with_timings) j["runtime_ms"] = runtime_ms;
  return j.dump();
}

std::string render_det_report(long long a, const DetFormulaReport& rep,
                              bool with_timings, long long runtime_ms) {
  ordered_json j;
  j["schema"] = "peps-report/1";
  j["kind"] = "detformula";
  j["a"] = a;
  j["lhs"] = rep.lhs.to_string();
  j["rhs"] = rep.rhs.to_string();
  j["agreed_digits"] = rep.agreed;
  j["required_digits"] = rep.required;
  j["pass"] = rep.pass;
  if (with_timings) j["runtime_ms"] = runtime_ms;
  return j.dump();
}

std::string render_gauss_report(const FieldHandle& K, long long a,
                                const PadicNumber& value, bool gk_pass,
                                long long gk_agreed) {
  ordered_json j;
  j["schema"] = "peps-report/1";
  j["kind"] = "gauss";
  j["p"] = K->p;
  j["f"] = K->f;
  j["a"] = a;
  j["value"] = value.to_string();
  j["valuation_num"] = value.is_zero_to_precision() ? -1 : value.valuation_pi();
  j["gross_koblitz_pass"] = gk_pass;
  j["gross_koblitz_agreed_digits"] = gk_agreed;
  return j.dump();
}

std::string render_lfunc_tsv(const RankOneGlobalModule& g, const LPolynomial& l) {
  std::ostringstream out;
  out << "# module\t" << g.to_string() << "\n";
  out << "# h0\t" << l.shape.h0 << "\th1\t" << l.shape.h1 << "\th2\t" << l.shape.h2 << "\n";
  if (l.shape.h0) out << "# e0\t" << l.e0.to_string() << "\n";
  if (l.shape.h2) out << "# e2\t" << l.e2.to_string() << "\n";
  out << "# tail_digits\t" << l.tail_digits << "\n";
  out << "k\tplain\ttwisted\n";
  for (size_t k = 0; k < l.plain.size(); ++k)
    out << k << "\t" << l.plain[k].to_string() << "\t" << l.twisted[k].to_string() << "\n";
  return out.str();
}

}  // namespace peps
