#pragma once

#include <string>
#include <utility>
#include <vector>

#include "peps/global.hpp"

namespace peps {

// One run configuration, read from a JSON file.  Points, the exponential
// parameter, and form coefficients are residue-field encodings; the scalar
// is a rational number lifted into the working field.
struct RunConfig {
  long long p = 0;
  int f = 1;
  long long precision = 24;
  std::vector<std::pair<long long, long long>> kummer;  // (point encoding, exponent)
  long long dwork_c = 0;
  long long scalar_num = 1;
  long long scalar_den = 1;
  long long twist = 0;
  std::vector<long long> omega_num{1};  // coefficient encodings, low to high
  std::vector<long long> omega_den{1};
  long long max_degree_override = -1;
  // Optional sweep: "a" reruns the verifier for every exponent value in
  // [1, q-2] substituted into the first Kummer entry.
  std::string grid;
};

// Throws std::invalid_argument with a line-oriented diagnostic on malformed
// input, unknown keys, or out-of-range values.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

FieldHandle context_of(const RunConfig& cfg);
RankOneGlobalModule module_of(const RunConfig& cfg, const FieldHandle& K);
RationalForm omega_of(const RunConfig& cfg, const FieldHandle& K);

// JSON renderings with a fixed key order and a schema tag; byte-stable for
// identical inputs.  runtime_ms is emitted only when with_timings is set.
std::string render_epsilon_report(const std::string& kind, const EpsilonReport& rep,
                                  bool with_timings, long long runtime_ms);
std::string render_funceq_report(const FunceqReport& rep, bool with_timings,
                                 long long runtime_ms);
std::string render_det_report(long long a, const DetFormulaReport& rep,
                              bool with_timings, long long runtime_ms);
std::string render_gauss_report(const FieldHandle& K, long long a,
                                const PadicNumber& value, bool gk_pass,
                                long long gk_agreed);

// Header line with the cohomology dimensions followed by one TSV row per
// coefficient: index, plain value, (-1)-twist display value.
std::string render_lfunc_tsv(const RankOneGlobalModule& g, const LPolynomial& l);

}  // namespace peps
