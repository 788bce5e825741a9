// Command-line front end: gauss (single character-sum evaluation with the
// Gamma-product cross-check), verify (epsilon-factor identities from a
// config), lfunc (L-polynomial table).  Exit codes: 0 all pass, 1 a
// verification failed or a computation aborted, 2 usage or config error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "peps/report.hpp"

using namespace peps;

namespace {

struct Sink {
  std::ofstream file;
  bool to_file = false;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    to_file = true;
  }
  std::ostream& out() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
};

long long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

int run_gauss(long long p, int f, long long a, long long precision, Sink& sink) {
  auto K = make_context(p, f, true, precision);
  PadicNumber value = gauss_sum(K, a);
  auto gk = gross_koblitz_check(K, a, std::min<long long>(20, precision - 4));
  sink.out() << render_gauss_report(K, a, value, gk.pass, gk.agreed) << "\n";
  return gk.pass ? 0 : 1;
}

// Exponent sweep for grid "a": every value in [1, q-2] lands in the first
// Kummer entry; without a grid the config is run as-is.
std::vector<RunConfig> expand_grid(const RunConfig& cfg, const FieldHandle& K) {
  std::vector<RunConfig> out;
  if (cfg.grid.empty()) {
    out.push_back(cfg);
  } else {
    for (long long a = 1; a <= K->residue->q - 2; ++a) {
      RunConfig c = cfg;
      c.kummer[0].second = a;
      out.push_back(c);
    }
  }
  return out;
}

int run_verify(const std::string& config_path, const std::string& which,
               long long threshold, int workers, bool timings, Sink& sink) {
  RunConfig cfg = load_config(config_path);
  auto K = context_of(cfg);
  const long long required = threshold >= 0 ? threshold : cfg.precision - 4;

  bool all_pass = true;
  auto emit = [&](const std::string& line, bool pass) {
    sink.out() << line << "\n";
    all_pass = all_pass && pass;
  };

  for (const RunConfig& c : expand_grid(cfg, K)) {
    if (which == "pf" || which == "all") {
      auto t0 = std::chrono::steady_clock::now();
      auto rep = verify_product_formula(module_of(c, K), omega_of(c, K), required, workers);
      emit(render_epsilon_report("product_formula", rep, timings, elapsed_ms(t0)), rep.pass);
    }
    if (which == "puncture" || which == "all") {
      RankOneGlobalModule g = module_of(c, K);
      if (g.exponent_at_infinity() == 0 && g.dwork_c.is_zero()) {
        auto t0 = std::chrono::steady_clock::now();
        auto rep = verify_puncture_formula(g, required, workers);
        emit(render_epsilon_report("puncture", rep, timings, elapsed_ms(t0)), rep.pass);
      } else if (which == "puncture") {
        throw std::invalid_argument(
            "puncture needs a module unramified at infinity (exponents summing "
            "to 0 mod q-1, no dwork_c)");
      }
    }
    if (which == "detformula" || which == "all") {
      for (const auto& [point, a] : c.kummer) {
        auto t0 = std::chrono::steady_clock::now();
        auto m = make_local_module(K, a, FqElem::zero(K->residue),
                                   PadicNumber::from_rational(K, c.scalar_num, c.scalar_den),
                                   c.twist, Boundary::shriek);
        auto rep = determinant_formula_check(m, required);
        emit(render_det_report(a, rep, timings, elapsed_ms(t0)), rep.pass);
      }
    }
    if (which == "funceq" || which == "all") {
      auto t0 = std::chrono::steady_clock::now();
      auto rep = functional_equation_check(module_of(c, K), required, workers);
      emit(render_funceq_report(rep, timings, elapsed_ms(t0)), rep.pass);
    }
  }
  return all_pass ? 0 : 1;
}

int run_lfunc(const std::string& config_path, int workers, Sink& sink) {
  RunConfig cfg = load_config(config_path);
  auto K = context_of(cfg);
  RankOneGlobalModule g = module_of(cfg, K);
  LPolynomial l = l_polynomial(g, workers, cfg.max_degree_override);
  sink.out() << render_lfunc_tsv(g, l);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact epsilon-factor and L-function workbench over p-adic fields"};
  app.require_subcommand(1);

  long long p = 0, a = 1, precision = 24, threshold = -1;
  int f = 1, workers = 1;
  bool timings = false;
  std::string config_path, which = "all", out_path;

  auto* gauss = app.add_subcommand("gauss", "evaluate a Gauss sum with the Gamma-product check");
  gauss->add_option("--p", p, "prime")->required();
  gauss->add_option("--f", f, "residue degree (1 or 2)");
  gauss->add_option("--a", a, "character exponent");
  gauss->add_option("--precision", precision, "working precision in pi-digits");
  gauss->add_option("--out", out_path, "write the report to a file");

  auto* verify = app.add_subcommand("verify", "run epsilon-factor identities from a config");
  verify->add_option("--config", config_path, "JSON run configuration")->required();
  verify->add_option("--which", which, "pf, puncture, detformula, funceq, or all")
      ->check(CLI::IsMember({"pf", "puncture", "detformula", "funceq", "all"}));
  verify->add_option("--threshold-digits", threshold, "required agreement (default precision - 4)");
  verify->add_option("--workers", workers, "threads for point enumeration")
      ->check(CLI::Range(1, 64));
  verify->add_flag("--timings", timings, "include runtime_ms in reports");
  verify->add_option("--out", out_path, "write reports to a file");

  auto* lfunc = app.add_subcommand("lfunc", "print the L-polynomial table for a config");
  lfunc->add_option("--config", config_path, "JSON run configuration")->required();
  lfunc->add_option("--workers", workers, "threads for point enumeration")
      ->check(CLI::Range(1, 64));
  lfunc->add_option("--out", out_path, "write the table to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Sink sink;
    sink.open(out_path);
    if (gauss->parsed()) return run_gauss(p, f, a, precision, sink);
    if (verify->parsed()) return run_verify(config_path, which, threshold, workers, timings, sink);
    return run_lfunc(config_path, workers, sink);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
