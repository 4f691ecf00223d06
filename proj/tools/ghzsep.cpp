// Command-line surface: construct three-qubit states, analyze a state
// end-to-end (partial transposes, criteria, certificates), run Monte Carlo
// ensembles, and evaluate the criterion normalization C(X).
//
// Exit codes for `analyze`: 0 separable-certified, 1 entangled, 2 undecided,
// 3 malformed input. Other subcommands: 0 on success, 3 on bad input.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghzsep/analyze.hpp"
#include "ghzsep/classify.hpp"
#include "ghzsep/criterion.hpp"
#include "ghzsep/json_io.hpp"
#include "ghzsep/states.hpp"

namespace {

using ghzsep::cplx;

int fail(const std::string& msg) {
  std::cerr << "ghzsep: " << msg << "\n";
  return 3;
}

std::vector<double> parse_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size()) throw std::invalid_argument("trailing junk in number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

// One complex number "re,im"; lists are whitespace-separated tokens.
cplx parse_complex(const std::string& tok) {
  const auto parts = parse_csv(tok);
  if (parts.size() != 2)
    throw std::invalid_argument("expected 're,im' but got '" + tok + "'");
  return {parts[0], parts[1]};
}

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) out.push_back(parse_complex(tok));
  return out;
}

ghzsep::DensityMatrix state_from_json(const nlohmann::json& j) {
  if (j.contains("matrix")) {
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != 8)
      throw std::invalid_argument("matrix must have 8 rows");
    ghzsep::ComplexMatrix m(8);
    for (int i = 0; i < 8; ++i) {
      const auto& row = rows.at(static_cast<size_t>(i));
      if (!row.is_array() || row.size() != 8)
        throw std::invalid_argument("matrix row must have 8 entries");
      for (int k = 0; k < 8; ++k) {
        const auto& e = row.at(static_cast<size_t>(k));
        if (!e.is_array() || e.size() != 2)
          throw std::invalid_argument("matrix entries must be [re, im] pairs");
        m.at(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    return ghzsep::DensityMatrix::from_matrix(m);
  }
  if (j.contains("ghz_probs")) {
    const auto& ps = j.at("ghz_probs");
    if (!ps.is_array() || ps.size() != 8)
      throw std::invalid_argument("ghz_probs must have 8 entries");
    std::array<double, 8> p{};
    for (int i = 0; i < 8; ++i) p[static_cast<size_t>(i)] = ps.at(static_cast<size_t>(i)).get<double>();
    return ghzsep::ghz_diagonal_from_probs(p).rho;
  }
  if (j.contains("family")) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "kay") return ghzsep::kay_state(j.at("alpha").get<double>());
    if (family == "hyllus") return ghzsep::hyllus_state(j.at("eta").get<double>());
    throw std::invalid_argument("unknown family '" + family + "'");
  }
  throw std::invalid_argument(
      "state JSON must contain 'matrix', 'ghz_probs', or 'family'");
}

int run_state(const std::string& family, double alpha, double eta, const std::string& probs_csv,
              const std::string& lambdas_csv, const std::string& c_str,
              const std::string& s_str) {
  try {
    ghzsep::DensityMatrix rho = [&] {
      if (family == "kay") return ghzsep::kay_state(alpha);
      if (family == "hyllus") return ghzsep::hyllus_state(eta);
      if (family == "ghz-probs") {
        const auto v = parse_csv(probs_csv);
        if (v.size() != 8) throw std::invalid_argument("--p needs 8 comma-separated values");
        std::array<double, 8> p{};
        std::copy(v.begin(), v.end(), p.begin());
        return ghzsep::ghz_diagonal_from_probs(p).rho;
      }
      if (family == "ghz-lambdas") {
        const auto v = parse_csv(lambdas_csv);
        if (v.size() != 7) throw std::invalid_argument("--l needs 7 comma-separated values");
        std::array<double, 7> l{};
        std::copy(v.begin(), v.end(), l.begin());
        return ghzsep::ghz_diagonal_from_lambdas(l).rho;
      }
      // product
      const auto c = parse_complex_list(c_str);
      const auto s = parse_complex_list(s_str);
      if (c.size() != 3 || s.size() != 3)
        throw std::invalid_argument("--c and --s each need 3 're,im' tokens");
      return ghzsep::product_state({c[0], c[1], c[2]}, {s[0], s[1], s[2]}).rho;
    }();
    std::cout << ghzsep::state_json(rho) << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail(std::string("not a state: ") + e.what());
  }
}

int run_analyze(const std::string& path, double tol) {
  nlohmann::json j;
  try {
    if (path.empty() || path == "-") {
      j = nlohmann::json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) return fail("cannot open '" + path + "'");
      j = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::exception& e) {
    return fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    const auto rho = state_from_json(j);
    const auto rep = ghzsep::analyze_state(rho, -std::abs(tol));
    std::cout << ghzsep::analysis_report_json(rep, rho) << "\n";
    return rep.exit_code;
  } catch (const std::exception& e) {
    return fail(std::string("not a state: ") + e.what());
  }
}

int run_sample(std::uint64_t count, bool full, std::uint64_t seed, const std::string& format) {
  if (full) count = 1000000;
  const auto report = ghzsep::run_ensemble(count, seed);
  const double se = report.stderr_of(report.entangled_fraction());
  if (se > 0.01) {
    char pp[32];
    std::snprintf(pp, sizeof pp, "%.1f", 100.0 * se);
    std::cerr << "ghzsep: note: n = " << count
              << " leaves a statistical error of about +/-" << pp
              << " pp on the entangled fraction\n";
  }
  if (format == "json")
    std::cout << ghzsep::ensemble_report_json(report) << "\n";
  else
    std::cout << ghzsep::ensemble_report_table(report);
  return 0;
}

int run_cvalue(const std::string& x_str) {
  try {
    const auto xs = parse_complex_list(x_str);
    if (xs.size() != 4)
      throw std::invalid_argument("--x needs 4 're,im' tokens");
    double scale = 0.0;
    for (const auto& x : xs) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) throw std::invalid_argument("X must not be the zero vector");
    const ghzsep::CriterionVector x = {xs[0], xs[1], xs[2], xs[3]};
    const auto res = ghzsep::c_value(x);
    ghzsep::JsonWriter w;
    w.begin_object();
    w.key("x");
    w.begin_array();
    for (const auto& xi : x) w.value(xi);
    w.end_array();
    w.key("c");
    w.value(res.c);
    w.key("method");
    w.value(ghzsep::to_string(res.method));
    w.key("maximizer");
    w.begin_array();
    for (double a : res.maximizer) w.value(a);
    w.end_array();
    if (res.has_qr) {
      w.key("q");
      w.value(res.q);
      w.key("r");
      w.value(res.r);
    }
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement criteria and separability certificates for three-qubit states"};
  app.require_subcommand(1);

  std::uint64_t seed = 7;
  double tol = 1e-10;
  std::string format = "table";
  app.add_option("--seed", seed, "Random seed for sampling subcommands");
  app.add_option("--tol", tol, "PSD decision threshold (default 1e-10)");
  app.add_option("--format", format, "Output format for sample")
      ->check(CLI::IsMember({"json", "table"}));

  auto* state = app.add_subcommand("state", "Construct a state and print its JSON");
  state->fallthrough();
  std::string family;
  double alpha = 3.0, eta = 1.5;
  std::string probs_csv, lambdas_csv, c_str, s_str;
  state->add_option("--family", family, "kay | hyllus | ghz-probs | ghz-lambdas | product")
      ->required()
      ->check(CLI::IsMember({"kay", "hyllus", "ghz-probs", "ghz-lambdas", "product"}));
  state->add_option("--alpha", alpha, "kay family parameter (>= 2)");
  state->add_option("--eta", eta, "hyllus family parameter (> 0)");
  state->add_option("--p", probs_csv, "ghz-probs: 8 comma-separated probabilities");
  state->add_option("--l", lambdas_csv, "ghz-lambdas: 7 comma-separated weights");
  state->add_option("--c", c_str, "product: 3 're,im' zero-amplitudes");
  state->add_option("--s", s_str, "product: 3 're,im' one-amplitudes");

  auto* analyze = app.add_subcommand("analyze", "Analyze a state JSON (file or stdin)");
  analyze->fallthrough();
  std::string input_path;
  analyze->add_option("file", input_path, "Input path (default: stdin)");

  auto* sample = app.add_subcommand("sample", "Classify a random ensemble");
  sample->fallthrough();
  std::uint64_t count = 100000;
  bool full = false;
  sample->add_option("--count", count, "Number of states")->check(CLI::PositiveNumber);
  sample->add_flag("--full", full, "Paper-scale run (count = 10^6)");

  auto* cvalue = app.add_subcommand("cvalue", "Evaluate the normalization C(X)");
  cvalue->fallthrough();
  std::string x_str;
  cvalue->add_option("--x", x_str, "4 complex entries as 're,im re,im re,im re,im'")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (state->parsed())
    return run_state(family, alpha, eta, probs_csv, lambdas_csv, c_str, s_str);
  if (analyze->parsed()) return run_analyze(input_path, tol);
  if (sample->parsed()) return run_sample(count, full, seed, format);
  return run_cvalue(x_str);
}
