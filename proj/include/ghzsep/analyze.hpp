#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "ghzsep/classify.hpp"
#include "ghzsep/criterion.hpp"
#include "ghzsep/json_io.hpp"
#include "ghzsep/linalg.hpp"
#include "ghzsep/separability.hpp"
#include "ghzsep/states.hpp"

// Whole-state analysis: partial-transpose positivity, all three entanglement
// criteria, separability certificates when the state is diagonal in the GHZ
// basis, and one final verdict with a stable exit-code mapping
// (0 = separable-certified, 1 = entangled, 2 = undecided).

namespace ghzsep {

struct AnalysisReport {
  std::array<double, 3> pt_min_eig{};
  bool npt = false;
  OldCriterionResult old_crit;
  OptimizeXResult observation;
  WCriterionResult w;
  WFilteredResult w_filtered;
  bool ghz_diagonal = false;
  std::optional<GhzDiagonalState> ghz;
  std::optional<Verdict> classification;  // set when ghz_diagonal
  std::optional<SeparabilityCertificate> certificate;
  std::string verdict;
  int exit_code = 2;
};

inline AnalysisReport analyze_state(const DensityMatrix& rho,
                                    double psd_threshold = kPsdThreshold) {
  AnalysisReport rep;

  const std::array<Party, 3> parties = {Party::A, Party::B, Party::C};
  for (int i = 0; i < 3; ++i) {
    const double eig = min_eigenvalue_after_pt(rho.matrix(), parties[static_cast<size_t>(i)]);
    rep.pt_min_eig[static_cast<size_t>(i)] = eig;
    rep.npt = rep.npt || eig < psd_threshold;
  }
  rep.old_crit = old_criterion(rho);
  rep.observation = optimize_x(rho);
  rep.w = w_criterion(rho);
  rep.w_filtered = w_criterion_filtered(rho);

  try {
    rep.ghz = ghz_diagonal_from_state(rho);
    rep.ghz_diagonal = true;
  } catch (const std::invalid_argument&) {
    rep.ghz_diagonal = false;
  }

  auto entangled = [&](const char* why) {
    rep.verdict = why;
    rep.exit_code = 1;
  };

  if (rep.ghz_diagonal) {
    // Same decision order as the ensemble classifier, reusing the evidence
    // computed above instead of re-running it.
    const auto& s = *rep.ghz;
    Verdict v = Verdict::undecided;
    if (rep.npt) {
      v = Verdict::npt;
    } else if (rep.observation.verdict.violated) {
      v = Verdict::ppt_violating;
    } else if (auto cert = abs_sum_certificate(s)) {
      rep.certificate = std::move(cert);
      v = Verdict::sep_abs_sum;
    } else if (s.lambdas[3] * s.lambdas[4] * s.lambdas[5] * s.lambdas[6] < 0.0) {
      v = Verdict::sep_ppt_sufficient;
    } else if (auto cert = mu_certificate(s)) {
      rep.certificate = std::move(cert);
      v = Verdict::sep_mu;
    } else if (auto cert = two_term_certificate(s)) {
      rep.certificate = std::move(cert);
      v = Verdict::sep_two_term;
    }
    rep.classification = v;
    switch (v) {
      case Verdict::npt: entangled("entangled (NPT)"); break;
      case Verdict::ppt_violating: entangled("entangled (PPT, criterion violated)"); break;
      case Verdict::sep_abs_sum:
      case Verdict::sep_mu:
      case Verdict::sep_two_term:
        rep.verdict = "separable (certificate)";
        rep.exit_code = 0;
        break;
      case Verdict::sep_ppt_sufficient:
        rep.verdict = "separable (PPT sufficient)";
        rep.exit_code = 0;
        break;
      case Verdict::undecided:
        rep.verdict = "undecided";
        rep.exit_code = 2;
        break;
    }
    return rep;
  }

  if (rep.npt) {
    entangled("entangled (NPT)");
  } else if (rep.old_crit.violated || rep.observation.verdict.violated || rep.w.violated ||
             rep.w_filtered.violated) {
    entangled("entangled (PPT, criterion violated)");
  } else {
    rep.verdict = "undecided";
    rep.exit_code = 2;
  }
  return rep;
}

inline void write_matrix_json(JsonWriter& w, const ComplexMatrix& m) {
  w.begin_array();
  for (int i = 0; i < m.dim(); ++i) {
    w.begin_array();
    for (int j = 0; j < m.dim(); ++j) w.value(m.at(i, j));
    w.end_array();
  }
  w.end_array();
}

inline std::string state_json(const DensityMatrix& rho) {
  JsonWriter w;
  w.begin_object();
  w.key("matrix");
  write_matrix_json(w, rho.matrix());
  w.end_object();
  return w.str();
}

inline void write_certificate_json(JsonWriter& w, const SeparabilityCertificate& cert) {
  w.begin_object();
  w.key("method");
  w.value(to_string(cert.method));
  w.key("lambda_minus");
  w.value(cert.lambda_minus);
  w.key("budget");
  w.value(cert.budget);
  w.key("mu");
  w.value(cert.mu);
  w.key("p");
  w.value(cert.p);
  auto triple = [&](const char* name, const std::array<double, 3>& t) {
    w.key(name);
    w.begin_array();
    for (double v : t) w.value(v);
    w.end_array();
  };
  triple("r", cert.r);
  triple("theta", cert.theta);
  triple("r_hat", cert.r_hat);
  triple("theta_hat", cert.theta_hat);
  w.key("eta");
  w.value(cert.eta);
  w.key("eta_hat");
  w.value(cert.eta_hat);
  w.end_object();
}

inline std::string analysis_report_json(const AnalysisReport& rep, const DensityMatrix& rho) {
  JsonWriter w;
  w.begin_object();
  w.key("input");
  w.begin_object();
  w.key("matrix");
  write_matrix_json(w, rho.matrix());
  w.end_object();

  w.key("ppt");
  w.begin_object();
  w.key("min_eigenvalues");
  w.begin_array();
  for (double eig : rep.pt_min_eig) w.value(eig);
  w.end_array();
  w.key("npt");
  w.value(rep.npt);
  w.end_object();

  w.key("old_criterion");
  w.begin_object();
  w.key("lhs");
  w.value(rep.old_crit.lhs);
  w.key("bound_six");
  w.value(rep.old_crit.bound_six);
  w.key("bound_four");
  w.value(rep.old_crit.bound_four);
  w.key("violated");
  w.value(rep.old_crit.violated);
  w.end_object();

  w.key("observation");
  w.begin_object();
  w.key("x");
  w.begin_array();
  for (const auto& xi : rep.observation.x) w.value(xi);
  w.end_array();
  w.key("l_value");
  w.value(rep.observation.verdict.l_value);
  w.key("c_value");
  w.value(rep.observation.verdict.c_value);
  w.key("c_method");
  w.value(to_string(rep.observation.verdict.cval.method));
  w.key("kappa_min");
  w.value(rep.observation.verdict.kappa_min);
  w.key("kappa_term");
  w.value(rep.observation.verdict.kappa_term_used);
  w.key("bound");
  w.value(rep.observation.verdict.bound);
  w.key("violated");
  w.value(rep.observation.verdict.violated);
  w.end_object();

  w.key("w_criterion");
  w.begin_object();
  w.key("lhs");
  w.value(rep.w.lhs);
  w.key("rhs");
  w.value(rep.w.rhs);
  w.key("violated");
  w.value(rep.w.violated);
  w.key("filtered");
  w.begin_object();
  w.key("violated");
  w.value(rep.w_filtered.violated);
  w.key("x");
  w.value(rep.w_filtered.x);
  w.key("lhs");
  w.value(rep.w_filtered.best.lhs);
  w.key("rhs");
  w.value(rep.w_filtered.best.rhs);
  w.end_object();
  w.end_object();

  w.key("ghz_diagonal");
  w.value(rep.ghz_diagonal);
  if (rep.ghz_diagonal) {
    w.key("lambdas");
    w.begin_array();
    for (double l : rep.ghz->lambdas) w.value(l);
    w.end_array();
    w.key("classification");
    w.value(to_string(*rep.classification));
  }

  w.key("certificate");
  if (rep.certificate) {
    write_certificate_json(w, *rep.certificate);
  } else {
    w.value_null();
  }

  w.key("verdict");
  w.value(rep.verdict);
  w.key("exit_code");
  w.value(rep.exit_code);
  w.end_object();
  return w.str();
}

}  // namespace ghzsep
