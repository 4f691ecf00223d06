// Acceptance gate: every release-blocking behavior checked at its stated
// tolerance, one PASS/FAIL line per item, nonzero exit on any failure.
//
// Determinism: every random input below uses a fixed seed, so reruns are
// byte-identical. The ensemble checks use n = 10^5; a full 10^6 run is
// available through the CLI (`sample --full`) but is not gated here.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ghzsep/classify.hpp"

#include "eigen_oracle.hpp"
#include "test_util.hpp"

using namespace ghzsep;

namespace {

int failures = 0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream ss;
  ss << std::setprecision(prec) << v;
  return ss.str();
}

std::string fmt_fixed(double v, int prec) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}

constexpr double kRoot8 = 2.8284271247461903;  // 2 sqrt(2)
constexpr std::uint64_t kEnsembleSeed = 20240817;
constexpr std::uint64_t kEnsembleN = 100000;

bool carries_certificate(Verdict v) {
  return v == Verdict::sep_abs_sum || v == Verdict::sep_mu || v == Verdict::sep_two_term;
}

// 1. The alpha family flags violation exactly below the 2 sqrt(2) crossover.
void criterion_1() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  for (double a : {2.0, 2.2, 2.5, 2.7, 2.8})
    if (!optimize_x(kay_state(a)).verdict.violated) {
      ok = false;
      d << "no violation at alpha " << fmt(a) << "; ";
    }
  for (double a : {kRoot8, 2.9, 3.5})
    if (optimize_x(kay_state(a)).verdict.violated) {
      ok = false;
      d << "false violation at alpha " << fmt(a) << "; ";
    }
  double lo = 2.0, hi = 3.5;  // violated at lo, clean at hi
  while (hi - lo > 1e-8)
    (optimize_x(kay_state(0.5 * (lo + hi))).verdict.violated ? lo : hi) = 0.5 * (lo + hi);
  const double crossover = 0.5 * (lo + hi);
  if (std::abs(crossover - kRoot8) > 1e-6) {
    ok = false;
    d << "crossover " << fmt(crossover, 10) << " is not 2 sqrt(2); ";
  }
  d << "crossover " << fmt(crossover, 10) << " (target " << fmt(kRoot8, 10) << "), "
    << fmt_fixed(seconds_since(t0), 2) << " s";
  report(1, "alpha-family boundary at 2 sqrt(2)", ok, d.str());
}

// 2. Normalization anchors and closed-form vs numeric agreement.
void criterion_2() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;

  const CriterionVector alt = {1.0, 1.0, -1.0, 1.0};
  const auto alt_closed = c_value(alt);
  if (alt_closed.method != CMethod::closed_form || std::abs(alt_closed.c - kRoot8) > 1e-9) {
    ok = false;
    d << "closed form C(1,1,-1,1) = " << fmt(alt_closed.c, 12) << "; ";
  }
  const auto alt_numeric = c_value_numeric(alt);
  if (std::abs(alt_numeric.c - kRoot8) > 1e-8) {
    ok = false;
    d << "numeric C(1,1,-1,1) = " << fmt(alt_numeric.c, 12) << "; ";
  }
  const CriterionVector ones = {1.0, 1.0, 1.0, 1.0};
  if (std::abs(c_value(ones).c - 4.0) > 1e-9 || std::abs(c_value_numeric(ones).c - 4.0) > 1e-8) {
    ok = false;
    d << "C(1,1,1,1) != 4; ";
  }

  testutil::Rng rng(20240817);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x0 = rng.uniform(-1.0, 1.0), x1 = rng.uniform(-1.0, 1.0);
    const double x2 = rng.uniform(-1.0, 1.0), x3 = rng.uniform(-1.0, 1.0);
    const double closed = c_value_closed_form(x0, x1, x2, x3).c;
    const double numeric = c_value_numeric({x0, x1, x2, x3}).c;
    worst = std::max(worst, std::abs(closed - numeric));
  }
  const double elapsed = seconds_since(t0);
  if (worst > 1e-6) {
    ok = false;
    d << "closed vs numeric drift " << fmt(worst, 6) << "; ";
  }
  if (elapsed > 60.0) {
    ok = false;
    d << "too slow; ";
  }
  d << "worst closed-vs-numeric gap " << fmt(worst, 3) << " over 10^3 vectors, "
    << fmt_fixed(elapsed, 2) << " s";
  report(2, "normalization C anchors", ok, d.str());
}

// 3 + 4. Ensemble fractions at n = 10^5, and criterion dominance over PPT.
void criteria_3_and_4() {
  const auto t0 = Clock::now();
  const auto rep = run_ensemble(kEnsembleN, kEnsembleSeed);
  const double elapsed = seconds_since(t0);

  struct Band {
    const char* label;
    double got;     // percent
    double target;  // percent
    double tol;     // percentage points
  };
  const Band bands[] = {
      {"entangled", 100.0 * rep.entangled_fraction(), 91.32, 0.5},
      {"NPT", 100.0 * rep.fraction(Verdict::npt), 90.61, 0.5},
      {"PPT-but-violating", 100.0 * rep.bound_entangled_fraction(), 0.71, 0.15},
      {"separable", 100.0 * rep.separable_fraction(), 8.68, 0.5},
      {"direct tier", 100.0 * rep.direct_tier_fraction(), 8.41, 0.5},
      {"search tier", 100.0 * rep.search_tier_fraction(), 0.27, 0.15},
  };
  bool ok = true;
  std::ostringstream d;
  for (const Band& b : bands) {
    if (std::abs(b.got - b.target) > b.tol) {
      ok = false;
      d << b.label << " " << fmt_fixed(b.got, 3) << "% outside " << fmt_fixed(b.target, 2) << " +/- "
        << fmt_fixed(b.tol, 2) << " pp; ";
    }
  }
  const double undecided_pct = 100.0 * rep.fraction(Verdict::undecided);
  if (undecided_pct > 0.05) {
    ok = false;
    d << "undecided " << fmt_fixed(undecided_pct, 3) << "% > 0.05%; ";
  }
  if (elapsed > 900.0) {
    ok = false;
    d << "runtime " << fmt_fixed(elapsed, 1) << " s > 15 min; ";
  }
  d << "entangled " << fmt_fixed(100.0 * rep.entangled_fraction(), 3) << "%, NPT "
    << fmt_fixed(100.0 * rep.fraction(Verdict::npt), 3) << "%, PPT-violating "
    << fmt_fixed(100.0 * rep.bound_entangled_fraction(), 3) << "%, separable "
    << fmt_fixed(100.0 * rep.separable_fraction(), 3) << "% (tiers "
    << fmt_fixed(100.0 * rep.direct_tier_fraction(), 3) << "% / "
    << fmt_fixed(100.0 * rep.search_tier_fraction(), 3) << "%), undecided "
    << fmt_fixed(undecided_pct, 3) << "%, " << fmt_fixed(elapsed, 1) << " s";
  report(3, "random-ensemble fractions at n = 10^5", ok, d.str());

  std::ostringstream d4;
  d4 << rep.npt_criterion_escapes << " NPT states escaped the criterion out of "
     << rep.counts[static_cast<size_t>(Verdict::npt)];
  report(4, "criterion dominance over the partial-transpose test", rep.npt_criterion_escapes == 0,
         d4.str());
}

// 5. Soundness: separable mixtures never flagged; product states saturate.
void criterion_5() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  testutil::Rng rng(424242);
  int old_viol = 0, obs_viol = 0, w_viol = 0;
  double worst_sat = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int k = 1 + static_cast<int>(rng.uniform01() * 8.0);
    const auto rho = testutil::random_product_mixture(rng, std::min(k, 8), false);
    if (old_criterion(rho).violated) ++old_viol;
    if (optimize_x(rho).verdict.violated) ++obs_viol;
    if (w_criterion(rho).violated) ++w_viol;

    const auto pure = testutil::random_product(rng, false);
    const auto oc = old_criterion(pure.rho);
    worst_sat = std::max({worst_sat, std::abs(oc.lhs - oc.bound_six),
                          std::abs(oc.lhs - oc.bound_four)});
  }
  if (old_viol + obs_viol + w_viol > 0) {
    ok = false;
    d << old_viol << "/" << obs_viol << "/" << w_viol
      << " false positives (diagonal/observation/W); ";
  }
  if (worst_sat > 1e-10) {
    ok = false;
    d << "saturation drift " << fmt(worst_sat, 6) << " > 1e-10; ";
  }
  d << "0 false positives over 10^4 mixtures, product saturation within " << fmt(worst_sat, 3)
    << ", " << fmt_fixed(seconds_since(t0), 1) << " s";
  report(5, "soundness on random separable mixtures", ok, d.str());
}

// 6. Every certificate from the n = 10^5 ensemble re-validates; no verdict
//    simultaneously claims entanglement evidence and a certificate.
void criterion_6() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  std::uint64_t certs = 0, conflicts = 0, invalid = 0, missing = 0;
  double worst_eig = 0.0, worst_pauli = 0.0;
  std::uint64_t done = 0;
  for (std::uint64_t chunk = 0; done < kEnsembleN; ++chunk) {
    SimplexSampler sampler(derive_stream_seed(kEnsembleSeed, chunk));
    const std::uint64_t m = std::min<std::uint64_t>(kEnsembleChunk, kEnsembleN - done);
    for (std::uint64_t i = 0; i < m; ++i, ++done) {
      const auto s = ghz_diagonal_from_probs(sampler.next());
      const auto rec = classify_state(s);
      if (carries_certificate(rec.verdict) && !rec.certificate.has_value()) {
        ++missing;
        continue;
      }
      if (!rec.certificate.has_value()) continue;
      ++certs;
      // evidence recorded before the certificate branch must stay clean
      bool npt = false;
      for (double eig : rec.pt_min_eig) npt = npt || eig < kPsdThreshold;
      if (npt || rec.criterion.verdict.violated) ++conflicts;
      try {
        const auto witness = build_separable_witness_state(*rec.certificate, s);
        const auto eigs = hermitian_eigenvalues(witness.matrix());
        worst_eig = std::min(worst_eig, eigs.front());
        for (int k = 0; k < 7; ++k) {
          const double got =
              pauli_expectation(witness.matrix(), kGhzPauliWords[static_cast<size_t>(k)]);
          worst_pauli = std::max(worst_pauli,
                                 std::abs(got - s.lambdas[static_cast<size_t>(k)]));
        }
        if (eigs.front() < -1e-10) ++invalid;
      } catch (const std::exception&) {
        ++invalid;
      }
    }
  }
  if (worst_pauli > 1e-9) ++invalid;
  if (invalid + conflicts + missing > 0) {
    ok = false;
    d << invalid << " invalid, " << conflicts << " conflicting, " << missing
      << " missing certificates; ";
  }
  if (certs == 0) {
    ok = false;
    d << "no certificates issued; ";
  }
  d << certs << " certificates re-validated (min eigenvalue " << fmt(worst_eig, 3)
    << ", worst Pauli-weight gap " << fmt(worst_pauli, 3) << "), "
    << fmt_fixed(seconds_since(t0), 1) << " s";
  report(6, "certificate re-validation over the full ensemble", ok, d.str());
}

// 7. Separability certificates at and just above the alpha-family crossover.
void criterion_7() {
  bool ok = true;
  std::ostringstream d;
  for (double a : {3.0, kRoot8 + 1e-3}) {
    const auto s = ghz_diagonal_from_state(kay_state(a));
    const auto rec = classify_state(s);
    if (!rec.certificate.has_value() || !carries_certificate(rec.verdict) ||
        !rec.certificate->valid()) {
      ok = false;
      d << "no valid certificate at alpha " << fmt(a, 12) << "; ";
      continue;
    }
    try {
      (void)build_separable_witness_state(*rec.certificate, s);
    } catch (const std::exception& e) {
      ok = false;
      d << "witness rejected at alpha " << fmt(a, 12) << ": " << e.what() << "; ";
      continue;
    }
    d << "alpha " << fmt(a, 8) << ": " << to_string(rec.certificate->method) << " budget "
      << fmt(rec.certificate->budget, 8) << "; ";
  }
  report(7, "alpha-family certificates at and near the crossover", ok, d.str());
}

// 8. W-vicinity family: violations, the exact anchor value, filter covariance.
void criterion_8() {
  bool ok = true;
  std::ostringstream d;
  const double eta_anchor = std::sqrt(1.5);
  for (double eta : {0.5, eta_anchor, 3.0})
    if (!w_criterion(hyllus_state(eta)).violated) {
      ok = false;
      d << "no violation at eta " << fmt(eta) << "; ";
    }
  const double lhs = w_criterion(hyllus_state(eta_anchor)).lhs;
  const double lhs_target = 1.0 / (1.0 + std::sqrt(8.0 / 3.0));
  if (std::abs(lhs - lhs_target) > 1e-9) {
    ok = false;
    d << "anchor LHS " << fmt(lhs, 12) << " != " << fmt(lhs_target, 12) << "; ";
  }
  double worst = 0.0;
  for (double eta : {0.5, eta_anchor, 3.0})
    for (double x : {0.8, 1.3}) {
      const auto filtered = apply_filter(hyllus_state(eta), x);
      const auto target = hyllus_state(eta / std::pow(x, 6.0));
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          worst = std::max(worst, std::abs(filtered.at(i, j) - target.at(i, j)));
    }
  if (worst > 1e-12) {
    ok = false;
    d << "filter covariance drift " << fmt(worst, 6) << " > 1e-12; ";
  }
  d << "anchor LHS " << fmt(lhs, 12) << ", filter covariance within " << fmt(worst, 3);
  report(8, "W-vicinity family behavior under the W bound and filtering", ok, d.str());
}

// 9. Analytic shortcuts against the independent eigensolver.
void criterion_9() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;

  const ComplexMatrix zzi = pauli_word_matrix("ZZI");
  const ComplexMatrix ziz = pauli_word_matrix("ZIZ");
  const ComplexMatrix izz = pauli_word_matrix("IZZ");
  testutil::Rng rng(31337);
  double worst_lm = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double l2 = rng.uniform(-1.0, 1.0);
    const double l3 = rng.uniform(-1.0, 1.0);
    const double l4 = rng.uniform(-1.0, 1.0);
    const ComplexMatrix m = cplx(l2) * zzi + cplx(l3) * ziz + cplx(l4) * izz;
    const auto eigs = testutil::eigen_eigenvalues(m);
    worst_lm = std::max(worst_lm, std::abs(lambda_minus(l2, l3, l4) - eigs.front()));
  }
  if (worst_lm > 1e-12) {
    ok = false;
    d << "lambda_minus drift " << fmt(worst_lm, 6) << " > 1e-12; ";
  }

  // PPT shortcut |rho_18| <= sqrt(rho_44 rho_55) and its three partners
  // against the full first-party partial-transpose spectrum.
  SimplexSampler sampler(777);
  double worst_pt = 0.0;
  int sign_conflicts = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = ghz_diagonal_from_probs(sampler.next());
    const ComplexMatrix& m = s.rho.matrix();
    const auto eigs = testutil::eigen_eigenvalues(partial_transpose(m, Party::A));
    const double full_min = eigs.front();
    const std::array<double, 4> margins = {
        std::sqrt(m.at(3, 3).real() * m.at(4, 4).real()) - std::abs(m.at(0, 7)),
        std::sqrt(m.at(2, 2).real() * m.at(5, 5).real()) - std::abs(m.at(1, 6)),
        std::sqrt(m.at(1, 1).real() * m.at(6, 6).real()) - std::abs(m.at(2, 5)),
        std::sqrt(m.at(0, 0).real() * m.at(7, 7).real()) - std::abs(m.at(3, 4))};
    const double shortcut_min = *std::min_element(margins.begin(), margins.end());
    worst_pt = std::max(worst_pt, std::abs(shortcut_min - full_min));
    if (margins[0] < -1e-12 && full_min >= 0.0) ++sign_conflicts;
    if (shortcut_min < -1e-12 && full_min >= -1e-15) ++sign_conflicts;
    if (shortcut_min > 1e-12 && full_min < -1e-15) ++sign_conflicts;
  }
  if (worst_pt > 1e-12) {
    ok = false;
    d << "PT shortcut drift " << fmt(worst_pt, 6) << " > 1e-12; ";
  }
  if (sign_conflicts > 0) {
    ok = false;
    d << sign_conflicts << " eigenvalue-sign conflicts; ";
  }
  d << "lambda_minus within " << fmt(worst_lm, 3) << ", PT shortcut within " << fmt(worst_pt, 3)
    << " over 10^4 samples each, " << fmt_fixed(seconds_since(t0), 1) << " s";
  report(9, "analytic minima against the independent eigensolver", ok, d.str());
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criteria_3_and_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%s: %d of 9 criteria failed, %.1f s total\n", failures == 0 ? "OK" : "FAILED",
              failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
