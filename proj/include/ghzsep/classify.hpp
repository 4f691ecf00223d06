#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "ghzsep/criterion.hpp"
#include "ghzsep/json_io.hpp"
#include "ghzsep/linalg.hpp"
#include "ghzsep/separability.hpp"
#include "ghzsep/states.hpp"

// Monte Carlo classification of random GHZ-diagonal states: each state gets
// exactly one verdict from a fixed decision order, and an ensemble run
// aggregates the verdict fractions (the PPT-but-violating fraction estimates
// the bound-entangled volume).

namespace ghzsep {

enum class Verdict {
  npt,
  ppt_violating,
  sep_abs_sum,
  sep_mu,
  sep_two_term,
  sep_ppt_sufficient,
  undecided,
};

inline constexpr int kVerdictCount = 7;

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::npt: return "NPT";
    case Verdict::ppt_violating: return "PPT_VIOLATING";
    case Verdict::sep_abs_sum: return "SEP_ABS_SUM";
    case Verdict::sep_mu: return "SEP_MU";
    case Verdict::sep_two_term: return "SEP_TWO_TERM";
    case Verdict::sep_ppt_sufficient: return "SEP_PPT_SUFFICIENT";
    case Verdict::undecided: return "UNDECIDED";
  }
  return "unknown";
}

struct ClassificationRecord {
  std::array<double, 8> probs{};
  Verdict verdict = Verdict::undecided;
  std::array<double, 3> pt_min_eig{};  // partitions A|BC, B|AC, C|AB
  OptimizeXResult criterion;           // evidence, kept for every state
  std::optional<SeparabilityCertificate> certificate;
  double seconds = 0.0;
};

// Fixed decision order: (1) NPT for any bipartition; (2) anti-diagonal
// criterion violation; (3) certificates, cheapest first; (4) for an odd
// number of strictly negative anti-diagonal weights the PPT criterion is
// necessary and sufficient, so surviving states are separable by that fact
// alone; (5) undecided. The criterion runs even for NPT states so the
// ensemble can verify that no NPT state escapes it.
inline ClassificationRecord classify_state(const GhzDiagonalState& s) {
  const auto t0 = std::chrono::steady_clock::now();
  ClassificationRecord rec;
  rec.probs = s.probs;

  bool npt = false;
  const std::array<Party, 3> parties = {Party::A, Party::B, Party::C};
  for (int i = 0; i < 3; ++i) {
    const double eig = min_eigenvalue_after_pt(s.rho.matrix(), parties[static_cast<size_t>(i)]);
    rec.pt_min_eig[static_cast<size_t>(i)] = eig;
    npt = npt || eig < kPsdThreshold;
  }

  rec.criterion = optimize_x(s.rho);

  auto finish = [&](Verdict v) {
    rec.verdict = v;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  };

  if (npt) return finish(Verdict::npt);
  if (rec.criterion.verdict.violated) return finish(Verdict::ppt_violating);

  if (auto cert = abs_sum_certificate(s)) {
    rec.certificate = std::move(cert);
    return finish(Verdict::sep_abs_sum);
  }
  const auto& l = s.lambdas;
  const double anti_product = l[3] * l[4] * l[5] * l[6];
  if (anti_product < 0.0) {
    // Odd strictly-negative pattern: the product ansatz cannot reach it, but
    // PPT is necessary and sufficient here, and PPT already held above.
    return finish(Verdict::sep_ppt_sufficient);
  }
  if (auto cert = mu_certificate(s)) {
    rec.certificate = std::move(cert);
    return finish(Verdict::sep_mu);
  }
  if (auto cert = two_term_certificate(s)) {
    rec.certificate = std::move(cert);
    return finish(Verdict::sep_two_term);
  }
  return finish(Verdict::undecided);
}

struct EnsembleReport {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::array<std::uint64_t, kVerdictCount> counts{};
  std::uint64_t npt_criterion_escapes = 0;  // NPT states the criterion missed
  double seconds = 0.0;

  double fraction(Verdict v) const {
    return n == 0 ? 0.0 : static_cast<double>(counts[static_cast<size_t>(v)]) /
                              static_cast<double>(n);
  }
  // Binomial standard error of a fraction estimated from n samples.
  double stderr_of(double f) const {
    return n == 0 ? 0.0 : std::sqrt(f * (1.0 - f) / static_cast<double>(n));
  }
  double entangled_fraction() const {
    return fraction(Verdict::npt) + fraction(Verdict::ppt_violating);
  }
  double separable_fraction() const {
    return fraction(Verdict::sep_abs_sum) + fraction(Verdict::sep_mu) +
           fraction(Verdict::sep_two_term) + fraction(Verdict::sep_ppt_sufficient);
  }
  // Certificate tiers: the direct tier groups the closed-form mechanisms
  // (absolute-sum bound, symmetric decomposition, PPT-sufficiency for odd
  // sign patterns); the search tier is the two-term decomposition search.
  double direct_tier_fraction() const {
    return fraction(Verdict::sep_abs_sum) + fraction(Verdict::sep_mu) +
           fraction(Verdict::sep_ppt_sufficient);
  }
  double search_tier_fraction() const { return fraction(Verdict::sep_two_term); }
  double bound_entangled_fraction() const { return fraction(Verdict::ppt_violating); }
};

// Deterministic ensemble: sampling is chunked with per-chunk derived seeds,
// so any worker partitioning along chunk boundaries reproduces the same
// states; aggregation is plain counting.
inline constexpr std::uint64_t kEnsembleChunk = 1024;

inline EnsembleReport run_ensemble(std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("run_ensemble: n must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  EnsembleReport report;
  report.n = n;
  report.seed = seed;
  for (std::uint64_t chunk = 0; chunk * kEnsembleChunk < n; ++chunk) {
    SimplexSampler sampler(derive_stream_seed(seed, chunk));
    const std::uint64_t begin = chunk * kEnsembleChunk;
    const std::uint64_t end = std::min(n, begin + kEnsembleChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto state = ghz_diagonal_from_probs(sampler.next());
      const auto rec = classify_state(state);
      ++report.counts[static_cast<size_t>(rec.verdict)];
      if (rec.verdict == Verdict::npt && !rec.criterion.verdict.violated)
        ++report.npt_criterion_escapes;
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// JSON form: fixed field order, one entry per verdict plus the aggregate
// rows of the two-column summary table. Timing is deliberately excluded so
// identical (n, seed) runs emit identical bytes.
inline std::string ensemble_report_json(const EnsembleReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("n");
  w.value(r.n);
  w.key("seed");
  w.value(r.seed);
  w.key("verdicts");
  w.begin_object();
  for (int v = 0; v < kVerdictCount; ++v) {
    const auto verdict = static_cast<Verdict>(v);
    const double f = r.fraction(verdict);
    w.key(to_string(verdict));
    w.begin_object();
    w.key("count");
    w.value(r.counts[static_cast<size_t>(v)]);
    w.key("fraction");
    w.value(f);
    w.key("stderr");
    w.value(r.stderr_of(f));
    w.end_object();
  }
  w.end_object();
  auto aggregate = [&](const char* name, double f) {
    w.key(name);
    w.begin_object();
    w.key("fraction");
    w.value(f);
    w.key("stderr");
    w.value(r.stderr_of(f));
    w.end_object();
  };
  aggregate("entangled", r.entangled_fraction());
  aggregate("separable", r.separable_fraction());
  aggregate("direct_certificates", r.direct_tier_fraction());
  aggregate("two_term_certificates", r.search_tier_fraction());
  aggregate("bound_entangled", r.bound_entangled_fraction());
  w.key("npt_criterion_escapes");
  w.value(r.npt_criterion_escapes);
  w.end_object();
  return w.str();
}

// Aligned two-column text table: summary rows on the left, the detailed
// split on the right.
inline std::string ensemble_report_table(const EnsembleReport& r) {
  char line[128];
  std::string out;
  std::snprintf(line, sizeof line, "n = %llu, seed = %llu\n",
                static_cast<unsigned long long>(r.n), static_cast<unsigned long long>(r.seed));
  out += line;
  auto row = [&](const char* left, double lf, bool lshow, const char* right, double rf,
                 bool rshow) {
    if (lshow)
      std::snprintf(line, sizeof line, "%-12s %7.2f %%  | ", left, 100.0 * lf);
    else
      std::snprintf(line, sizeof line, "%-12s %10s  | ", left, "");
    out += line;
    if (rshow)
      std::snprintf(line, sizeof line, "%-28s %7.2f %%\n", right, 100.0 * rf);
    else
      std::snprintf(line, sizeof line, "%-28s\n", right);
    out += line;
  };
  row("Entangled", r.entangled_fraction(), true, "NPT for some partition",
      r.fraction(Verdict::npt), true);
  row("", 0.0, false, "PPT, but criterion-violating", r.fraction(Verdict::ppt_violating), true);
  row("Separable", r.separable_fraction(), true, "direct certificate",
      r.direct_tier_fraction(), true);
  row("", 0.0, false, "two-term search certificate", r.search_tier_fraction(), true);
  row("Undecided", r.fraction(Verdict::undecided), true, "", 0.0, false);
  row("Total", 1.0, true, "", 0.0, false);
  return out;
}

}  // namespace ghzsep
