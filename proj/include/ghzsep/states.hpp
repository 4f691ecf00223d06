#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzsep/linalg.hpp"

namespace ghzsep {

// Validated three-qubit density matrix: Hermitian, unit trace, positive
// semidefinite (within tolerances). Value type; construction is the only
// gate, so a DensityMatrix is always a physical state.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const ComplexMatrix& m,
                                   double herm_tol = kHermitianTol,
                                   double psd_floor = kPsdThreshold) {
    if (m.dim() != 8)
      throw std::invalid_argument("DensityMatrix: expected an 8x8 matrix");
    const double asym = m.max_asymmetry();
    if (asym > herm_tol)
      throw std::invalid_argument("DensityMatrix: not Hermitian (max asymmetry " +
                                  std::to_string(asym) + ")");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-12)
      throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr) +
                                  ", expected 1");
    const auto ev = hermitian_eigenvalues(m, herm_tol);
    if (ev.front() < psd_floor)
      throw std::invalid_argument("DensityMatrix: not positive semidefinite "
                                  "(min eigenvalue " + std::to_string(ev.front()) + ")");
    return DensityMatrix(m, ev.front());
  }

  const ComplexMatrix& matrix() const { return m_; }
  double min_eigenvalue() const { return min_eig_; }

  const cplx& at(int i, int j) const { return m_.at(i, j); }

 private:
  DensityMatrix(const ComplexMatrix& m, double min_eig) : m_(m), min_eig_(min_eig) {}

  ComplexMatrix m_;
  double min_eig_;
};

// The four anti-diagonal entries that the entanglement functional reads:
// rho(1,8), rho(2,7), rho(3,6), rho(5,4) in 1-based labels.
inline std::array<cplx, 4> anti_diagonal(const ComplexMatrix& m) {
  return {m.at(0, 7), m.at(1, 6), m.at(2, 5), m.at(4, 3)};
}

// GHZ basis vector k in 1..8: (|0 x2 x3> +/- |1 ~x2 ~x3>)/sqrt(2) where
// k = 2*(j-1) + sigma, j in 1..4 enumerating (x2 x3) = 00,01,10,11 and
// sigma = 1 for '+', 2 for '-'.
inline std::array<cplx, 8> ghz_basis_vector(int k) {
  if (k < 1 || k > 8)
    throw std::invalid_argument("ghz_basis_vector: index must be in 1..8");
  const int j = (k + 1) / 2;        // 1..4
  const int sign = (k % 2 == 1) ? 1 : -1;
  const int m = j - 1;              // (x2 x3) as a 2-bit value
  std::array<cplx, 8> v{};
  const double r = 1.0 / std::sqrt(2.0);
  v[static_cast<size_t>(m)] = r;
  v[static_cast<size_t>(7 - m)] = sign * r;
  return v;
}

// The seven Pauli words whose expectations determine a GHZ-diagonal state.
inline constexpr std::array<const char*, 7> kGhzPauliWords = {
    "ZZI", "ZIZ", "IZZ", "XXX", "YYX", "YXY", "XYY"};

namespace detail {

// Sign character table: row k (1..8) holds the expectations of the seven
// words on the k-th GHZ projector. Rows, prefixed with 1, are orthogonal
// with norm^2 = 8, so probabilities and Pauli weights are a Hadamard-type
// transform pair.
inline const std::array<std::array<double, 7>, 8>& ghz_sign_table() {
  static const std::array<std::array<double, 7>, 8> table = [] {
    std::array<std::array<double, 7>, 8> t{};
    for (int k = 1; k <= 8; ++k) {
      const int j = (k + 1) / 2;
      const double sg = (k % 2 == 1) ? 1.0 : -1.0;
      const int x2 = (j - 1) >> 1, x3 = (j - 1) & 1;
      const double s2 = x2 ? -1.0 : 1.0;
      const double s3 = x3 ? -1.0 : 1.0;
      t[static_cast<size_t>(k - 1)] = {s2, s3, s2 * s3, sg, -sg * s2, -sg * s3, -sg * s2 * s3};
    }
    return t;
  }();
  return table;
}

inline ComplexMatrix ghz_diagonal_matrix(const std::array<double, 8>& probs) {
  ComplexMatrix m(8);
  for (int j = 0; j < 4; ++j) {
    const double pp = probs[static_cast<size_t>(2 * j)];
    const double pm = probs[static_cast<size_t>(2 * j + 1)];
    m.at(j, j) = m.at(7 - j, 7 - j) = 0.5 * (pp + pm);
    m.at(j, 7 - j) = m.at(7 - j, j) = 0.5 * (pp - pm);
  }
  return m;
}

}  // namespace detail

// A GHZ-diagonal state carried in both of its natural coordinate systems:
// GHZ-basis probabilities p_1..p_8 and Pauli weights lambda_2..lambda_8 for
// the words in kGhzPauliWords.
struct GhzDiagonalState {
  std::array<double, 8> probs;
  std::array<double, 7> lambdas;
  DensityMatrix rho;
};

inline GhzDiagonalState ghz_diagonal_from_probs(const std::array<double, 8>& probs) {
  double sum = 0.0;
  std::array<double, 8> p = probs;
  for (double& v : p) {
    if (v < -1e-12)
      throw std::invalid_argument("ghz_diagonal_from_probs: negative probability " +
                                  std::to_string(v));
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("ghz_diagonal_from_probs: probabilities sum to " +
                                std::to_string(sum) + ", expected 1");
  const auto& table = detail::ghz_sign_table();
  std::array<double, 7> lambdas{};
  for (int i = 0; i < 7; ++i) {
    double l = 0.0;
    for (int k = 0; k < 8; ++k)
      l += p[static_cast<size_t>(k)] * table[static_cast<size_t>(k)][static_cast<size_t>(i)];
    lambdas[static_cast<size_t>(i)] = l;
  }
  DensityMatrix rho = DensityMatrix::from_matrix(detail::ghz_diagonal_matrix(p));
  return {p, lambdas, std::move(rho)};
}

inline GhzDiagonalState ghz_diagonal_from_lambdas(const std::array<double, 7>& lambdas) {
  const auto& table = detail::ghz_sign_table();
  std::array<double, 8> p{};
  for (int k = 0; k < 8; ++k) {
    double v = 1.0;
    for (int i = 0; i < 7; ++i)
      v += table[static_cast<size_t>(k)][static_cast<size_t>(i)] * lambdas[static_cast<size_t>(i)];
    v /= 8.0;
    if (v < -1e-12)
      throw std::invalid_argument("ghz_diagonal_from_lambdas: weights give negative "
                                  "probability " + std::to_string(v) + ", not a state");
    p[static_cast<size_t>(k)] = std::max(v, 0.0);
  }
  return ghz_diagonal_from_probs(p);
}

// Recognize a GHZ-diagonal density matrix (real entries on the main and
// anti-diagonal only, symmetric under k <-> 9-k) and recover its
// probability vector. Rejects matrices outside that form.
inline GhzDiagonalState ghz_diagonal_from_state(const DensityMatrix& rho, double tol = 1e-12) {
  const ComplexMatrix& m = rho.matrix();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i == j || i + j == 7) {
        if (std::abs(m.at(i, j).imag()) > tol)
          throw std::invalid_argument("ghz_diagonal_from_state: complex entry off the "
                                      "GHZ-diagonal form");
        continue;
      }
      if (std::abs(m.at(i, j)) > tol)
        throw std::invalid_argument("ghz_diagonal_from_state: matrix is not GHZ-diagonal");
    }
  }
  std::array<double, 8> p{};
  for (int j = 0; j < 4; ++j) {
    const double d0 = m.at(j, j).real();
    const double d1 = m.at(7 - j, 7 - j).real();
    if (std::abs(d0 - d1) > tol)
      throw std::invalid_argument("ghz_diagonal_from_state: diagonal not symmetric "
                                  "under bit complement");
    const double off = m.at(j, 7 - j).real();
    p[static_cast<size_t>(2 * j)] = std::max(d0 + off, 0.0);
    p[static_cast<size_t>(2 * j + 1)] = std::max(d0 - off, 0.0);
  }
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return ghz_diagonal_from_probs(p);
}

// One-parameter permutation-symmetric family: diagonal (4+a, a, ..., a, 4+a)
// and anti-diagonal entries +/-2 (single minus at (3,6)), normalized by
// 8 + 8a. Positive exactly for a >= 2; PPT on every cut for all a >= 2.
inline DensityMatrix kay_state(double alpha_hat) {
  if (alpha_hat < 2.0)
    throw std::invalid_argument("kay_state: alpha_hat must be >= 2 (min eigenvalue "
                                "(alpha_hat - 2)/(8 + 8 alpha_hat) would be negative)");
  const double norm = 8.0 + 8.0 * alpha_hat;
  ComplexMatrix m(8);
  for (int i = 0; i < 8; ++i) m.at(i, i) = alpha_hat / norm;
  m.at(0, 0) = m.at(7, 7) = (4.0 + alpha_hat) / norm;
  const double anti[4] = {2.0, 2.0, -2.0, 2.0};
  for (int j = 0; j < 4; ++j) {
    m.at(j, 7 - j) = anti[j] / norm;
    m.at(7 - j, j) = anti[j] / norm;
  }
  return DensityMatrix::from_matrix(m);
}

// One-parameter family separable across every bipartition but not fully
// separable: a 2eta corner, an all-ones block on the single-excitation
// indices {2,3,5}, and 1/eta on {4,6,7}, normalized by 3 + 2 eta + 3/eta.
inline DensityMatrix hyllus_state(double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("hyllus_state: eta must be positive");
  const double norm = 3.0 + 2.0 * eta + 3.0 / eta;
  ComplexMatrix m(8);
  m.at(0, 0) = 2.0 * eta / norm;
  const int ones[3] = {1, 2, 4};
  for (int i : ones)
    for (int j : ones) m.at(i, j) = 1.0 / norm;
  const int inv[3] = {3, 5, 6};
  for (int i : inv) m.at(i, i) = 1.0 / (eta * norm);
  return DensityMatrix::from_matrix(m);
}

// Parameters of a pure product state (c_k|0> + s_k|1>) on each qubit, plus
// the derived quantities driving the anti-diagonal: kappa (product of the
// six amplitude moduli) and the phase combinations a, b, c.
struct ProductStateParams {
  std::array<cplx, 3> c;
  std::array<cplx, 3> s;
  double kappa;
  std::array<double, 3> phi;  // phi_k = arg(c_k * conj(s_k))
  double phase_a;             // phi_1 + phi_2 - phi_3
  double phase_b;             // phi_1 - phi_2 + phi_3
  double phase_c;             // -phi_1 + phi_2 + phi_3
};

struct ProductState {
  ProductStateParams params;
  DensityMatrix rho;
};

inline ProductState product_state(const std::array<cplx, 3>& c, const std::array<cplx, 3>& s) {
  for (int k = 0; k < 3; ++k) {
    const double n = std::norm(c[static_cast<size_t>(k)]) + std::norm(s[static_cast<size_t>(k)]);
    if (std::abs(n - 1.0) > 1e-12)
      throw std::invalid_argument("product_state: qubit " + std::to_string(k + 1) +
                                  " amplitudes have norm " + std::to_string(n));
  }
  std::array<cplx, 8> amp{};
  for (int q = 0; q < 8; ++q) {
    cplx a = 1.0;
    for (int k = 0; k < 3; ++k)
      a *= ((q >> (2 - k)) & 1) ? s[static_cast<size_t>(k)] : c[static_cast<size_t>(k)];
    amp[static_cast<size_t>(q)] = a;
  }
  ComplexMatrix m(8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      m.at(i, j) = amp[static_cast<size_t>(i)] * std::conj(amp[static_cast<size_t>(j)]);

  ProductStateParams params{};
  params.c = c;
  params.s = s;
  double kappa = 1.0;
  for (int k = 0; k < 3; ++k) {
    const cplx cs = c[static_cast<size_t>(k)] * std::conj(s[static_cast<size_t>(k)]);
    kappa *= std::abs(cs);
    params.phi[static_cast<size_t>(k)] = (cs == cplx(0.0)) ? 0.0 : std::arg(cs);
  }
  params.kappa = kappa;
  params.phase_a = params.phi[0] + params.phi[1] - params.phi[2];
  params.phase_b = params.phi[0] - params.phi[1] + params.phi[2];
  params.phase_c = -params.phi[0] + params.phi[1] + params.phi[2];

  // The anti-diagonal of a product state is kappa times unit phases built
  // from (a, b, c); deviation here means an internal bookkeeping bug.
  const auto ad = anti_diagonal(m);
  const std::array<double, 4> want_arg = {params.phase_a + params.phase_b + params.phase_c,
                                          params.phase_a, params.phase_b, params.phase_c};
  for (int t = 0; t < 4; ++t) {
    const cplx expect = kappa * cplx(std::cos(want_arg[static_cast<size_t>(t)]),
                                     std::sin(want_arg[static_cast<size_t>(t)]));
    if (std::abs(ad[static_cast<size_t>(t)] - expect) > 1e-12)
      throw std::logic_error("product_state: anti-diagonal phase identity failed");
  }
  for (int k = 0; k < 4; ++k) {
    const double pair = std::sqrt(m.at(k, k).real() * m.at(7 - k, 7 - k).real());
    if (std::abs(pair - kappa) > 1e-12)
      throw std::logic_error("product_state: kappa pair identity failed");
  }

  return {params, DensityMatrix::from_matrix(m)};
}

// splitmix64: seed scrambler for deriving independent sub-stream seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for sub-stream k of a master seed; fixed formula so chunked runs are
// reproducible independent of worker count.
inline uint64_t derive_stream_seed(uint64_t seed, uint64_t k) {
  return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
}

// Uniform sampling on the probability simplex: eight unit-rate exponential
// variates normalized by their sum. Driven by mt19937_64 with an explicit
// uint64 -> double mapping, so streams are identical across platforms.
class SimplexSampler {
 public:
  explicit SimplexSampler(uint64_t seed) : gen_(seed) {}

  std::array<double, 8> next() {
    std::array<double, 8> p{};
    double sum = 0.0;
    for (double& v : p) {
      v = -std::log(uniform01());
      sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
  }

 private:
  double uniform01() {  // in (0, 1]
    const uint64_t bits = gen_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1p-53;
  }

  std::mt19937_64 gen_;
};

inline std::vector<std::array<double, 8>> sample_simplex(uint64_t seed, int n) {
  if (n < 0) throw std::invalid_argument("sample_simplex: n must be nonnegative");
  SimplexSampler sampler(seed);
  std::vector<std::array<double, 8>> out(static_cast<size_t>(n));
  for (auto& p : out) p = sampler.next();
  return out;
}

// Local filter diag(1/x, x^2) on each qubit, then renormalize. Invertible
// local operation: preserves full separability and rank.
inline DensityMatrix apply_filter(const DensityMatrix& rho, double x) {
  if (!(x > 0.0))
    throw std::invalid_argument("apply_filter: x must be positive");
  std::array<double, 8> w{};
  for (int q = 0; q < 8; ++q) {
    const int ones = ((q >> 2) & 1) + ((q >> 1) & 1) + (q & 1);
    w[static_cast<size_t>(q)] = std::pow(x, 3.0 * ones - 3.0);
  }
  ComplexMatrix m(8);
  double tr = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j)
      m.at(i, j) = w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] * rho.at(i, j);
    tr += m.at(i, i).real();
  }
  if (!(tr > 0.0) || !std::isfinite(tr))
    throw std::invalid_argument("apply_filter: filtered trace is not positive");
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m.at(i, j) = m.at(i, j) / tr;
  return DensityMatrix::from_matrix(m);
}

}  // namespace ghzsep
