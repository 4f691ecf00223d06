#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ghzsep {

using cplx = std::complex<double>;

// Default numerical thresholds shared across the library.
inline constexpr double kHermitianTol = 1e-12;   // max |m - m^dagger| entry
inline constexpr double kPsdThreshold = -1e-10;  // eigenvalue floor for "positive"
inline constexpr double kJacobiOffTol = 1e-13;   // off-diagonal Frobenius target
inline constexpr double kViolationTol = 1e-12;   // strict-inequality margin

// Dense complex matrix of dimension 1..8 with value semantics.
// Storage is a fixed 8x8 block; entries outside dim x dim stay zero.
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}

  explicit ComplexMatrix(int dim) : dim_(dim) {
    if (dim < 1 || dim > 8) {
      throw std::invalid_argument("ComplexMatrix: dimension must be in 1..8, got " +
                                  std::to_string(dim));
    }
  }

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }

  int dim() const { return dim_; }

  cplx& at(int i, int j) { return a_[static_cast<size_t>(i) * 8 + j]; }
  const cplx& at(int i, int j) const { return a_[static_cast<size_t>(i) * 8 + j]; }

  cplx trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs(at(i, j)));
    return m;
  }

  // Largest entry-wise deviation from the adjoint.
  double max_asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j)
        m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
    return m;
  }

  bool is_hermitian(double tol = kHermitianTol) const { return max_asymmetry() <= tol; }

  double offdiag_frobenius() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if (i != j) s += std::norm(at(i, j));
    return std::sqrt(s);
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    ComplexMatrix r(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int j = 0; j < a.dim_; ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    ComplexMatrix r(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int j = 0; j < a.dim_; ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
    return r;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    ComplexMatrix r(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int k = 0; k < a.dim_; ++k) {
        const cplx aik = a.at(i, k);
        if (aik == cplx(0.0)) continue;
        for (int j = 0; j < a.dim_; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }

  friend ComplexMatrix operator*(const cplx& s, const ComplexMatrix& a) {
    ComplexMatrix r(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int j = 0; j < a.dim_; ++j) r.at(i, j) = s * a.at(i, j);
    return r;
  }

 private:
  static void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_)
      throw std::invalid_argument("ComplexMatrix: dimension mismatch " +
                                  std::to_string(a.dim_) + " vs " + std::to_string(b.dim_));
  }

  int dim_;
  std::array<cplx, 64> a_{};
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int da = a.dim(), db = b.dim();
  if (da * db > 8)
    throw std::invalid_argument("kron: product dimension exceeds 8");
  ComplexMatrix r(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
          r.at(i * db + k, j * db + l) = a.at(i, j) * b.at(k, l);
  return r;
}

// Eigenvalues of a Hermitian matrix, ascending, via cyclic complex Jacobi
// rotations. Each sweep visits every off-diagonal pair (p, q); a unit phase
// makes the pivot real, then a real rotation annihilates it. Sweeps repeat
// until the off-diagonal Frobenius norm drops below kJacobiOffTol.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                                 double tol = kHermitianTol) {
  const double asym = m.max_asymmetry();
  if (asym > tol)
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian "
                                "(max asymmetry " + std::to_string(asym) + ")");
  const int n = m.dim();
  ComplexMatrix w(n);
  // Work on the exactly Hermitian average of m and its adjoint.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && w.offdiag_frobenius() > kJacobiOffTol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx g = w.at(p, q);
        const double ag = std::abs(g);
        if (ag == 0.0) continue;
        // Unit phase making w(p,q) real and positive.
        const cplx phi = std::conj(g) / ag;
        const double app = w.at(p, p).real();
        const double aqq = w.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * ag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Similarity by U = diag-phase * plane rotation on (p, q):
        // U[p][p]=c, U[p][q]=s, U[q][p]=-s*phi, U[q][q]=c*phi.
        for (int k = 0; k < n; ++k) {
          const cplx wkp = w.at(k, p), wkq = w.at(k, q);
          w.at(k, p) = c * wkp - s * phi * wkq;
          w.at(k, q) = s * wkp + c * phi * wkq;
        }
        const cplx phic = std::conj(phi);
        for (int k = 0; k < n; ++k) {
          const cplx wpk = w.at(p, k), wqk = w.at(q, k);
          w.at(p, k) = c * wpk - s * phic * wqk;
          w.at(q, k) = s * wpk + c * phic * wqk;
        }
        w.at(p, q) = 0.0;
        w.at(q, p) = 0.0;
        w.at(p, p) = cplx(w.at(p, p).real(), 0.0);
        w.at(q, q) = cplx(w.at(q, q).real(), 0.0);
      }
    }
  }

  std::vector<double> ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = w.at(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Three-qubit parties in basis |q1 q2 q3>, q1 most significant.
enum class Party { A, B, C };

inline int party_shift(Party p) {
  switch (p) {
    case Party::A: return 2;
    case Party::B: return 1;
    case Party::C: return 0;
  }
  throw std::invalid_argument("party_shift: invalid party");
}

// Partial transpose on one qubit: swaps that qubit's bit between the row and
// column index. A pure entry permutation, exact in floating point.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, Party party) {
  if (m.dim() != 8)
    throw std::invalid_argument("partial_transpose: expected an 8x8 matrix");
  const int sh = party_shift(party);
  const int bit = 1 << sh;
  ComplexMatrix r(8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const int ii = (i & ~bit) | (j & bit);
      const int jj = (j & ~bit) | (i & bit);
      r.at(i, j) = m.at(ii, jj);
    }
  }
  return r;
}

inline double min_eigenvalue_after_pt(const ComplexMatrix& m, Party party,
                                      double tol = kHermitianTol) {
  const auto ev = hermitian_eigenvalues(partial_transpose(m, party), tol);
  return ev.front();
}

namespace detail {

// P|q> = phase * |q XOR flip> for a single-qubit Pauli letter.
inline void pauli_letter(char letter, int qbit, cplx& phase, int& flip) {
  switch (letter) {
    case 'I': break;
    case 'X': flip = 1; break;
    case 'Y': flip = 1; phase = (qbit ? -cplx(0, 1) : cplx(0, 1)); break;
    case 'Z': phase = (qbit ? -1.0 : 1.0); break;
    default:
      throw std::invalid_argument(std::string("pauli word: invalid letter '") + letter + "'");
  }
}

}  // namespace detail

// Tr(rho * P1 x P2 x P3) for a three-letter Pauli word over {I, X, Y, Z}.
// Each word maps a basis column to a single row, so the trace is a sum of
// eight entries weighted by unit phases.
inline double pauli_expectation(const ComplexMatrix& rho, std::string_view word) {
  if (rho.dim() != 8)
    throw std::invalid_argument("pauli_expectation: expected an 8x8 matrix");
  if (word.size() != 3)
    throw std::invalid_argument("pauli_expectation: word must have exactly 3 letters");
  cplx sum = 0.0;
  for (int q = 0; q < 8; ++q) {
    cplx phase = 1.0;
    int mask = 0;
    for (int k = 0; k < 3; ++k) {
      cplx ph = 1.0;
      int flip = 0;
      detail::pauli_letter(word[static_cast<size_t>(k)], (q >> (2 - k)) & 1, ph, flip);
      phase *= ph;
      mask |= flip << (2 - k);
    }
    sum += rho.at(q, q ^ mask) * phase;
  }
  return sum.real();
}

// 2x2 single-qubit Pauli matrices and 8x8 three-letter words, mainly for
// constructing operators in tests and witness states.
inline ComplexMatrix pauli_matrix(char letter) {
  ComplexMatrix m(2);
  switch (letter) {
    case 'I': m.at(0, 0) = 1; m.at(1, 1) = 1; break;
    case 'X': m.at(0, 1) = 1; m.at(1, 0) = 1; break;
    case 'Y': m.at(0, 1) = -cplx(0, 1); m.at(1, 0) = cplx(0, 1); break;
    case 'Z': m.at(0, 0) = 1; m.at(1, 1) = -1; break;
    default:
      throw std::invalid_argument(std::string("pauli_matrix: invalid letter '") + letter + "'");
  }
  return m;
}

inline ComplexMatrix pauli_word_matrix(std::string_view word) {
  if (word.size() != 3)
    throw std::invalid_argument("pauli_word_matrix: word must have exactly 3 letters");
  return kron(kron(pauli_matrix(word[0]), pauli_matrix(word[1])), pauli_matrix(word[2]));
}

}  // namespace ghzsep
