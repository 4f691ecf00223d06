#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "ghzsep/linalg.hpp"
#include "ghzsep/states.hpp"

namespace testutil {

using ghzsep::ComplexMatrix;
using ghzsep::cplx;

// Deterministic test randomness: fixed-seed mt19937_64 with explicit
// double mapping, so expected values can be frozen.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform01() {  // in (0, 1]
    const uint64_t bits = gen_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  cplx unit_phase() {
    const double t = uniform(0.0, 2.0 * M_PI);
    return {std::cos(t), std::sin(t)};
  }

  cplx complex_box() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

 private:
  std::mt19937_64 gen_;
};

inline ComplexMatrix random_hermitian(Rng& rng, int dim = 8) {
  ComplexMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g.at(i, j) = rng.complex_box();
  ComplexMatrix h(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h.at(i, j) = 0.5 * (g.at(i, j) + std::conj(g.at(j, i)));
  return h;
}

// G G^dagger normalized to unit trace: a valid random density matrix.
inline ComplexMatrix random_density(Rng& rng, int dim = 8) {
  ComplexMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g.at(i, j) = rng.complex_box();
  ComplexMatrix r = g * g.adjoint();
  const double tr = r.trace().real();
  return cplx(1.0 / tr) * r;
}

// Random pure product state; real_amplitudes restricts each qubit to the
// real circle (cos t, sin t), which keeps all anti-diagonal entries real.
inline ghzsep::ProductState random_product(Rng& rng, bool real_amplitudes) {
  std::array<cplx, 3> c{}, s{};
  for (int k = 0; k < 3; ++k) {
    if (real_amplitudes) {
      const double t = rng.uniform(0.0, 2.0 * M_PI);
      c[static_cast<size_t>(k)] = std::cos(t);
      s[static_cast<size_t>(k)] = std::sin(t);
    } else {
      cplx a = rng.complex_box(), b = rng.complex_box();
      if (std::abs(a) < 1e-6 && std::abs(b) < 1e-6) a = 1.0;
      const double n = std::sqrt(std::norm(a) + std::norm(b));
      c[static_cast<size_t>(k)] = a / n;
      s[static_cast<size_t>(k)] = b / n;
    }
  }
  return ghzsep::product_state(c, s);
}

// Convex mixture of `k` random product states: fully separable by
// construction, the canonical no-false-positive input.
inline ghzsep::DensityMatrix random_product_mixture(Rng& rng, int k, bool real_amplitudes) {
  std::vector<double> w(static_cast<size_t>(k));
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log(rng.uniform01());
    sum += v;
  }
  ComplexMatrix m(8);
  for (int i = 0; i < k; ++i) {
    const auto ps = random_product(rng, real_amplitudes);
    m = m + cplx(w[static_cast<size_t>(i)] / sum) * ps.rho.matrix();
  }
  return ghzsep::DensityMatrix::from_matrix(m);
}

inline ghzsep::GhzDiagonalState random_ghz_state(Rng& rng) {
  std::array<double, 8> p{};
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(rng.uniform01());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return ghzsep::ghz_diagonal_from_probs(p);
}

}  // namespace testutil
