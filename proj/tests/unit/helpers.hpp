#pragma once

#include <cmath>
#include <random>

#include "ptnoether/linalg.hpp"

namespace testutil {

using ptnoether::Complex;
using ptnoether::ComplexMatrix;
using ptnoether::ComplexVector;

// Entries uniform in the unit disk.
inline ComplexMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.0, 1.0), phi(0.0, 2 * M_PI);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::polar(std::sqrt(r(rng)), phi(rng));
  return m;
}

inline ComplexVector random_ket(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

inline ComplexMatrix random_density(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Truncated Taylor series with scaling and squaring; independent of the library's exponential.
inline ComplexMatrix taylor_exp(const ComplexMatrix& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2;
    ++squarings;
  }
  const ComplexMatrix scaled = a / std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// H_PT = s (sigma_x + i a sigma_z) written out directly.
inline ComplexMatrix h_pt(double s, double a) {
  ComplexMatrix h(2, 2);
  h << Complex(0, s * a), s, s, Complex(0, -s * a);
  return h;
}

}  // namespace testutil
