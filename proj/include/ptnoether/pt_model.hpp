#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "ptnoether/linalg.hpp"

namespace ptnoether {

enum class Regime { Unbroken, Broken, ExceptionalPoint };
enum class FConvention { PaperFigures, UnitNorm };

inline constexpr double kEpThreshold = 1e-12;

struct PTSystem {
  double s = 1.0;
  double a = 0.0;  // gamma / s
  int dim = 2;
  ComplexMatrix hamiltonian;
  EigenSystem eigen;
  // (f1, f2, f3, f4): |phi_k> = f_k (A_k, 1)^T, <phi_hat_k| = conj(f_{k+2}) (A_k, 1). Zero for dim 3.
  std::array<Complex, 4> f_coeffs{};
  std::array<Complex, 2> A{};  // A1, A2 for dims 2 and 4
  Regime regime = Regime::Unbroken;
  FConvention convention = FConvention::PaperFigures;
  std::uint64_t id = 0;
  std::shared_ptr<const PTSystem> qubit;  // single-qubit factor of a dim-4 system

  // Left/right eigenvectors usable (not at, and not numerically near, an EP).
  bool biorth_available() const { return regime != Regime::ExceptionalPoint && !eigen.condition_flag; }
  void require_biorth(const char* operation) const;
  // Largest |Re E| in the broken regime, |Im E| in the unbroken regime.
  double spectrum_deviation() const;
};

Regime classify_regime(double a);
const char* regime_name(Regime r);

PTSystem build_single_qubit(double s, double a, FConvention conv = FConvention::PaperFigures);
PTSystem build_two_qubit(double s, double a, FConvention conv = FConvention::PaperFigures);
PTSystem build_spin1(double s, double gamma);

// |f1 f3*(1 + A1^2) - 1| + |f2 f4*(1 + A2^2) - 1|.
double normalization_residual(const PTSystem& sys);
double biorthogonality_residual(const PTSystem& sys);  // max |L R - I|
double closure_residual(const PTSystem& sys);          // max |R L - I|
double reconstruction_residual(const PTSystem& sys);   // max |R diag(E) L - H|

}  // namespace ptnoether
