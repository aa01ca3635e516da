#pragma once

#include <span>
#include <string>
#include <vector>

#include "ptnoether/biorthogonal.hpp"
#include "ptnoether/pt_model.hpp"

namespace ptnoether {

struct Trajectory {
  std::vector<double> times;
  std::vector<Complex> values;
  std::string observable_id;
  Picture picture = Picture::Standard;

  double spread_real() const;                // max - min of the real part
  double max_drift() const;                  // max |v(t) - v(t0)|
  double max_abs_imag() const;
};

// exp(-i H t); closed form for dims 2 and 4 (including the EP limit), matexp for dim 3.
ComplexMatrix u_pt(const PTSystem& sys, double t);

// U rho U^dagger / tr(U rho U^dagger).
ComplexMatrix evolve_standard(const PTSystem& sys, const ComplexMatrix& rho0, double t);

// Unbroken: U rho_b U' with U' = exp(+iHt); broken: U rho_b U. Applied in the eigenbasis.
BiorthDensity evolve_biorth(const BiorthDensity& rho_b0, const PTSystem& sys, double t);

std::vector<double> linspace(double start, double stop, std::size_t points);

Trajectory expectation_trajectory(const ComplexMatrix& rho0_std, const PTSystem& sys, const Observable& f,
                                  std::span<const double> times);
Trajectory expectation_trajectory(const BiorthDensity& rho_b0, const PTSystem& sys, const Observable& f,
                                  std::span<const double> times);

struct NoetherCheck {
  double residual = 0;
  Complex lhs;  // central-difference d(F)/dt
  Complex rhs;  // (1/i) tr(rho_b [F,H]) unbroken, (1/i) tr(rho_b {F,H}) broken
};

NoetherCheck noether_residual(const BiorthDensity& rho_b, const PTSystem& sys, const Observable& f, double t,
                              double dt = 1e-5);

}  // namespace ptnoether
