#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptnoether/linalg.hpp"
#include "ptnoether/pt_model.hpp"

namespace ptnoether {

// Pure state as amplitudes over the right eigenbasis; its bra is sum_k conj(c_k) <phi_hat_k|.
struct BiorthState {
  ComplexVector coeffs;
  std::uint64_t system_id = 0;

  static BiorthState from_coefficients(const PTSystem& sys, const ComplexVector& c);
  // Physical ket in the computational basis; normalized in the standard norm, then expanded.
  static BiorthState from_ket(const PTSystem& sys, const ComplexVector& psi);
  ComplexVector ket(const PTSystem& sys) const;
};

struct EnsembleMember {
  double p = 1.0;
  BiorthState state;
};

// rho_b = sum_nm coeff(n, m) |phi_n><phi_hat_m|.
struct BiorthDensity {
  ComplexMatrix coeff;
  std::vector<EnsembleMember> ensemble;  // optional
  std::uint64_t system_id = 0;

  static BiorthDensity from_state(const BiorthState& s);
  static BiorthDensity from_ensemble(std::vector<EnsembleMember> members);
  Complex biorth_trace() const { return coeff.trace(); }
  // Copy rescaled to unit biorthogonal trace.
  BiorthDensity normalized() const;
  ComplexMatrix operator_form(const PTSystem& sys) const;  // R coeff L
};

enum class Picture { Standard, Biorthogonal };
enum class SymmetryClass { StandardSymmetry, ChiralSymmetry, None, Unclassified, Degenerate };

const char* picture_name(Picture p);
const char* symmetry_class_name(SymmetryClass c);

struct Observable {
  ComplexMatrix matrix;
  Picture picture = Picture::Standard;
  SymmetryClass symmetry_class = SymmetryClass::Unclassified;
  std::string label;
  // Biorthogonal observables carry F~ = L F R for the system they were built on.
  ComplexMatrix coeff;
  std::uint64_t system_id = 0;

  static Observable standard(const ComplexMatrix& m, std::string label);
  static Observable biorthogonal(const PTSystem& sys, const ComplexMatrix& m, std::string label);
  static Observable from_coefficients(const PTSystem& sys, const ComplexMatrix& coeff, std::string label);
};

Complex biorth_inner(const BiorthState& phi, const BiorthState& psi);

// tr(rho~ F~) summed so that Hermitian pairs cancel exactly in the imaginary part.
Complex gen_expectation(const BiorthDensity& rho, const Observable& f);
// sum_n p_n <psi_hat_n|F|psi_n>; requires an ensemble.
Complex gen_expectation_ensemble(const BiorthDensity& rho, const Observable& f);
// sum_l <phi_hat_l| rho_b F |phi_l> with rho_b and F as dense operators.
Complex biorth_trace_expectation(const BiorthDensity& rho, const Observable& f, const PTSystem& sys);

Complex standard_expectation(const ComplexMatrix& rho_std, const Observable& f);

enum class PauliKind { X, Y, Z };
// sigma~_x is an extension beyond the two deformed operators used in the figures.
Observable deformed_pauli(PauliKind kind, const PTSystem& sys);
Observable collective_observable(PauliKind kind, const PTSystem& sys);
Observable standard_pauli(PauliKind kind, int dim);  // sigma for dim 2, S = sigma(x)I + I(x)sigma for dim 4

bool is_biorth_hermitian(const Observable& f, const PTSystem& sys, double tol = 1e-10);

double overlap_distance(const BiorthState& phi, const BiorthState& psi);

BiorthDensity reverse_extract(const ComplexMatrix& rho_std, const PTSystem& sys, double tol = 1e-9);
ComplexMatrix biorth_to_standard(const BiorthDensity& rho, const PTSystem& sys);

// Validation shared by operations taking standard-picture densities.
void require_density(const ComplexMatrix& rho, double tol, const char* what);

}  // namespace ptnoether
