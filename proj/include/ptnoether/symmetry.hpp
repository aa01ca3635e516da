#pragma once

#include <string>
#include <vector>

#include "ptnoether/biorthogonal.hpp"
#include "ptnoether/dynamics.hpp"

namespace ptnoether {

enum class SymmetryKind { Commutant, Anticommutant, Intertwining };

const char* symmetry_kind_name(SymmetryKind k);

struct SymmetrySpace {
  SymmetryKind kind = SymmetryKind::Commutant;
  std::vector<ComplexMatrix> basis;  // unit Frobenius norm, pairwise orthogonal
  std::size_t dimension = 0;
  std::vector<double> residuals;  // max-norm of the defining relation per element
};

// Null space of the vectorized map F -> FH - HF, FH + HF or FH - H^dagger F.
// Singular values below tol * largest are treated as zero.
SymmetrySpace symmetry_basis(SymmetryKind kind, const ComplexMatrix& h, double tol = 1e-9);
SymmetrySpace commutant_basis(const ComplexMatrix& h, double tol = 1e-9);
SymmetrySpace anticommutant_basis(const ComplexMatrix& h, double tol = 1e-9);
SymmetrySpace intertwining_basis(const ComplexMatrix& h, double tol = 1e-9);

double relation_residual(SymmetryKind kind, const ComplexMatrix& f, const ComplexMatrix& h);
SymmetryClass classify(const ComplexMatrix& f, const ComplexMatrix& h, double tol = 1e-9);

// |F - P F| / |F| with P the orthogonal projector onto span(space.basis), Frobenius norms.
double projection_residual(const SymmetrySpace& space, const ComplexMatrix& f);
// Largest principal angle between two spans (pi/2 if dimensions differ).
double max_principal_angle(const SymmetrySpace& a, const SymmetrySpace& b);

// Regime-matched conserved observables of a PT system: commutant (unbroken) or anticommutant (broken)
// elements, expressed over the eigenbasis, restricted to the exact relation pattern and split into
// biorthogonally Hermitian parts.
std::vector<Observable> conserved_observables(const PTSystem& sys, double tol = 1e-9);

// Noether check for an arbitrary diagonalizable user matrix h, general complex spectrum. The bra follows
// the non-Hermitian conjugate equation, so d(F)/dt = (1/i) tr(rho_b({F,H} - 2 Re(E) F)) when all
// eigenvalues share their real part; rhs is evaluated in that operator form and lhs by central difference.
NoetherCheck general_noether_residual(const ComplexMatrix& h, const ComplexMatrix& rho_std0, const ComplexMatrix& f,
                                      double t, double dt = 1e-5);

std::string format_space(const SymmetrySpace& space);

}  // namespace ptnoether
