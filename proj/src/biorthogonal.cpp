#include "ptnoether/biorthogonal.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

void same_system(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != b) fail(ErrorKind::InvalidArgument, std::string(what) + ": objects belong to different systems");
}

ComplexMatrix pauli_matrix(PauliKind kind) {
  switch (kind) {
    case PauliKind::X: return pauli::X();
    case PauliKind::Y: return pauli::Y();
    case PauliKind::Z: return pauli::Z();
  }
  return pauli::Z();
}

const char* pauli_suffix(PauliKind kind) {
  switch (kind) {
    case PauliKind::X: return "x";
    case PauliKind::Y: return "y";
    case PauliKind::Z: return "z";
  }
  return "?";
}

ComplexMatrix coefficients_for(const Observable& f, const PTSystem& sys) {
  if (f.picture == Picture::Biorthogonal && f.system_id == sys.id && f.coeff.size() > 0) return f.coeff;
  sys.require_biorth("coefficient matrix");
  return sys.eigen.left * f.matrix * sys.eigen.right;
}

}  // namespace

BiorthState BiorthState::from_coefficients(const PTSystem& sys, const ComplexVector& c) {
  if (c.size() != sys.dim) fail(ErrorKind::InvalidArgument, "coefficient vector has wrong dimension");
  sys.require_biorth("biorthogonal state");
  return BiorthState{c, sys.id};
}

BiorthState BiorthState::from_ket(const PTSystem& sys, const ComplexVector& psi) {
  if (psi.size() != sys.dim) fail(ErrorKind::InvalidArgument, "ket has wrong dimension");
  sys.require_biorth("biorthogonal state");
  const double n = psi.norm();
  if (!(n > 0) || !std::isfinite(n)) fail(ErrorKind::InvalidArgument, "ket has zero or non-finite norm");
  return BiorthState{sys.eigen.left * (psi / n), sys.id};
}

ComplexVector BiorthState::ket(const PTSystem& sys) const {
  same_system(system_id, sys.id, "ket");
  return sys.eigen.right * coeffs;
}

BiorthDensity BiorthDensity::from_state(const BiorthState& s) {
  BiorthDensity rho;
  rho.coeff = s.coeffs * s.coeffs.adjoint();
  rho.ensemble.push_back({1.0, s});
  rho.system_id = s.system_id;
  return rho;
}

BiorthDensity BiorthDensity::from_ensemble(std::vector<EnsembleMember> members) {
  if (members.empty()) fail(ErrorKind::InvalidArgument, "empty ensemble");
  double total = 0;
  for (const auto& m : members) {
    if (!(m.p >= 0)) fail(ErrorKind::InvalidArgument, "ensemble probability must be non-negative");
    same_system(m.state.system_id, members.front().state.system_id, "ensemble");
    total += m.p;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::InvalidArgument, "ensemble probabilities must sum to 1");
  const auto n = members.front().state.coeffs.size();
  BiorthDensity rho;
  rho.coeff = ComplexMatrix::Zero(n, n);
  for (const auto& m : members) rho.coeff += m.p * m.state.coeffs * m.state.coeffs.adjoint();
  rho.coeff = hermitian_part(rho.coeff);
  rho.system_id = members.front().state.system_id;
  rho.ensemble = std::move(members);
  return rho;
}

BiorthDensity BiorthDensity::normalized() const {
  const Complex tr = biorth_trace();
  if (std::abs(tr) == 0) fail(ErrorKind::Numeric, "zero biorthogonal trace");
  const double scale = tr.real();
  BiorthDensity out = *this;
  out.coeff /= scale;
  for (auto& m : out.ensemble) m.state.coeffs /= std::sqrt(scale);
  return out;
}

ComplexMatrix BiorthDensity::operator_form(const PTSystem& sys) const {
  same_system(system_id, sys.id, "operator form");
  sys.require_biorth("operator form");
  return sys.eigen.right * coeff * sys.eigen.left;
}

const char* picture_name(Picture p) { return p == Picture::Standard ? "standard" : "biorthogonal"; }

const char* symmetry_class_name(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::StandardSymmetry: return "standard";
    case SymmetryClass::ChiralSymmetry: return "chiral";
    case SymmetryClass::None: return "none";
    case SymmetryClass::Unclassified: return "unclassified";
    case SymmetryClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

Observable Observable::standard(const ComplexMatrix& m, std::string label) {
  require_square(m, "observable");
  require_finite(m, "observable");
  Observable f;
  f.matrix = m;
  f.picture = Picture::Standard;
  f.label = std::move(label);
  return f;
}

Observable Observable::biorthogonal(const PTSystem& sys, const ComplexMatrix& m, std::string label) {
  require_square(m, "observable");
  require_finite(m, "observable");
  if (m.rows() != sys.dim) fail(ErrorKind::InvalidArgument, "observable dimension does not match system");
  sys.require_biorth("biorthogonal observable");
  Observable f;
  f.matrix = m;
  f.picture = Picture::Biorthogonal;
  f.label = std::move(label);
  f.coeff = sys.eigen.left * m * sys.eigen.right;
  f.system_id = sys.id;
  return f;
}

Observable Observable::from_coefficients(const PTSystem& sys, const ComplexMatrix& coeff, std::string label) {
  if (coeff.rows() != sys.dim || coeff.cols() != sys.dim)
    fail(ErrorKind::InvalidArgument, "coefficient matrix dimension does not match system");
  sys.require_biorth("biorthogonal observable");
  Observable f;
  f.matrix = sys.eigen.right * coeff * sys.eigen.left;
  f.picture = Picture::Biorthogonal;
  f.label = std::move(label);
  f.coeff = coeff;
  f.system_id = sys.id;
  return f;
}

Complex biorth_inner(const BiorthState& phi, const BiorthState& psi) {
  same_system(phi.system_id, psi.system_id, "biorth_inner");
  if (phi.coeffs.size() != psi.coeffs.size()) fail(ErrorKind::InvalidArgument, "biorth_inner: dimension mismatch");
  return phi.coeffs.dot(psi.coeffs);  // sum conj(d_k) c_k
}

Complex gen_expectation(const BiorthDensity& rho, const Observable& f) {
  if (f.picture != Picture::Biorthogonal)
    fail(ErrorKind::InvalidArgument, "gen_expectation needs a biorthogonal-picture observable");
  same_system(rho.system_id, f.system_id, "gen_expectation");
  const auto n = rho.coeff.rows();
  if (f.coeff.rows() != n) fail(ErrorKind::InvalidArgument, "gen_expectation: dimension mismatch");
  Complex diag = 0, off = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diag += rho.coeff(i, i) * f.coeff(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) off += rho.coeff(i, j) * f.coeff(j, i) + rho.coeff(j, i) * f.coeff(i, j);
  }
  return diag + off;
}

Complex gen_expectation_ensemble(const BiorthDensity& rho, const Observable& f) {
  if (rho.ensemble.empty()) fail(ErrorKind::InvalidArgument, "density carries no ensemble");
  if (f.picture != Picture::Biorthogonal)
    fail(ErrorKind::InvalidArgument, "gen_expectation needs a biorthogonal-picture observable");
  same_system(rho.system_id, f.system_id, "gen_expectation");
  Complex sum = 0;
  for (const auto& m : rho.ensemble) sum += m.p * m.state.coeffs.dot(f.coeff * m.state.coeffs);
  return sum;
}

Complex biorth_trace_expectation(const BiorthDensity& rho, const Observable& f, const PTSystem& sys) {
  const ComplexMatrix rho_b = rho.operator_form(sys);
  const ComplexMatrix prod = sys.eigen.left * rho_b * f.matrix * sys.eigen.right;
  return prod.trace();
}

Complex standard_expectation(const ComplexMatrix& rho_std, const Observable& f) {
  if (f.picture != Picture::Standard)
    fail(ErrorKind::InvalidArgument, "standard_expectation needs a standard-picture observable");
  if (rho_std.rows() != f.matrix.rows() || rho_std.cols() != f.matrix.cols())
    fail(ErrorKind::InvalidArgument, "standard_expectation: dimension mismatch");
  return (rho_std * f.matrix).trace();
}

Observable deformed_pauli(PauliKind kind, const PTSystem& sys) {
  if (sys.dim != 2) fail(ErrorKind::InvalidArgument, "deformed Pauli operators need a single-qubit system");
  sys.require_biorth("deformed_pauli");
  return Observable::from_coefficients(sys, pauli_matrix(kind), std::string("tilde_") + pauli_suffix(kind));
}

Observable collective_observable(PauliKind kind, const PTSystem& sys) {
  if (sys.dim != 4) fail(ErrorKind::InvalidArgument, "collective observables need a two-qubit system");
  sys.require_biorth("collective_observable");
  const ComplexMatrix c = pauli_matrix(kind);
  const ComplexMatrix I2 = pauli::I();
  return Observable::from_coefficients(sys, kron(c, I2) + kron(I2, c), std::string("tilde_S_") + pauli_suffix(kind));
}

Observable standard_pauli(PauliKind kind, int dim) {
  const ComplexMatrix c = pauli_matrix(kind);
  if (dim == 2) return Observable::standard(c, std::string("sigma_") + pauli_suffix(kind));
  if (dim == 4) {
    const ComplexMatrix I2 = pauli::I();
    return Observable::standard(kron(c, I2) + kron(I2, c), std::string("S_") + pauli_suffix(kind));
  }
  fail(ErrorKind::InvalidArgument, "standard Pauli observables exist for dims 2 and 4");
}

bool is_biorth_hermitian(const Observable& f, const PTSystem& sys, double tol) {
  if (f.matrix.rows() != sys.dim) fail(ErrorKind::InvalidArgument, "is_biorth_hermitian: dimension mismatch");
  const ComplexMatrix c = coefficients_for(f, sys);
  return max_norm(c - c.adjoint()) < tol;
}

double overlap_distance(const BiorthState& phi, const BiorthState& psi) {
  same_system(phi.system_id, psi.system_id, "overlap_distance");
  const double np = phi.coeffs.squaredNorm(), ns = psi.coeffs.squaredNorm();
  if (!(np > 0) || !(ns > 0)) fail(ErrorKind::InvalidArgument, "overlap_distance: zero-norm state");
  const double c2 = std::clamp(std::norm(psi.coeffs.dot(phi.coeffs)) / (np * ns), 0.0, 1.0);
  return 2.0 * std::acos(std::sqrt(c2));
}

void require_density(const ComplexMatrix& rho, double tol, const char* what) {
  require_square(rho, what);
  require_finite(rho, what);
  if (max_norm(rho - rho.adjoint()) > tol) fail(ErrorKind::InvalidArgument, std::string(what) + " is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) fail(ErrorKind::InvalidArgument, std::string(what) + " does not have unit trace");
  if (min_hermitian_eigenvalue(rho) < -tol)
    fail(ErrorKind::InvalidArgument, std::string(what) + " is not positive semidefinite");
}

BiorthDensity reverse_extract(const ComplexMatrix& rho_std, const PTSystem& sys, double tol) {
  sys.require_biorth("reverse_extract");
  require_density(rho_std, tol, "reverse_extract input");
  if (rho_std.rows() != sys.dim) fail(ErrorKind::InvalidArgument, "reverse_extract: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(rho_std));
  std::vector<EnsembleMember> members;
  double total = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) total += std::max(0.0, es.eigenvalues()(k));
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double lam = std::max(0.0, es.eigenvalues()(k)) / total;
    if (lam <= 0) continue;
    members.push_back({lam, BiorthState{sys.eigen.left * es.eigenvectors().col(k), sys.id}});
  }
  return BiorthDensity::from_ensemble(std::move(members));
}

ComplexMatrix biorth_to_standard(const BiorthDensity& rho, const PTSystem& sys) {
  same_system(rho.system_id, sys.id, "biorth_to_standard");
  sys.require_biorth("biorth_to_standard");
  const ComplexMatrix out = sys.eigen.right * rho.coeff * sys.eigen.right.adjoint();
  const double tr = out.trace().real();
  if (!(tr > 0)) fail(ErrorKind::Numeric, "biorth_to_standard: non-positive trace");
  return hermitian_part(out / tr);
}

}  // namespace ptnoether
