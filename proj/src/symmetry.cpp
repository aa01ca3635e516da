#include "ptnoether/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

ComplexVector vec(const ComplexMatrix& m) { return Eigen::Map<const ComplexVector>(m.data(), m.size()); }

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) { return Eigen::Map<const ComplexMatrix>(v.data(), n, n); }

// Column-major vec: vec(A X B) = (B^T kron A) vec(X).
ComplexMatrix relation_map(SymmetryKind kind, const ComplexMatrix& h) {
  const auto n = h.rows();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix right = kron(h.transpose(), I);  // F H
  switch (kind) {
    case SymmetryKind::Commutant: return right - kron(I, h);
    case SymmetryKind::Anticommutant: return right + kron(I, h);
    case SymmetryKind::Intertwining: return right - kron(I, ComplexMatrix(h.adjoint()));
  }
  return right;
}

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

// I, Paulis and their tensor products for N = 2^q; generalized Gell-Mann otherwise. Unit Frobenius norm.
std::vector<ComplexMatrix> canonical_operators(Eigen::Index n) {
  std::vector<ComplexMatrix> ops;
  if (is_power_of_two(n)) {
    const std::vector<ComplexMatrix> single{pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
    ops.push_back(ComplexMatrix::Identity(1, 1));
    for (Eigen::Index size = 1; size < n; size *= 2) {
      std::vector<ComplexMatrix> next;
      for (const auto& a : ops)
        for (const auto& p : single) next.push_back(kron(a, p));
      ops = std::move(next);
    }
  } else {
    ops.push_back(ComplexMatrix::Identity(n, n));
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        ComplexMatrix sym = ComplexMatrix::Zero(n, n), anti = ComplexMatrix::Zero(n, n);
        sym(j, k) = sym(k, j) = 1;
        anti(j, k) = -kI;
        anti(k, j) = kI;
        ops.push_back(sym);
        ops.push_back(anti);
      }
    for (Eigen::Index j = 0; j < n; ++j) {
      ComplexMatrix d = ComplexMatrix::Zero(n, n);
      d(j, j) = 1;
      ops.push_back(d);
    }
  }
  for (auto& op : ops) op /= op.norm();
  return ops;
}

}  // namespace

const char* symmetry_kind_name(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::Commutant: return "commutant";
    case SymmetryKind::Anticommutant: return "anticommutant";
    case SymmetryKind::Intertwining: return "intertwining";
  }
  return "unknown";
}

double relation_residual(SymmetryKind kind, const ComplexMatrix& f, const ComplexMatrix& h) {
  switch (kind) {
    case SymmetryKind::Commutant: return max_norm(f * h - h * f);
    case SymmetryKind::Anticommutant: return max_norm(f * h + h * f);
    case SymmetryKind::Intertwining: return max_norm(f * h - h.adjoint() * f);
  }
  return INFINITY;
}

SymmetrySpace symmetry_basis(SymmetryKind kind, const ComplexMatrix& h, double tol) {
  require_square(h, "symmetry input");
  require_finite(h, "symmetry input");
  if (h.rows() > kMaxDim) fail(ErrorKind::InvalidArgument, "symmetry search supports N <= 16");
  const auto n = h.rows();
  const ComplexMatrix m = relation_map(kind, h);
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = tol * sv(0);

  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= threshold) null_cols.push_back(i);
  const auto d = static_cast<Eigen::Index>(null_cols.size());
  ComplexMatrix Q(n * n, d);
  for (Eigen::Index k = 0; k < d; ++k) Q.col(k) = svd.matrixV().col(null_cols[static_cast<std::size_t>(k)]);

  SymmetrySpace space;
  space.kind = kind;
  if (d > 0) {
    // Deterministic basis: project canonical operators, order by alignment, Gram-Schmidt.
    const auto canon = canonical_operators(n);
    std::vector<ComplexVector> proj;
    std::vector<double> align;
    for (const auto& c : canon) {
      proj.push_back(Q * (Q.adjoint() * vec(c)));
      align.push_back(proj.back().norm());
    }
    std::vector<std::size_t> order(canon.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return align[x] > align[y] + 1e-12; });
    std::vector<ComplexVector> chosen;
    for (std::size_t idx : order) {
      if (static_cast<Eigen::Index>(chosen.size()) == d) break;
      ComplexVector v = proj[idx];
      for (const auto& b : chosen) v -= b * b.dot(v);
      for (const auto& b : chosen) v -= b * b.dot(v);
      if (v.norm() > 1e-6) chosen.push_back(v / v.norm());
    }
    for (Eigen::Index k = 0; static_cast<Eigen::Index>(chosen.size()) < d && k < d; ++k) {
      ComplexVector v = Q.col(k);
      for (const auto& b : chosen) v -= b * b.dot(v);
      if (v.norm() > 1e-6) chosen.push_back(v / v.norm());
    }
    for (const auto& v : chosen) {
      space.basis.push_back(unvec(v, n));
      space.residuals.push_back(relation_residual(kind, space.basis.back(), h));
    }
  }
  space.dimension = space.basis.size();
  return space;
}

SymmetrySpace commutant_basis(const ComplexMatrix& h, double tol) { return symmetry_basis(SymmetryKind::Commutant, h, tol); }
SymmetrySpace anticommutant_basis(const ComplexMatrix& h, double tol) {
  return symmetry_basis(SymmetryKind::Anticommutant, h, tol);
}
SymmetrySpace intertwining_basis(const ComplexMatrix& h, double tol) {
  return symmetry_basis(SymmetryKind::Intertwining, h, tol);
}

SymmetryClass classify(const ComplexMatrix& f, const ComplexMatrix& h, double tol) {
  if (f.rows() != h.rows() || f.cols() != h.cols()) fail(ErrorKind::InvalidArgument, "classify: dimension mismatch");
  const bool commutes = relation_residual(SymmetryKind::Commutant, f, h) < tol;
  const bool anti = relation_residual(SymmetryKind::Anticommutant, f, h) < tol;
  if (commutes && anti) return SymmetryClass::Degenerate;
  if (commutes) return SymmetryClass::StandardSymmetry;
  if (anti) return SymmetryClass::ChiralSymmetry;
  return SymmetryClass::None;
}

double projection_residual(const SymmetrySpace& space, const ComplexMatrix& f) {
  const double norm = f.norm();
  if (!(norm > 0)) fail(ErrorKind::InvalidArgument, "projection_residual: zero operator");
  ComplexVector v = vec(f);
  ComplexVector p = ComplexVector::Zero(v.size());
  for (const auto& b : space.basis) {
    const ComplexVector bv = vec(b);
    p += bv * bv.dot(v);
  }
  return (v - p).norm() / norm;
}

double max_principal_angle(const SymmetrySpace& a, const SymmetrySpace& b) {
  if (a.dimension != b.dimension) return M_PI / 2;
  if (a.dimension == 0) return 0.0;
  const auto n2 = a.basis.front().size();
  ComplexMatrix qa(n2, static_cast<Eigen::Index>(a.dimension)), qb(n2, static_cast<Eigen::Index>(b.dimension));
  for (std::size_t k = 0; k < a.dimension; ++k) qa.col(static_cast<Eigen::Index>(k)) = vec(a.basis[k]);
  for (std::size_t k = 0; k < b.dimension; ++k) qb.col(static_cast<Eigen::Index>(k)) = vec(b.basis[k]);
  Eigen::JacobiSVD<ComplexMatrix> svd(qa.adjoint() * qb);
  const double smin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(smin);
}

std::vector<Observable> conserved_observables(const PTSystem& sys, double tol) {
  sys.require_biorth("conserved_observables");
  const bool broken = sys.regime == Regime::Broken;
  const SymmetrySpace space =
      symmetry_basis(broken ? SymmetryKind::Anticommutant : SymmetryKind::Commutant, sys.hamiltonian, tol);
  const ComplexVector& E = sys.eigen.values;
  const double pattern_tol = 1e-6 * std::max(1.0, E.cwiseAbs().maxCoeff());
  const auto n = E.size();

  std::vector<ComplexMatrix> parts;
  for (const auto& b : space.basis) {
    ComplexMatrix c = sys.eigen.left * b * sys.eigen.right;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Complex gap = broken ? E(i) + E(j) : E(i) - E(j);
        if (std::abs(gap) > pattern_tol) c(i, j) = 0;
      }
    parts.push_back(0.5 * (c + c.adjoint()));
    parts.push_back(ComplexMatrix(-0.5 * kI * (c - c.adjoint())));
  }
  // Gram-Schmidt under the real inner product Re tr(A^dagger B), which keeps Hermitian matrices Hermitian.
  std::vector<ComplexMatrix> herm;
  for (auto p : parts) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : herm) p -= (q.adjoint() * p).trace().real() * q;
    const double nrm = p.norm();
    if (nrm > 1e-8) herm.push_back(p / nrm);
  }
  std::vector<Observable> out;
  for (std::size_t k = 0; k < herm.size(); ++k) {
    Observable f = Observable::from_coefficients(sys, herm[k], "conserved_" + std::to_string(k));
    f.symmetry_class = classify(f.matrix, sys.hamiltonian, 1e-8 * std::max(1.0, max_norm(f.matrix)));
    out.push_back(std::move(f));
  }
  return out;
}

NoetherCheck general_noether_residual(const ComplexMatrix& h, const ComplexMatrix& rho_std0, const ComplexMatrix& f,
                                      double t, double dt) {
  require_square(h, "hamiltonian");
  require_density(rho_std0, 1e-9, "initial density");
  if (f.rows() != h.rows() || rho_std0.rows() != h.rows())
    fail(ErrorKind::InvalidArgument, "general_noether_residual: dimension mismatch");
  if (!(dt > 0)) fail(ErrorKind::InvalidArgument, "general_noether_residual: dt must be positive");
  const EigenSystem es = eig(h);
  if (es.condition_flag) fail(ErrorKind::Regime, "general_noether_residual: matrix is near-defective");
  const ComplexVector& E = es.values;
  const double re_spread = E.real().maxCoeff() - E.real().minCoeff();
  if (re_spread > 1e-9 * std::max(1.0, E.cwiseAbs().maxCoeff()))
    fail(ErrorKind::InvalidArgument, "general_noether_residual: eigenvalues must share one real part");
  const double re = E.real().mean();

  const ComplexMatrix rho0 = es.left * rho_std0 * es.left.adjoint();
  const ComplexMatrix fc = es.left * f * es.right;
  auto coeff_at = [&](double time) {
    const ComplexVector d = (-kI * time * E).array().exp().matrix();
    return ComplexMatrix(d.asDiagonal() * rho0 * d.conjugate().asDiagonal());
  };
  auto value = [&](double time) { return (coeff_at(time) * fc).trace(); };

  NoetherCheck out;
  out.lhs = (value(t + dt) - value(t - dt)) / (2.0 * dt);
  const ComplexMatrix rho_b = es.right * coeff_at(t) * es.left;
  out.rhs = -kI * (rho_b * (anticommutator(f, h) - 2.0 * re * f)).trace();
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

std::string format_space(const SymmetrySpace& space) {
  std::ostringstream os;
  os << "kind " << symmetry_kind_name(space.kind) << "\n";
  os << "dimension " << space.dimension << "\n";
  char buf[64];
  for (std::size_t k = 0; k < space.dimension; ++k) {
    std::snprintf(buf, sizeof buf, "%.3e", space.residuals[k]);
    os << "element " << k << " residual " << buf << "\n";
    const auto& m = space.basis[k];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.12g%+.12gj", m(i, j).real() == 0 ? 0.0 : m(i, j).real(),
                      m(i, j).imag() == 0 ? 0.0 : m(i, j).imag());
        os << (j ? " " : "  ") << buf;
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace ptnoether
