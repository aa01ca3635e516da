#include "ptnoether/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "ptnoether/errors.hpp"

namespace ptnoether {

ComplexMatrix make_matrix(int rows, int cols, std::span<const Complex> row_major) {
  if (rows < 1 || cols < 1) fail(ErrorKind::InvalidArgument, "matrix shape must be at least 1x1");
  if (row_major.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    fail(ErrorKind::InvalidArgument, "entry count does not match rows*cols");
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = row_major[static_cast<std::size_t>(r * cols + c)];
  require_finite(m, "matrix");
  return m;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    fail(ErrorKind::InvalidArgument, std::string(what) + " must be square");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

EigenSystem eig(const ComplexMatrix& h, double tol) {
  require_square(h, "eig input");
  if (h.rows() > kMaxDim) fail(ErrorKind::InvalidArgument, "eig supports N <= 16");
  require_finite(h, "eig input");
  const Eigen::Index n = h.rows();

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(h, true);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Numeric, "eigensolver did not converge");

  const ComplexVector vals = solver.eigenvalues();
  const ComplexMatrix vecs = solver.eigenvectors();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  const double tie = 1e-9 * scale;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const Complex a = vals(x), b = vals(y);
    if (std::abs(a.real() - b.real()) > tie) return a.real() > b.real();
    return a.imag() > b.imag() + tie;
  });

  EigenSystem es;
  es.values.resize(n);
  es.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    es.values(k) = vals(order[static_cast<std::size_t>(k)]);
    ComplexVector v = vecs.col(order[static_cast<std::size_t>(k)]);
    es.right.col(k) = v / v.norm();
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(es.right);
  const auto& sv = svd.singularValues();
  const double smin = sv(n - 1);
  es.condition_number = smin > 0 ? sv(0) / smin : INFINITY;
  es.condition_flag = smin < tol || es.condition_number > kConditionLimit;
  if (!es.condition_flag) es.left = es.right.inverse();
  return es;
}

ComplexMatrix matexp(const ComplexMatrix& m, double tol) {
  require_square(m, "matexp input");
  require_finite(m, "matexp input");
  const ComplexMatrix e = m.exp();
  const ComplexMatrix half = (0.5 * m).exp();
  const double residual = max_norm(e - half * half) / std::max(1.0, max_norm(e));
  if (!e.allFinite() || residual > tol)
    fail(ErrorKind::Numeric, "matrix exponential did not reach tolerance (residual " + std::to_string(residual) + ")");
  return e;
}

double max_norm(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a - b), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_hermitian_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

namespace spin1 {
ComplexMatrix Jx() {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = r;
  return m;
}
ComplexMatrix Jz() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 1;
  m(2, 2) = -1;
  return m;
}
}  // namespace spin1

}  // namespace ptnoether
