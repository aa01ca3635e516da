#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace ptnoether {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int kMaxDim = 16;
inline constexpr Complex kI{0.0, 1.0};

// Builds a matrix from row-major entries; rejects empty shapes and non-finite values.
ComplexMatrix make_matrix(int rows, int cols, std::span<const Complex> row_major);
void require_finite(const ComplexMatrix& m, const char* what);
void require_square(const ComplexMatrix& m, const char* what);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenSystem {
  ComplexVector values;
  ComplexMatrix right;  // columns |phi_k>
  ComplexMatrix left;   // rows <phi_hat_k|, empty when condition_flag is set
  bool condition_flag = false;
  double condition_number = 1.0;
};

// Ordering: descending real part, then descending imaginary part.
// Right vectors have unit norm; left = right^{-1}.
EigenSystem eig(const ComplexMatrix& h, double tol = 1e-10);

// Condition threshold on the right-vector matrix beyond which the eigenbasis is treated as defective.
inline constexpr double kConditionLimit = 1e8;

ComplexMatrix matexp(const ComplexMatrix& m, double tol = 1e-10);

double max_norm(const ComplexMatrix& m);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hermitian_part(const ComplexMatrix& m);
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
// Smallest eigenvalue of the Hermitian part.
double min_hermitian_eigenvalue(const ComplexMatrix& m);

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

namespace spin1 {
ComplexMatrix Jx();
ComplexMatrix Jz();
}  // namespace spin1

}  // namespace ptnoether
