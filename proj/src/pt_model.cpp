#include "ptnoether/pt_model.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

std::uint64_t next_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

void check_params(double s, double a) {
  if (!(s > 0) || !std::isfinite(s)) fail(ErrorKind::InvalidArgument, "energy scale s must be positive");
  if (!(a >= 0) || !std::isfinite(a)) fail(ErrorKind::InvalidArgument, "non-Hermiticity a must be >= 0");
}

// sqrt(1 - a^2) on the branch +i sqrt(a^2 - 1) for a > 1.
Complex root(double a) {
  const double d = 1.0 - a * a;
  return d >= 0 ? Complex(std::sqrt(d), 0.0) : Complex(0.0, std::sqrt(-d));
}

}  // namespace

void PTSystem::require_biorth(const char* operation) const {
  if (regime == Regime::ExceptionalPoint)
    fail(ErrorKind::Regime, std::string(operation) + ": unavailable at the exceptional point (a = 1)");
  if (eigen.condition_flag)
    fail(ErrorKind::Regime, std::string(operation) + ": eigenbasis is near-defective (close to the exceptional point)");
}

double PTSystem::spectrum_deviation() const {
  double worst = 0;
  for (Eigen::Index k = 0; k < eigen.values.size(); ++k) {
    const Complex e = eigen.values(k);
    worst = std::max(worst, regime == Regime::Broken ? std::abs(e.real()) : std::abs(e.imag()));
  }
  return worst;
}

Regime classify_regime(double a) {
  if (std::abs(a - 1.0) < kEpThreshold) return Regime::ExceptionalPoint;
  return a < 1.0 ? Regime::Unbroken : Regime::Broken;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Unbroken: return "unbroken";
    case Regime::Broken: return "broken";
    case Regime::ExceptionalPoint: return "exceptional_point";
  }
  return "unknown";
}

PTSystem build_single_qubit(double s, double a, FConvention conv) {
  check_params(s, a);
  PTSystem sys;
  sys.s = s;
  sys.a = a;
  sys.dim = 2;
  sys.convention = conv;
  sys.regime = classify_regime(a);
  sys.id = next_id();
  sys.hamiltonian = s * (pauli::X() + kI * a * pauli::Z());

  const Complex r = root(a);
  const Complex A1 = kI * a + r;
  const Complex A2 = kI * a - r;
  sys.A = {A1, A2};

  auto right_scale = [&](Complex Ak) -> Complex {
    if (conv == FConvention::PaperFigures) return 1.0 / std::sqrt(2.0);
    return 1.0 / std::sqrt(1.0 + std::norm(Ak));
  };
  const Complex f1 = right_scale(A1);
  const Complex f2 = right_scale(A2);

  sys.eigen.values.resize(2);
  sys.eigen.values << s * r, -s * r;
  sys.eigen.right.resize(2, 2);
  sys.eigen.right << f1 * A1, f2 * A2, f1, f2;

  if (sys.regime == Regime::ExceptionalPoint) {
    sys.f_coeffs = {f1, f2, 0.0, 0.0};
    sys.eigen.condition_flag = true;
    sys.eigen.condition_number = INFINITY;
    return sys;
  }

  // H is complex-symmetric: the left row for E_k is proportional to (A_k, 1) without conjugation.
  const Complex g1 = 1.0 / (f1 * (1.0 + A1 * A1));  // conj(f3)
  const Complex g2 = 1.0 / (f2 * (1.0 + A2 * A2));  // conj(f4)
  sys.f_coeffs = {f1, f2, std::conj(g1), std::conj(g2)};
  sys.eigen.left.resize(2, 2);
  sys.eigen.left << g1 * A1, g1, g2 * A2, g2;

  Eigen::JacobiSVD<ComplexMatrix> svd(sys.eigen.right);
  const auto& sv = svd.singularValues();
  sys.eigen.condition_number = sv(0) / sv(1);
  if (sys.eigen.condition_number > kConditionLimit) {
    sys.eigen.condition_flag = true;
    sys.eigen.left.resize(0, 0);
  }

  if (!sys.eigen.condition_flag && normalization_residual(sys) > 1e-10)
    fail(ErrorKind::Numeric, "eigenvector normalization residual too large");
  return sys;
}

PTSystem build_two_qubit(double s, double a, FConvention conv) {
  auto q = std::make_shared<const PTSystem>(build_single_qubit(s, a, conv));
  PTSystem sys;
  sys.s = s;
  sys.a = a;
  sys.dim = 4;
  sys.convention = conv;
  sys.regime = q->regime;
  sys.id = next_id();
  sys.A = q->A;
  sys.f_coeffs = q->f_coeffs;
  const ComplexMatrix I2 = pauli::I();
  const ComplexMatrix Sx = kron(pauli::X(), I2) + kron(I2, pauli::X());
  const ComplexMatrix Sz = kron(pauli::Z(), I2) + kron(I2, pauli::Z());
  sys.hamiltonian = s * (Sx + kI * a * Sz);

  const ComplexVector& e = q->eigen.values;
  sys.eigen.values.resize(4);
  sys.eigen.values << e(0) + e(0), e(0) + e(1), e(1) + e(0), e(1) + e(1);
  sys.eigen.right = kron(q->eigen.right, q->eigen.right);
  sys.eigen.condition_flag = q->eigen.condition_flag;
  sys.eigen.condition_number = q->eigen.condition_number * q->eigen.condition_number;
  if (!sys.eigen.condition_flag) sys.eigen.left = kron(q->eigen.left, q->eigen.left);
  sys.qubit = std::move(q);
  return sys;
}

PTSystem build_spin1(double s, double gamma) {
  check_params(s, gamma / s);
  PTSystem sys;
  sys.s = s;
  sys.a = gamma / s;
  sys.dim = 3;
  sys.regime = classify_regime(sys.a);
  sys.id = next_id();
  sys.hamiltonian = s * spin1::Jx() + kI * gamma * spin1::Jz();
  sys.eigen = eig(sys.hamiltonian);
  if (sys.regime == Regime::ExceptionalPoint) {
    sys.eigen.condition_flag = true;
    sys.eigen.left.resize(0, 0);
  }
  return sys;
}

double normalization_residual(const PTSystem& sys) {
  if (sys.dim == 3 || !sys.biorth_available()) return 0.0;
  const auto& f = sys.f_coeffs;
  const Complex A1 = sys.A[0], A2 = sys.A[1];
  return std::abs(f[0] * std::conj(f[2]) * (1.0 + A1 * A1) - 1.0) +
         std::abs(f[1] * std::conj(f[3]) * (1.0 + A2 * A2) - 1.0);
}

double biorthogonality_residual(const PTSystem& sys) {
  sys.require_biorth("biorthogonality check");
  const auto n = sys.eigen.right.cols();
  return max_norm(sys.eigen.left * sys.eigen.right - ComplexMatrix::Identity(n, n));
}

double closure_residual(const PTSystem& sys) {
  sys.require_biorth("closure check");
  const auto n = sys.eigen.right.cols();
  return max_norm(sys.eigen.right * sys.eigen.left - ComplexMatrix::Identity(n, n));
}

double reconstruction_residual(const PTSystem& sys) {
  sys.require_biorth("reconstruction check");
  return max_norm(sys.eigen.right * sys.eigen.values.asDiagonal() * sys.eigen.left - sys.hamiltonian);
}

}  // namespace ptnoether
