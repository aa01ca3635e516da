#include "ptnoether/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

ComplexMatrix u_qubit(double s, double a, double t) {
  const double tau = s * t;
  double A, B, C;
  const double d = 1.0 - a * a;
  if (classify_regime(a) == Regime::ExceptionalPoint) {
    A = 1.0;
    B = a * tau;
    C = tau;
  } else if (d > 0) {
    const double w = std::sqrt(d);
    A = std::cos(w * tau);
    C = std::sin(w * tau) / w;
    B = a * C;
  } else {
    const double w = std::sqrt(-d);
    A = std::cosh(w * tau);
    C = std::sinh(w * tau) / w;
    B = a * C;
  }
  ComplexMatrix u(2, 2);
  u << A + B, -kI * C, -kI * C, A - B;
  return u;
}

}  // namespace

double Trajectory::spread_real() const {
  if (values.empty()) return 0;
  double lo = values.front().real(), hi = lo;
  for (const auto& v : values) {
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  return hi - lo;
}

double Trajectory::max_drift() const {
  double worst = 0;
  for (const auto& v : values) worst = std::max(worst, std::abs(v - values.front()));
  return worst;
}

double Trajectory::max_abs_imag() const {
  double worst = 0;
  for (const auto& v : values) worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

ComplexMatrix u_pt(const PTSystem& sys, double t) {
  if (!std::isfinite(t)) fail(ErrorKind::InvalidArgument, "u_pt: time must be finite");
  switch (sys.dim) {
    case 2: return u_qubit(sys.s, sys.a, t);
    case 4: {
      const ComplexMatrix u = u_qubit(sys.s, sys.a, t);
      return kron(u, u);
    }
    default: return matexp(-kI * t * sys.hamiltonian);
  }
}

ComplexMatrix evolve_standard(const PTSystem& sys, const ComplexMatrix& rho0, double t) {
  require_density(rho0, 1e-9, "initial density");
  if (rho0.rows() != sys.dim) fail(ErrorKind::InvalidArgument, "evolve_standard: dimension mismatch");
  const ComplexMatrix u = u_pt(sys, t);
  const ComplexMatrix out = u * rho0 * u.adjoint();
  const double tr = out.trace().real();
  if (!(tr > 0) || !std::isfinite(tr)) fail(ErrorKind::Numeric, "evolve_standard: vanishing or non-finite trace");
  return hermitian_part(out / tr);
}

BiorthDensity evolve_biorth(const BiorthDensity& rho_b0, const PTSystem& sys, double t) {
  sys.require_biorth("evolve_biorth");
  if (rho_b0.system_id != sys.id) fail(ErrorKind::InvalidArgument, "evolve_biorth: density belongs to another system");
  const auto n = sys.eigen.values.size();
  ComplexVector left_factor(n), right_factor(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex e = sys.eigen.values(k);
    left_factor(k) = std::exp(-kI * e * t);
    right_factor(k) = sys.regime == Regime::Broken ? left_factor(k) : std::exp(kI * e * t);
  }
  BiorthDensity out = rho_b0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.coeff(i, j) = left_factor(i) * rho_b0.coeff(i, j) * right_factor(j);
  out.coeff = hermitian_part(out.coeff);
  for (auto& m : out.ensemble) m.state.coeffs = left_factor.cwiseProduct(m.state.coeffs);
  return out;
}

std::vector<double> linspace(double start, double stop, std::size_t points) {
  if (points < 2) fail(ErrorKind::InvalidArgument, "linspace needs at least 2 points");
  std::vector<double> out(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

namespace {

void check_times(std::span<const double> times) {
  if (times.empty()) fail(ErrorKind::InvalidArgument, "trajectory needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) fail(ErrorKind::InvalidArgument, "trajectory times must be finite");
    if (i > 0 && !(times[i] > times[i - 1])) fail(ErrorKind::InvalidArgument, "trajectory times must increase");
  }
}

}  // namespace

Trajectory expectation_trajectory(const ComplexMatrix& rho0_std, const PTSystem& sys, const Observable& f,
                                  std::span<const double> times) {
  if (f.picture != Picture::Standard)
    fail(ErrorKind::InvalidArgument, "standard-picture trajectory needs a standard observable");
  check_times(times);
  require_density(rho0_std, 1e-9, "initial density");
  Trajectory tr{{times.begin(), times.end()}, std::vector<Complex>(times.size()), f.label, Picture::Standard};
  detail::parallel_for(times.size(), [&](std::size_t i) {
    tr.values[i] = standard_expectation(evolve_standard(sys, rho0_std, times[i]), f);
  });
  return tr;
}

Trajectory expectation_trajectory(const BiorthDensity& rho_b0, const PTSystem& sys, const Observable& f,
                                  std::span<const double> times) {
  if (f.picture != Picture::Biorthogonal)
    fail(ErrorKind::InvalidArgument, "biorthogonal trajectory needs a biorthogonal observable");
  check_times(times);
  sys.require_biorth("expectation_trajectory");
  Trajectory tr{{times.begin(), times.end()}, std::vector<Complex>(times.size()), f.label, Picture::Biorthogonal};
  detail::parallel_for(times.size(), [&](std::size_t i) {
    tr.values[i] = gen_expectation(evolve_biorth(rho_b0, sys, times[i]), f);
  });
  return tr;
}

NoetherCheck noether_residual(const BiorthDensity& rho_b, const PTSystem& sys, const Observable& f, double t,
                              double dt) {
  sys.require_biorth("noether_residual");
  if (!(dt > 0)) fail(ErrorKind::InvalidArgument, "noether_residual: dt must be positive");
  if (f.picture != Picture::Biorthogonal || f.system_id != sys.id)
    fail(ErrorKind::InvalidArgument, "noether_residual: observable must be biorthogonal on this system");
  NoetherCheck out;
  out.lhs = (gen_expectation(evolve_biorth(rho_b, sys, t + dt), f) -
             gen_expectation(evolve_biorth(rho_b, sys, t - dt), f)) /
            (2.0 * dt);
  const BiorthDensity now = evolve_biorth(rho_b, sys, t);
  const auto E = sys.eigen.values.asDiagonal();
  const ComplexMatrix g = sys.regime == Regime::Broken ? ComplexMatrix(f.coeff * E + E * f.coeff)
                                                       : ComplexMatrix(f.coeff * E - E * f.coeff);
  out.rhs = -kI * (now.coeff * g).trace();
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace ptnoether
