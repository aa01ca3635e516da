#include "ptnoether/optics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "ptnoether/dynamics.hpp"
#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

constexpr double kPi = std::numbers::pi;

Complex inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace(); }

Complex best_complex_scale(const ComplexMatrix& u, const ComplexMatrix& target) {
  const double uu = inner(u, u).real();
  if (!(uu > 0)) return 0.0;
  return inner(u, target) / uu;
}

double relative_residual(const ComplexMatrix& target, const ComplexMatrix& approx) {
  return (target - approx).norm() / target.norm();
}

void require_target(const ComplexMatrix& target) {
  if (target.rows() != 2 || target.cols() != 2) fail(ErrorKind::InvalidArgument, "circuit targets are 2x2");
  require_finite(target, "target");
  if (!(target.norm() > 0)) fail(ErrorKind::InvalidArgument, "zero target");
}

// Phase-insensitive residual vector for the least-squares fallback; x = (theta1, theta2, theta3, xi1).
struct FitFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  ComplexMatrix target;
  int inputs() const { return 4; }
  int values() const { return 8; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const ComplexMatrix u = circuit_product(template_circuit(x(0), x(1), x(2), x(3), 1.0));
    const ComplexMatrix r = (target - best_complex_scale(u, target) * u) / target.norm();
    for (int k = 0; k < 4; ++k) {
      f(2 * k) = r(k / 2, k % 2).real();
      f(2 * k + 1) = r(k / 2, k % 2).imag();
    }
    return 0;
  }
};

// Accepted branches are ranked by the strict (real-scale) residual, the rest by the phase-free one.
bool better(const CompileReport& a, const CompileReport& b, double tol) {
  const bool ok_a = a.residual < tol, ok_b = b.residual < tol;
  if (ok_a != ok_b) return ok_a;
  if (ok_a) return a.strict_residual < b.strict_residual - 1e-12;
  return a.residual < b.residual;
}

CompileReport finish(WavePlateCircuit circuit, const ComplexMatrix& target) {
  for (auto& e : circuit.elements) {
    if (auto* q = std::get_if<QWP>(&e)) q->angle = normalize_angle(q->angle);
    if (auto* h = std::get_if<HWP>(&e)) h->angle = normalize_angle(h->angle);
    if (auto* l = std::get_if<Loss>(&e)) l->xi1 = normalize_angle(l->xi1);
  }
  CompileReport rep;
  const ComplexMatrix u = circuit_product(circuit);
  rep.fitted_scale = best_complex_scale(u, target);
  circuit.scale = std::abs(rep.fitted_scale);
  rep.circuit = circuit;
  rep.residual = relative_residual(target, rep.fitted_scale * u);
  rep.strict_residual = verify(circuit, target);
  return rep;
}

}  // namespace

double normalize_angle(double x) {
  double y = std::remainder(x, 2 * kPi);  // [-pi, pi]
  if (y <= -kPi) y += 2 * kPi;
  return y == 0 ? 0.0 : y;
}

ComplexMatrix waveplate_matrix(const WavePlateElement& e) {
  ComplexMatrix m(2, 2);
  if (const auto* q = std::get_if<QWP>(&e)) {
    const double c = std::cos(q->angle), s = std::sin(q->angle);
    const Complex off = Complex(1, -1) * s * c;
    m << c * c + kI * s * s, off, off, s * s + kI * c * c;
  } else if (const auto* h = std::get_if<HWP>(&e)) {
    const double c = std::cos(2 * h->angle), s = std::sin(2 * h->angle);
    m << c, s, s, -c;
  } else {
    const auto& l = std::get<Loss>(e);
    m << 0, std::sin(2 * l.xi1), std::sin(2 * l.xi2), 0;
  }
  return m;
}

ComplexMatrix circuit_product(const WavePlateCircuit& c) {
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  for (const auto& e : c.elements) u = waveplate_matrix(e) * u;
  return u;
}

WavePlateCircuit template_circuit(double theta1, double theta2, double theta3, double xi1, double scale) {
  WavePlateCircuit c;
  c.elements = {QWP{0.0}, HWP{theta1}, HWP{0.0}, Loss{xi1, kPi / 4}, QWP{theta2}, HWP{theta3}, QWP{kPi / 4}};
  c.scale = scale;
  return c;
}

bool has_template_shape(const WavePlateCircuit& c, double tol) {
  if (c.elements.size() != 7) return false;
  const auto* q0 = std::get_if<QWP>(&c.elements[0]);
  const auto* h1 = std::get_if<HWP>(&c.elements[1]);
  const auto* h0 = std::get_if<HWP>(&c.elements[2]);
  const auto* l = std::get_if<Loss>(&c.elements[3]);
  const auto* q2 = std::get_if<QWP>(&c.elements[4]);
  const auto* h3 = std::get_if<HWP>(&c.elements[5]);
  const auto* q4 = std::get_if<QWP>(&c.elements[6]);
  return q0 && h1 && h0 && l && q2 && h3 && q4 && std::abs(q0->angle) < tol && std::abs(h0->angle) < tol &&
         std::abs(l->xi2 - kPi / 4) < tol && std::abs(q4->angle - kPi / 4) < tol && std::abs(std::sin(2 * l->xi1)) <= 1.0;
}

double verify(const WavePlateCircuit& c, const ComplexMatrix& target) {
  require_target(target);
  const ComplexMatrix u = circuit_product(c);
  const double uu = inner(u, u).real();
  const double scale = uu > 0 ? std::max(0.0, inner(u, target).real() / uu) : 0.0;
  return relative_residual(target, scale * u);
}

double verify_up_to_phase(const WavePlateCircuit& c, const ComplexMatrix& target) {
  require_target(target);
  const ComplexMatrix u = circuit_product(c);
  return relative_residual(target, best_complex_scale(u, target) * u);
}

CompileReport compile_target(const ComplexMatrix& target, const CompileOptions& opt) {
  require_target(target);
  const double tnorm = target.norm();

  // Closed form applies to targets of the form [[A+B, -iC], [-iC, A-B]] with real A, B, C.
  const Complex Ac = 0.5 * (target(0, 0) + target(1, 1));
  const Complex Bc = 0.5 * (target(0, 0) - target(1, 1));
  const Complex Cc = kI * target(0, 1);
  const double structure = std::abs(Ac.imag()) + std::abs(Bc.imag()) + std::abs(Cc.imag()) +
                           std::abs(target(0, 1) - target(1, 0));
  CompileReport best;
  best.residual = INFINITY;
  if (structure <= 1e-12 * tnorm) {
    const double A = Ac.real(), B = Bc.real(), C = Cc.real();
    const double R = std::hypot(A, C);
    std::vector<int> ks{0};
    for (int k = 1; k <= opt.branch_window; ++k) {
      ks.push_back(k);
      ks.push_back(-k);
    }
    for (int k1 : ks)
      for (int k2 : ks)
        for (int sigma : {1, -1}) {
          const double four_t1 = sigma > 0 ? std::atan2(-C, A) : std::atan2(C, -A);
          const double l2 = sigma * R + B, l1 = sigma * R - B;
          if (l2 == 0 || std::abs(l1 / l2) > 1.0 + 1e-12) continue;
          const double xi1 = 0.5 * std::asin(std::clamp(l1 / l2, -1.0, 1.0));
          const double t1 = four_t1 / 4;
          const double t2 = (2 * k1 + 0.75) * kPi - 2 * t1;
          const double t3 = (k2 / 2.0 + 0.125) * kPi - t1;
          CompileReport rep = finish(template_circuit(t1, t2, t3, xi1, 1.0), target);
          rep.k1 = k1;
          rep.k2 = k2;
          if (better(rep, best, opt.tol)) best = rep;
        }
    if (best.residual < opt.tol) return best;
  }

  // Least squares over (theta1, theta2, theta3, xi1) from a deterministic set of starts.
  FitFunctor functor;
  functor.target = target;
  Eigen::NumericalDiff<FitFunctor> diff(functor);
  for (int s = 0; s < opt.fallback_starts; ++s) {
    Eigen::VectorXd x(4);
    const double u = (s + 0.5) / opt.fallback_starts;
    x << kPi * u, kPi * std::fmod(u * 7.0, 1.0), kPi * std::fmod(u * 13.0, 1.0), 0.5 * kPi * std::fmod(u * 3.0, 1.0);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor>> lm(diff);
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = 4000;
    lm.minimize(x);
    CompileReport rep = finish(template_circuit(x(0), x(1), x(2), x(3), 1.0), target);
    rep.used_fallback = true;
    if (rep.residual < best.residual) best = rep;
    if (best.residual < opt.tol) return best;
  }
  fail(ErrorKind::Numeric, "circuit compilation failed; best residual " + std::to_string(best.residual));
}

CompileReport compile_report(const PTSystem& sys, double t, const CompileOptions& opt) {
  if (sys.dim != 2) fail(ErrorKind::InvalidArgument, "compile needs a single-qubit system");
  if (!std::isfinite(t)) fail(ErrorKind::InvalidArgument, "compile: time must be finite");
  return compile_target(u_pt(sys, t), opt);
}

WavePlateCircuit compile(const PTSystem& sys, double t, double tol) {
  CompileOptions opt;
  opt.tol = tol;
  return compile_report(sys, t, opt).circuit;
}

std::string serialize(const WavePlateCircuit& c) {
  std::ostringstream os;
  char buf[96];
  for (const auto& e : c.elements) {
    if (const auto* q = std::get_if<QWP>(&e)) {
      std::snprintf(buf, sizeof buf, "QWP %.12g\n", q->angle);
    } else if (const auto* h = std::get_if<HWP>(&e)) {
      std::snprintf(buf, sizeof buf, "HWP %.12g\n", h->angle);
    } else {
      const auto& l = std::get<Loss>(e);
      std::snprintf(buf, sizeof buf, "LOSS %.12g %.12g\n", l.xi1, l.xi2);
    }
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "SCALE %.12g\n", c.scale);
  os << buf;
  return os.str();
}

WavePlateCircuit parse_circuit(const std::string& text) {
  WavePlateCircuit c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_scale = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    double x = 0, y = 0;
    auto bad = [&] { fail(ErrorKind::InvalidArgument, "circuit line " + std::to_string(lineno) + ": malformed element"); };
    if (tag == "QWP") {
      if (!(ls >> x)) bad();
      c.elements.push_back(QWP{x});
    } else if (tag == "HWP") {
      if (!(ls >> x)) bad();
      c.elements.push_back(HWP{x});
    } else if (tag == "LOSS") {
      if (!(ls >> x >> y)) bad();
      c.elements.push_back(Loss{x, y});
    } else if (tag == "SCALE") {
      if (!(ls >> x) || !(x > 0)) bad();
      c.scale = x;
      have_scale = true;
    } else {
      bad();
    }
  }
  if (!have_scale) fail(ErrorKind::InvalidArgument, "circuit has no SCALE line");
  return c;
}

}  // namespace ptnoether
