#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ptnoether/linalg.hpp"
#include "ptnoether/pt_model.hpp"

namespace ptnoether {

struct QWP {
  double angle = 0;
};
struct HWP {
  double angle = 0;
};
struct Loss {
  double xi1 = 0;
  double xi2 = 0;
};
using WavePlateElement = std::variant<QWP, HWP, Loss>;

// Elements in the order light meets them; the operator is the product taken right-to-left.
struct WavePlateCircuit {
  std::vector<WavePlateElement> elements;
  double scale = 1.0;
};

ComplexMatrix waveplate_matrix(const WavePlateElement& e);
ComplexMatrix circuit_product(const WavePlateCircuit& c);

// QWP(0), HWP(t1), HWP(0), LOSS(xi1, pi/4), QWP(t2), HWP(t3), QWP(pi/4).
WavePlateCircuit template_circuit(double theta1, double theta2, double theta3, double xi1, double scale);
bool has_template_shape(const WavePlateCircuit& c, double tol = 1e-12);

double normalize_angle(double x);  // into (-pi, pi]

struct CompileReport {
  WavePlateCircuit circuit;
  double residual = 0;          // min over complex c of |T - c U~| / |T|
  double strict_residual = 0;   // min over real c > 0 (verify)
  Complex fitted_scale;         // complex c attaining residual
  bool used_fallback = false;
  int k1 = 0, k2 = 0;
};

struct CompileOptions {
  double tol = 1e-6;
  int branch_window = 2;
  int fallback_starts = 64;
};

CompileReport compile_target(const ComplexMatrix& target, const CompileOptions& opt = {});
CompileReport compile_report(const PTSystem& sys, double t, const CompileOptions& opt = {});
WavePlateCircuit compile(const PTSystem& sys, double t, double tol = 1e-6);

// min over real c > 0 of |target - c U~| / |target| (Frobenius), c = Re<U~,T>/<U~,U~> clamped at 0.
double verify(const WavePlateCircuit& c, const ComplexMatrix& target);
// Same with complex c = <U~,T>/<U~,U~>.
double verify_up_to_phase(const WavePlateCircuit& c, const ComplexMatrix& target);

std::string serialize(const WavePlateCircuit& c);
WavePlateCircuit parse_circuit(const std::string& text);

}  // namespace ptnoether
