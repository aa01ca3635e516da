#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "ptnoether/dynamics.hpp"
#include "ptnoether/errors.hpp"
#include "ptnoether/optics.hpp"

using namespace ptnoether;
using testutil::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("element matrices") {
  CHECK(max_abs(waveplate_matrix(HWP{0.0}) - pauli::Z()) < 1e-15);
  ComplexMatrix q0(2, 2);
  q0 << 1, 0, 0, kI;
  CHECK(max_abs(waveplate_matrix(QWP{0.0}) - q0) < 1e-15);
  CHECK(max_abs(waveplate_matrix(Loss{kPi / 4, kPi / 4}) - pauli::X()) < 1e-15);

  ComplexMatrix q45(2, 2);
  q45 << Complex(1, 1), Complex(1, -1), Complex(1, -1), Complex(1, 1);
  CHECK(max_abs(waveplate_matrix(QWP{kPi / 4}) - q45 / 2.0) < 1e-15);
  // Wave plates are unitary; the loss element has entries sin(2 xi).
  for (double x : {-1.3, 0.2, 0.9, 2.4}) {
    const ComplexMatrix q = waveplate_matrix(QWP{x}), h = waveplate_matrix(HWP{x});
    CHECK(max_abs(q * q.adjoint() - ComplexMatrix::Identity(2, 2)) < 1e-14);
    CHECK(max_abs(h * h - ComplexMatrix::Identity(2, 2)) < 1e-14);
    // Two quarter-wave plates at the same angle make a half-wave plate.
    CHECK(max_abs(q * q - h) < 1e-14);
    const ComplexMatrix l = waveplate_matrix(Loss{x, 0.3});
    CHECK(std::abs(l(0, 1) - std::sin(2 * x)) < 1e-15);
    CHECK(std::abs(l(1, 0) - std::sin(0.6)) < 1e-15);
  }
}

TEST_CASE("wave-plate product entries on an angle grid") {
  for (double t2 = -3.0; t2 <= 3.0; t2 += 0.5) {
    for (double t3 = -2.0; t3 <= 2.0; t3 += 0.4) {
      const ComplexMatrix p = waveplate_matrix(QWP{kPi / 4}) * waveplate_matrix(HWP{t3}) * waveplate_matrix(QWP{t2});
      const Complex e = std::exp(-kI * (kPi / 4)) / std::sqrt(2.0);
      const Complex ph = std::exp(kI * (t2 - 2 * t3));
      const double s = std::sin(t2), c = std::cos(t2);
      CHECK(std::abs(p(0, 0) - kI * e * (s + c) * ph) < 1e-10);
      CHECK(std::abs(p(0, 1) - kI * e * (s - c) * ph) < 1e-10);
      CHECK(std::abs(p(1, 0) - e * (c - s) / ph) < 1e-10);
      CHECK(std::abs(p(1, 1) - e * (s + c) / ph) < 1e-10);
    }
  }
}

TEST_CASE("circuit product ordering") {
  WavePlateCircuit c;
  c.elements = {QWP{0.3}, HWP{1.1}};
  CHECK(max_abs(circuit_product(c) - waveplate_matrix(HWP{1.1}) * waveplate_matrix(QWP{0.3})) < 1e-15);
  CHECK(max_abs(circuit_product(WavePlateCircuit{}) - ComplexMatrix::Identity(2, 2)) == 0);
  const WavePlateCircuit t = template_circuit(0.1, 0.2, 0.3, 0.4, 2.0);
  CHECK(has_template_shape(t));
  CHECK(t.elements.size() == 7);
  CHECK_FALSE(has_template_shape(c));
}

TEST_CASE("compile examples") {
  const PTSystem u = build_single_qubit(1.0, 0.6);
  const PTSystem b = build_single_qubit(1.0, 1.2);
  const CompileReport r0 = compile_report(u, 0.0);
  CHECK(r0.residual < 1e-6);
  CHECK(verify_up_to_phase(r0.circuit, ComplexMatrix::Identity(2, 2)) < 1e-6);
  for (const auto& [sys, t] : {std::pair{&b, 0.5}, std::pair{&u, 1.0}}) {
    const CompileReport r = compile_report(*sys, t);
    CHECK(r.residual < 1e-6);
    CHECK(has_template_shape(r.circuit));
    CHECK(verify_up_to_phase(r.circuit, u_pt(*sys, t)) < 1e-6);
    CHECK(std::abs(r.circuit.scale - std::abs(r.fitted_scale)) < 1e-12);
  }
  CHECK_THROWS_AS(compile(build_two_qubit(1.0, 0.6), 1.0), Error);
  CHECK_THROWS_AS(compile(u, INFINITY), Error);
}

TEST_CASE("compile grid") {
  for (double a : {0.3, 0.6, 0.9, 1.1, 1.5, 2.0}) {
    const PTSystem sys = build_single_qubit(1.0, a);
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      CAPTURE(a);
      CAPTURE(t);
      const CompileReport r = compile_report(sys, t);
      CHECK(r.residual < 1e-6);
      CHECK_FALSE(r.used_fallback);
      CHECK(has_template_shape(r.circuit));
      for (const auto& e : r.circuit.elements) {
        if (const auto* l = std::get_if<Loss>(&e)) {
          CHECK(std::abs(std::sin(2 * l->xi1)) <= 1.0);
          CHECK(std::abs(l->xi2 - kPi / 4) < 1e-15);
        }
      }
      // A real positive scale cannot absorb the determinant phase of the wave plates.
      CHECK(std::abs(r.strict_residual - std::sqrt(0.5)) < 1e-6);
      const double phase = std::arg(r.fitted_scale) / (kPi / 4);
      CHECK(std::abs(phase - std::round(phase)) < 1e-8);
      CHECK(static_cast<long>(std::round(phase)) % 2 != 0);
    }
  }
}

TEST_CASE("fallback on unstructured targets") {
  // A target outside the closed-form family but inside the reachable set: any template product.
  const WavePlateCircuit src = template_circuit(0.37, -1.1, 0.52, 0.3, 1.0);
  const ComplexMatrix target = Complex(0.8, -0.3) * circuit_product(src);
  const CompileReport r = compile_target(target);
  CHECK(r.used_fallback);
  CHECK(r.residual < 1e-6);
  CHECK(verify_up_to_phase(r.circuit, target) < 1e-6);
  // A tolerance no start can meet is reported as an error.
  CompileOptions opt;
  opt.tol = 0;
  opt.fallback_starts = 2;
  CHECK_THROWS_AS(compile_target(target, opt), Error);
  CHECK_THROWS_AS(compile_target(ComplexMatrix::Zero(2, 2)), Error);
}

TEST_CASE("verify examples") {
  const PTSystem b = build_single_qubit(1.0, 1.2);
  const WavePlateCircuit c = compile(b, 0.5);
  // Strict real-scale check leaves the determinant phase unexplained.
  CHECK(std::abs(verify(c, u_pt(b, 0.5)) - std::sqrt(0.5)) < 1e-6);
  CHECK(std::abs(verify(WavePlateCircuit{}, pauli::X()) - 1.0) < 1e-12);
  CHECK(verify(c, 2.0 * circuit_product(c)) < 1e-12);
  CHECK(verify_up_to_phase(c, kI * circuit_product(c)) < 1e-12);
  CHECK(verify(c, -1.0 * circuit_product(c)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(verify(c, ComplexMatrix::Zero(2, 2)), Error);
}

TEST_CASE("serialization") {
  const WavePlateCircuit c = compile(build_single_qubit(1.0, 0.6), 1.0);
  const std::string text = serialize(c);
  CHECK(text.rfind("QWP 0\nHWP ", 0) == 0);
  CHECK(text.find("\nLOSS ") != std::string::npos);
  CHECK(text.find("\nSCALE ") != std::string::npos);
  const WavePlateCircuit back = parse_circuit(text);
  REQUIRE(back.elements.size() == c.elements.size());
  CHECK(max_abs(circuit_product(back) - circuit_product(c)) < 1e-10);
  CHECK(std::abs(back.scale - c.scale) < 1e-10 * c.scale);
  CHECK(serialize(back) == text);
  CHECK_THROWS_AS(parse_circuit("QWP\nSCALE 1\n"), Error);
  CHECK_THROWS_AS(parse_circuit("QWP 0.1\n"), Error);
  CHECK_THROWS_AS(parse_circuit("XWP 1\nSCALE 1\n"), Error);
  CHECK_THROWS_AS(parse_circuit("SCALE -1\n"), Error);
}

TEST_CASE("angle normalization") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(!std::signbit(normalize_angle(-0.0)));
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(normalize_angle(7.0) == doctest::Approx(7.0 - 2 * kPi));
}
