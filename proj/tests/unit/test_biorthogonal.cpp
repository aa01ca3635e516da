#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ptnoether/biorthogonal.hpp"
#include "ptnoether/errors.hpp"

using namespace ptnoether;
using testutil::max_abs;

namespace {

ComplexVector vec2(Complex x, Complex y) {
  ComplexVector v(2);
  v << x, y;
  return v;
}

BiorthState eigenstate(const PTSystem& sys, int k) {
  ComplexVector c = ComplexVector::Zero(sys.dim);
  c(k) = 1.0;
  return BiorthState::from_coefficients(sys, c);
}

// Random ensemble of biorthogonal states with unit-norm coefficient vectors.
BiorthDensity random_ensemble(const PTSystem& sys, std::mt19937_64& rng, int members) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<EnsembleMember> m;
  double total = 0;
  for (int i = 0; i < members; ++i) {
    m.push_back({u(rng), BiorthState::from_coefficients(sys, testutil::random_ket(sys.dim, rng))});
    total += m.back().p;
  }
  for (auto& e : m) e.p /= total;
  return BiorthDensity::from_ensemble(m);
}

const double kGrid[] = {0.0, 0.3, 0.6, 0.9, 1.2, 1.7, 2.5};

}  // namespace

TEST_CASE("biorthogonal inner product examples") {
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  const BiorthState p1 = eigenstate(sys, 0), p2 = eigenstate(sys, 1);
  CHECK(std::abs(biorth_inner(p1, p1) - 1.0) < 1e-15);
  CHECK(std::abs(biorth_inner(p1, p2)) < 1e-15);
  const BiorthState sup = BiorthState::from_coefficients(sys, vec2(1, 1) / std::sqrt(2.0));
  CHECK(std::abs(biorth_inner(sup, sup) - 1.0) < 1e-15);
  const PTSystem other = build_single_qubit(1.0, 0.6);
  CHECK_THROWS_AS(biorth_inner(p1, eigenstate(other, 0)), Error);
}

TEST_CASE("biorthogonal inner product equals the dense bra-ket") {
  std::mt19937_64 rng(11);
  for (double a : kGrid) {
    const PTSystem sys = build_single_qubit(1.0, a);
    const BiorthState phi = BiorthState::from_coefficients(sys, testutil::random_ket(2, rng));
    const BiorthState psi = BiorthState::from_coefficients(sys, testutil::random_ket(2, rng));
    // <phi_hat| = sum_k conj(d_k) <phi_hat_k| as a row, applied to R c.
    const Complex dense = (phi.coeffs.adjoint() * sys.eigen.left * sys.eigen.right * psi.coeffs)(0, 0);
    CHECK(std::abs(biorth_inner(phi, psi) - dense) < 1e-12);
  }
}

TEST_CASE("generalized expectation examples") {
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  const Observable sz = deformed_pauli(PauliKind::Z, sys);
  CHECK(std::abs(gen_expectation(BiorthDensity::from_state(eigenstate(sys, 0)), sz) - 1.0) < 1e-15);
  CHECK(std::abs(gen_expectation(BiorthDensity::from_state(eigenstate(sys, 1)), sz) + 1.0) < 1e-15);

  // Standard-normalized (|0> + |1>)/sqrt 2 at a = 0.6 expands with |c1|^2 - |c2|^2 = 1.25.
  const BiorthState plus = BiorthState::from_ket(sys, vec2(1, 1));
  CHECK(std::abs(gen_expectation(BiorthDensity::from_state(plus), sz) - 1.25) < 1e-12);
  CHECK(max_abs(plus.ket(sys) - vec2(1, 1) / std::sqrt(2.0)) < 1e-14);

  CHECK_THROWS_AS(gen_expectation(BiorthDensity::from_state(plus), standard_pauli(PauliKind::Z, 2)), Error);
}

TEST_CASE("two-qubit S~_y vanishes at a = 1.2 for real deformed-basis product states") {
  const PTSystem sys = build_two_qubit(1.0, 1.2);
  const PTSystem& q = *sys.qubit;
  const Observable sy = collective_observable(PauliKind::Y, sys);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexVector c = vec2(g(rng), g(rng));
    ComplexVector psi = q.eigen.right * c;
    psi /= psi.norm();
    const ComplexVector big = kron(psi, psi);
    const BiorthDensity rho = reverse_extract(big * big.adjoint(), sys);
    CHECK(std::abs(gen_expectation(rho, sy)) < 1e-12);
  }
  // Physical maximally mixed state.
  const BiorthDensity mixed = reverse_extract(ComplexMatrix::Identity(4, 4) / 4.0, sys);
  CHECK(std::abs(gen_expectation(mixed, sy)) < 1e-12);

  // A complex relative phase between deformed-basis amplitudes gives a nonzero value.
  ComplexVector psi = q.eigen.right * vec2(1.0, Complex(0, 1.0));
  psi /= psi.norm();
  const ComplexVector big = kron(psi, psi);
  CHECK(std::abs(gen_expectation(reverse_extract(big * big.adjoint(), sys), sy)) > 0.1);
}

TEST_CASE("standard expectation examples") {
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1;
  CHECK(std::abs(standard_expectation(zero, standard_pauli(PauliKind::Z, 2)) - 1.0) < 1e-15);
  CHECK(std::abs(standard_expectation(ComplexMatrix::Identity(2, 2) / 2.0, standard_pauli(PauliKind::Y, 2))) < 1e-15);
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  CHECK_THROWS_AS(standard_expectation(zero, deformed_pauli(PauliKind::Z, sys)), Error);
  CHECK_THROWS_AS(standard_expectation(ComplexMatrix::Identity(4, 4) / 4.0, standard_pauli(PauliKind::Z, 2)), Error);
}

TEST_CASE("deformed Pauli operators") {
  const PTSystem h = build_single_qubit(1.0, 0.0);
  // Hermitian limit: sigma~_z becomes sigma_x.
  CHECK(max_abs(deformed_pauli(PauliKind::Z, h).matrix - pauli::X()) < 1e-14);

  const PTSystem u = build_single_qubit(1.0, 0.6);
  CHECK(max_abs(commutator(deformed_pauli(PauliKind::Z, u).matrix, u.hamiltonian)) < 1e-10);
  const PTSystem b = build_single_qubit(1.0, 1.2);
  CHECK(max_abs(anticommutator(deformed_pauli(PauliKind::Y, b).matrix, b.hamiltonian)) < 1e-10);

  // Dense forms of the defining outer-product sums.
  for (double a : kGrid) {
    const PTSystem sys = build_single_qubit(1.0, a);
    const auto& R = sys.eigen.right;
    const auto& L = sys.eigen.left;
    const ComplexMatrix p11 = R.col(0) * L.row(0), p22 = R.col(1) * L.row(1);
    const ComplexMatrix p12 = R.col(0) * L.row(1), p21 = R.col(1) * L.row(0);
    CHECK(max_abs(deformed_pauli(PauliKind::Z, sys).matrix - (p11 - p22)) < 1e-12);
    CHECK(max_abs(deformed_pauli(PauliKind::Y, sys).matrix - (-kI * p12 + kI * p21)) < 1e-12);
    CHECK(max_abs(deformed_pauli(PauliKind::X, sys).matrix - (p12 + p21)) < 1e-12);
    // Deformed operators obey the Pauli algebra.
    const ComplexMatrix x = deformed_pauli(PauliKind::X, sys).matrix;
    const ComplexMatrix y = deformed_pauli(PauliKind::Y, sys).matrix;
    const ComplexMatrix z = deformed_pauli(PauliKind::Z, sys).matrix;
    CHECK(max_abs(x * y - kI * z) < 1e-11);
    CHECK(max_abs(z * z - ComplexMatrix::Identity(2, 2)) < 1e-11);
  }
  CHECK_THROWS_AS(deformed_pauli(PauliKind::Z, build_single_qubit(1.0, 1.0)), Error);
  CHECK_THROWS_AS(deformed_pauli(PauliKind::Z, build_two_qubit(1.0, 0.5)), Error);
}

TEST_CASE("collective observables") {
  const PTSystem b = build_two_qubit(1.0, 1.2);
  // Each single-qubit term anticommutes with its own factor; the cross terms of the tensor sum do not cancel.
  const ComplexMatrix I4 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix qy = deformed_pauli(PauliKind::Y, *b.qubit).matrix;
  const ComplexMatrix h1 = b.qubit->hamiltonian;
  CHECK(max_abs(anticommutator(kron(qy, I4), kron(h1, I4))) < 1e-10);
  CHECK(max_abs(anticommutator(kron(I4, qy), kron(I4, h1))) < 1e-10);
  const ComplexMatrix cross = 2.0 * (kron(qy, h1) + kron(h1, qy));
  CHECK(max_abs(anticommutator(collective_observable(PauliKind::Y, b).matrix, b.hamiltonian) - cross) < 1e-10);
  CHECK(max_abs(cross) > 1.0);
  CHECK(max_abs(commutator(collective_observable(PauliKind::Z, b).matrix, b.hamiltonian)) < 1e-10);
  const PTSystem h = build_two_qubit(1.0, 0.0);
  CHECK(max_abs(collective_observable(PauliKind::Z, h).matrix - standard_pauli(PauliKind::X, 4).matrix) < 1e-13);
  // Equals sigma~ (x) I + I (x) sigma~ built from the single-qubit factor.
  const Observable qz = deformed_pauli(PauliKind::Z, *b.qubit);
  const ComplexMatrix I2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs(collective_observable(PauliKind::Z, b).matrix - (kron(qz.matrix, I2) + kron(I2, qz.matrix))) < 1e-12);
  CHECK_THROWS_AS(collective_observable(PauliKind::Y, build_single_qubit(1.0, 1.2)), Error);
}

TEST_CASE("biorthogonal Hermiticity") {
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  CHECK(is_biorth_hermitian(deformed_pauli(PauliKind::Z, sys), sys));
  CHECK(is_biorth_hermitian(deformed_pauli(PauliKind::Y, sys), sys));
  CHECK(is_biorth_hermitian(deformed_pauli(PauliKind::X, sys), sys));
  ComplexMatrix e12 = ComplexMatrix::Zero(2, 2);
  e12(0, 1) = 1;
  CHECK_FALSE(is_biorth_hermitian(Observable::from_coefficients(sys, e12, "p12"), sys));
  // H is biorthogonally Hermitian exactly when its spectrum is real.
  CHECK(is_biorth_hermitian(Observable::biorthogonal(sys, sys.hamiltonian, "H"), sys));
  const PTSystem b = build_single_qubit(1.0, 1.2);
  CHECK_FALSE(is_biorth_hermitian(Observable::biorthogonal(b, b.hamiltonian, "H"), b));
  CHECK_THROWS_AS(is_biorth_hermitian(Observable::standard(ComplexMatrix::Identity(4, 4), "I4"), sys), Error);
}

TEST_CASE("overlap distance examples") {
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  const BiorthState p1 = eigenstate(sys, 0), p2 = eigenstate(sys, 1);
  CHECK(overlap_distance(p1, p1) < 1e-7);
  CHECK(std::abs(overlap_distance(p1, p2) - std::numbers::pi) < 1e-12);
  const BiorthState sup = BiorthState::from_coefficients(sys, vec2(1, 1) / std::sqrt(2.0));
  CHECK(std::abs(overlap_distance(p1, sup) - std::numbers::pi / 2) < 1e-12);
  // Scale and global-phase invariance, and symmetry.
  const BiorthState scaled = BiorthState::from_coefficients(sys, std::polar(3.0, 0.7) * sup.coeffs);
  CHECK(std::abs(overlap_distance(p1, scaled) - std::numbers::pi / 2) < 1e-12);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const BiorthState x = BiorthState::from_coefficients(sys, testutil::random_ket(2, rng));
    const BiorthState y = BiorthState::from_coefficients(sys, testutil::random_ket(2, rng));
    const double d = overlap_distance(x, y);
    CHECK(d >= 0);
    CHECK(d <= std::numbers::pi + 1e-12);
    CHECK(std::abs(d - overlap_distance(y, x)) < 1e-12);
  }
  CHECK_THROWS_AS(overlap_distance(p1, BiorthState::from_coefficients(sys, ComplexVector::Zero(2))), Error);
}

TEST_CASE("reverse extraction examples") {
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  const ComplexVector phi1 = sys.eigen.right.col(0);
  const BiorthDensity pure = reverse_extract(phi1 * phi1.adjoint() / phi1.squaredNorm(), sys);
  ComplexMatrix d10 = ComplexMatrix::Zero(2, 2);
  d10(0, 0) = 1;
  CHECK(max_abs(pure.coeff - d10) < 1e-12);

  const PTSystem h = build_single_qubit(1.0, 0.0);
  CHECK(max_abs(reverse_extract(ComplexMatrix::Identity(2, 2) / 2.0, h).coeff - ComplexMatrix::Identity(2, 2) / 2.0) < 1e-12);

  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(reverse_extract(bad, sys), Error);
  CHECK_THROWS_AS(reverse_extract(ComplexMatrix::Identity(2, 2) / 2.0, build_single_qubit(1.0, 1.0)), Error);
}

TEST_CASE("reverse extraction roundtrips") {
  std::mt19937_64 rng(17);
  for (double a : kGrid) {
    CAPTURE(a);
    for (int n : {2, 4}) {
      const PTSystem sys = n == 2 ? build_single_qubit(1.0, a) : build_two_qubit(1.0, a);
      for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix rho = testutil::random_density(n, rng);
        const BiorthDensity rb = reverse_extract(rho, sys);
        CHECK(max_abs(biorth_to_standard(rb, sys) - rho) < 1e-9);
        CHECK(max_abs(reverse_extract(biorth_to_standard(rb, sys), sys).coeff - rb.coeff) < 1e-9);
        // The operator form is R rho~ L while the standard density is R rho~ R^dagger.
        CHECK(max_abs(rb.operator_form(sys) - sys.eigen.right * rb.coeff * sys.eigen.left) < 1e-12);
      }
    }
  }
}

TEST_CASE("expectation identities on random ensembles") {
  std::mt19937_64 rng(23);
  for (double a : kGrid) {
    CAPTURE(a);
    const PTSystem sys = build_single_qubit(1.0, a);
    const Observable x = deformed_pauli(PauliKind::X, sys);
    const Observable y = deformed_pauli(PauliKind::Y, sys);
    const Observable z = deformed_pauli(PauliKind::Z, sys);
    for (int trial = 0; trial < 20; ++trial) {
      const BiorthDensity rho = random_ensemble(sys, rng, 3);
      for (const Observable* f : {&x, &y, &z}) {
        const Complex e = gen_expectation(rho, *f);
        CHECK(std::abs(e.imag()) < 1e-10);
        CHECK(std::abs(e - gen_expectation_ensemble(rho, *f)) < 1e-10);
        CHECK(std::abs(e - biorth_trace_expectation(rho, *f, sys)) < 1e-10);
      }
      // Random biorthogonally Hermitian observable.
      const ComplexMatrix g = testutil::random_matrix(2, rng);
      const Observable h = Observable::from_coefficients(sys, g + g.adjoint(), "h");
      CHECK(std::abs(gen_expectation(rho, h).imag()) < 1e-10);

      const Complex alpha(0.7, -0.2), beta(-1.3, 0.4);
      const Observable comb = Observable::from_coefficients(sys, alpha * z.coeff + beta * h.coeff, "comb");
      CHECK(std::abs(gen_expectation(rho, comb) - (alpha * gen_expectation(rho, z) + beta * gen_expectation(rho, h))) < 1e-10);
    }
  }
}

TEST_CASE("ensemble validation and normalization") {
  const PTSystem sys = build_single_qubit(1.0, 0.6);
  const BiorthState p1 = eigenstate(sys, 0), p2 = eigenstate(sys, 1);
  CHECK_THROWS_AS(BiorthDensity::from_ensemble({}), Error);
  CHECK_THROWS_AS(BiorthDensity::from_ensemble({{0.5, p1}, {0.4, p2}}), Error);
  CHECK_THROWS_AS(BiorthDensity::from_ensemble({{1.2, p1}, {-0.2, p2}}), Error);
  const BiorthDensity mixed = BiorthDensity::from_ensemble({{0.5, p1}, {0.5, p2}});
  CHECK(std::abs(mixed.biorth_trace() - 1.0) < 1e-15);
  CHECK(std::abs(gen_expectation(mixed, deformed_pauli(PauliKind::Z, sys))) < 1e-15);

  const BiorthDensity plus = BiorthDensity::from_state(BiorthState::from_ket(sys, vec2(1, 1)));
  CHECK(std::abs(plus.biorth_trace() - 1.5625) < 1e-12);
  const BiorthDensity n = plus.normalized();
  CHECK(std::abs(n.biorth_trace() - 1.0) < 1e-12);
  CHECK(std::abs(gen_expectation_ensemble(n, deformed_pauli(PauliKind::Z, sys)) - 0.8) < 1e-12);
}

TEST_CASE("names") {
  CHECK(std::string(picture_name(Picture::Biorthogonal)) == "biorthogonal");
  CHECK(std::string(symmetry_class_name(SymmetryClass::ChiralSymmetry)) == "chiral");
  CHECK(deformed_pauli(PauliKind::Y, build_single_qubit(1.0, 0.6)).label == "tilde_y");
  CHECK(standard_pauli(PauliKind::Z, 4).label == "S_z");
  CHECK_THROWS_AS(standard_pauli(PauliKind::Z, 3), Error);
}
