#pragma once

#include <string>
#include <vector>

#include "ptnoether/config.hpp"
#include "ptnoether/dynamics.hpp"
#include "ptnoether/tomography.hpp"

namespace ptnoether {

PTSystem build_system(int dim, double s, double a, FConvention conv = FConvention::PaperFigures);

// Amplitudes over the computational basis, or over (|phi_1>, |phi_2>, ...) when eigen_basis is set.
// Returns a standard-normalized ket.
ComplexVector make_ket(const PTSystem& sys, const std::vector<Complex>& amps, bool eigen_basis);
ComplexMatrix pure_density(const ComplexVector& ket);
ComplexMatrix initial_density(const PTSystem& sys, const StateSpec& spec);

// Named observables: sigma_{x,y,z}, tilde_{x,y,z} (dim 2); S_{y,z}, tilde_S_{y,z} (dim 4).
Observable named_observable(const std::string& name, const PTSystem& sys);

// Dispatches on the observable picture: evolve_standard or reverse_extract + evolve_biorth.
Trajectory observable_trajectory(const PTSystem& sys, const ComplexMatrix& rho0, const Observable& f,
                                 const std::vector<double>& times);

// CSV rows "t,re_value,im_value,observable,picture,regime", 12 significant digits.
std::string trajectory_csv(const std::vector<Trajectory>& trs, Regime regime);
std::string format_number(double x);
std::string format_matrix(const ComplexMatrix& m);

void write_file_atomic(const std::string& path, const std::string& content);

// Returns the written file paths.
std::vector<std::string> run_config(const RunConfig& cfg);

struct NamedState {
  std::string name;
  ComplexMatrix rho;
};
// Figure 3: computational-basis qubit states. Figure 4: the same amplitudes read in the deformed basis per
// qubit (psi (x) psi), plus the maximally mixed state.
std::vector<NamedState> figure_states(int which, const PTSystem& sys);

std::vector<std::string> write_figure(int which, const std::string& out_dir);

std::string decompose_text(double s, double a, double t, double tol, double* residual = nullptr);
std::string symmetries_text(const ComplexMatrix& h, const std::string& kind, double tol);

struct TomographyRun {
  std::vector<std::string> files;
  double trace_distance = 0;
  MleResult mle;
};
TomographyRun run_tomography(const RunConfig& cfg, const std::string& out_dir_override = "");

}  // namespace ptnoether
