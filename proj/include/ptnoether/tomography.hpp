#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptnoether/linalg.hpp"

namespace ptnoether {

struct ProjectorSet {
  std::vector<std::string> labels;
  std::vector<ComplexMatrix> projectors;

  static ProjectorSet single_qubit();  // H, V, R, D
  static ProjectorSet two_qubit();     // 16 product settings
  int dim() const { return projectors.empty() ? 0 : static_cast<int>(projectors.front().rows()); }
};

// Polarization kets: H = |0>, V = |1>, R = (H - iV)/sqrt2, L = (H + iV)/sqrt2, D = (H + V)/sqrt2.
ComplexVector polarization_ket(char label);

struct TomographyRecord {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots_per_setting = 0;
  std::uint64_t seed = 0;
};

TomographyRecord simulate_counts(const ComplexMatrix& rho, const ProjectorSet& set, std::uint64_t shots,
                                 std::uint64_t seed);

struct MleResult {
  ComplexMatrix rho;
  int iterations = 0;
  double final_delta = 0;  // last fixed-point step, or the size of the polishing step when one was taken
  bool converged = false;
  bool polished = false;
};

inline constexpr double kMleMixing = 0.5;

// Diluted R rho R iterations (mixing kMleMixing) until the step is below tol or max_iters, then a
// Levenberg-Marquardt refinement of the same per-setting binomial likelihood.
MleResult mle_reconstruct(const TomographyRecord& record, const ProjectorSet& set, int max_iters = 20000,
                          double tol = 1e-12);
// Per-setting success frequencies in [0, 1]; exact probabilities give the infinite-shot limit.
MleResult mle_reconstruct_frequencies(std::span<const double> freqs, const ProjectorSet& set, int max_iters = 20000,
                                      double tol = 1e-12);

std::string record_to_csv(const TomographyRecord& record);

}  // namespace ptnoether
