#include "ptnoether/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "ptnoether/biorthogonal.hpp"
#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

// x - log(1 + x), accurate for small x.
double log1p_excess(double x) {
  if (std::abs(x) < 1e-3) return x * x * (0.5 - x * (1.0 / 3 - x * (0.25 - x * 0.2)));
  return x - std::log1p(x);
}

// Signed binomial deviance residual; the sum of squares is twice the negative log-likelihood ratio.
// Written as f h((p-f)/f) + (1-f) h((f-p)/(1-f)) with h(x) = x - log1p(x) so it stays accurate as p -> f.
double deviance_residual(double f, double p) {
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  double term;
  if (f <= 0) {
    term = -std::log1p(-p);
  } else if (f >= 1) {
    term = -std::log(p);
  } else {
    term = f * log1p_excess((p - f) / f) + (1 - f) * log1p_excess((f - p) / (1 - f));
  }
  const double r = std::sqrt(2 * std::max(term, 0.0));
  return f >= p ? r : -r;
}

// rho = T T^dagger / tr with T lower triangular: d real diagonal entries, then real/imag pairs below it.
ComplexMatrix density_from_params(const Eigen::VectorXd& x, int d) {
  ComplexMatrix t = ComplexMatrix::Zero(d, d);
  int k = d;
  for (int i = 0; i < d; ++i) {
    t(i, i) = x(i);
    for (int j = 0; j < i; ++j, k += 2) t(i, j) = Complex(x(k), x(k + 1));
  }
  const ComplexMatrix rho = t * t.adjoint();
  return rho / rho.trace().real();
}

Eigen::VectorXd params_from_density(const ComplexMatrix& rho) {
  const int d = static_cast<int>(rho.rows());
  const ComplexMatrix reg = hermitian_part(rho) + 1e-14 * ComplexMatrix::Identity(d, d);
  const ComplexMatrix t = Eigen::LLT<ComplexMatrix>(reg).matrixL();
  Eigen::VectorXd x(d * d);
  int k = d;
  for (int i = 0; i < d; ++i) {
    x(i) = t(i, i).real();
    for (int j = 0; j < i; ++j, k += 2) {
      x(k) = t(i, j).real();
      x(k + 1) = t(i, j).imag();
    }
  }
  return x;
}

struct DevianceFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::span<const double> freqs;
  const ProjectorSet* set = nullptr;
  int d = 2;

  int inputs() const { return d * d; }
  int values() const { return static_cast<int>(freqs.size()); }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const ComplexMatrix rho = density_from_params(x, d);
    for (std::size_t i = 0; i < freqs.size(); ++i)
      r(static_cast<Eigen::Index>(i)) = deviance_residual(freqs[i], (rho * set->projectors[i]).trace().real());
    return 0;
  }
};

double deviance(std::span<const double> freqs, const ProjectorSet& set, const ComplexMatrix& rho) {
  double sum = 0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double r = deviance_residual(freqs[i], (rho * set.projectors[i]).trace().real());
    sum += r * r;
  }
  return sum;
}

}  // namespace

ComplexVector polarization_ket(char label) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector v(2);
  switch (label) {
    case 'H': v << 1, 0; break;
    case 'V': v << 0, 1; break;
    case 'R': v << r, -kI * r; break;
    case 'L': v << r, kI * r; break;
    case 'D': v << r, r; break;
    default: fail(ErrorKind::InvalidArgument, std::string("unknown polarization label ") + label);
  }
  return v;
}

ProjectorSet ProjectorSet::single_qubit() {
  ProjectorSet set;
  for (char c : std::string("HVRD")) {
    set.labels.emplace_back(1, c);
    set.projectors.push_back(projector(polarization_ket(c)));
  }
  return set;
}

ProjectorSet ProjectorSet::two_qubit() {
  ProjectorSet set;
  for (const char* l : {"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH", "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"}) {
    set.labels.emplace_back(l);
    set.projectors.push_back(projector(kron(polarization_ket(l[0]), polarization_ket(l[1]))));
  }
  return set;
}

TomographyRecord simulate_counts(const ComplexMatrix& rho, const ProjectorSet& set, std::uint64_t shots,
                                 std::uint64_t seed) {
  if (shots < 1) fail(ErrorKind::InvalidArgument, "shots must be >= 1");
  require_density(rho, 1e-8, "tomography input");
  if (rho.rows() != set.dim()) fail(ErrorKind::InvalidArgument, "tomography: dimension mismatch");
  TomographyRecord rec;
  rec.labels = set.labels;
  rec.shots_per_setting = shots;
  rec.seed = seed;
  rec.counts.resize(set.projectors.size());
  for (std::size_t i = 0; i < set.projectors.size(); ++i) {
    const double p = std::clamp((rho * set.projectors[i]).trace().real(), 0.0, 1.0);
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(i + 1)));
    std::binomial_distribution<std::uint64_t> dist(shots, p);
    rec.counts[i] = dist(rng);
  }
  return rec;
}

MleResult mle_reconstruct(const TomographyRecord& record, const ProjectorSet& set, int max_iters, double tol) {
  if (record.counts.size() != set.projectors.size())
    fail(ErrorKind::InvalidArgument, "record does not match projector set");
  if (record.shots_per_setting == 0) fail(ErrorKind::InvalidArgument, "record has zero shots");
  std::vector<double> freqs;
  std::uint64_t total = 0;
  for (auto c : record.counts) {
    if (c > record.shots_per_setting) fail(ErrorKind::InvalidArgument, "count exceeds shots per setting");
    total += c;
    freqs.push_back(static_cast<double>(c) / static_cast<double>(record.shots_per_setting));
  }
  if (total == 0) fail(ErrorKind::InvalidArgument, "all counts are zero");
  return mle_reconstruct_frequencies(freqs, set, max_iters, tol);
}

MleResult mle_reconstruct_frequencies(std::span<const double> freqs, const ProjectorSet& set, int max_iters,
                                      double tol) {
  if (freqs.size() != set.projectors.size()) fail(ErrorKind::InvalidArgument, "frequencies do not match projector set");
  const int d = set.dim();
  const auto m = static_cast<double>(set.projectors.size());
  const ComplexMatrix I = ComplexMatrix::Identity(d, d);
  MleResult res;
  res.rho = I / d;
  // Each setting is a two-outcome measurement {P, 1 - P}; together they form a POVM after dividing by m.
  for (res.iterations = 1; res.iterations <= max_iters; ++res.iterations) {
    ComplexMatrix R = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      const double f = freqs[i];
      const double p = std::clamp((res.rho * set.projectors[i]).trace().real(), 1e-300, 1.0);
      const double q = std::max(1.0 - p, 1e-300);
      if (f > 0) R += (f / p) * set.projectors[i];
      if (f < 1) R += ((1.0 - f) / q) * (I - set.projectors[i]);
    }
    R /= m;
    const ComplexMatrix step = (1.0 - kMleMixing) * I + kMleMixing * R;
    ComplexMatrix next = step * res.rho * step.adjoint();
    next = hermitian_part(next / next.trace().real());
    res.final_delta = trace_distance(next, res.rho);
    res.rho = next;
    if (res.final_delta < tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, max_iters);

  // The fixed-point map has R = I at an exact optimum, so it slows down near rank-deficient states.
  // Polish with Levenberg-Marquardt on the same likelihood over a Cholesky factor.
  DevianceFunctor functor;
  functor.freqs = freqs;
  functor.set = &set;
  functor.d = d;
  if (functor.values() >= functor.inputs()) {
    Eigen::NumericalDiff<DevianceFunctor, Eigen::Central> diff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<DevianceFunctor, Eigen::Central>> lm(diff);
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-30;
    lm.parameters.maxfev = 400 * functor.inputs();
    Eigen::VectorXd x = params_from_density(res.rho);
    const int status = lm.minimize(x);
    const ComplexMatrix polished = hermitian_part(density_from_params(x, d));
    if (x.allFinite() && deviance(freqs, set, polished) <= deviance(freqs, set, res.rho)) {
      res.final_delta = trace_distance(polished, res.rho);
      res.rho = polished;
      res.polished = true;
      if (status > 0 && status < 5) res.converged = true;
    }
  }
  return res;
}

std::string record_to_csv(const TomographyRecord& record) {
  std::ostringstream os;
  os << "label,counts,shots,seed\n";
  for (std::size_t i = 0; i < record.counts.size(); ++i)
    os << record.labels[i] << ',' << record.counts[i] << ',' << record.shots_per_setting << ',' << record.seed << '\n';
  return os.str();
}

}  // namespace ptnoether
