#include "ptnoether/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>

#include "ptnoether/errors.hpp"
#include "ptnoether/optics.hpp"
#include "ptnoether/symmetry.hpp"

namespace ptnoether {

namespace fs = std::filesystem;

PTSystem build_system(int dim, double s, double a, FConvention conv) {
  switch (dim) {
    case 2: return build_single_qubit(s, a, conv);
    case 4: return build_two_qubit(s, a, conv);
    case 3: return build_spin1(s, a * s);
    default: fail(ErrorKind::InvalidArgument, "system dimension must be 2, 3 or 4");
  }
}

ComplexVector make_ket(const PTSystem& sys, const std::vector<Complex>& amps, bool eigen_basis) {
  if (sys.dim == 4 && amps.size() == 2) {
    const ComplexVector q = make_ket(*sys.qubit, amps, eigen_basis);
    const ComplexVector k = kron(q, q);
    return k / k.norm();
  }
  if (amps.size() != static_cast<std::size_t>(sys.dim))
    fail(ErrorKind::InvalidArgument, "amplitude count does not match the system dimension");
  ComplexVector c = Eigen::Map<const ComplexVector>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  if (eigen_basis) {
    if (sys.regime == Regime::ExceptionalPoint)
      fail(ErrorKind::Regime, "eigenbasis amplitudes are undefined at the exceptional point");
    c = sys.eigen.right * c;
  }
  const double n = c.norm();
  if (!(n > 0)) fail(ErrorKind::InvalidArgument, "state has zero norm");
  return c / n;
}

ComplexMatrix pure_density(const ComplexVector& ket) { return ket * ket.adjoint(); }

ComplexMatrix initial_density(const PTSystem& sys, const StateSpec& spec) {
  const auto n = sys.dim;
  if (spec.kind == StateSpec::Kind::Mixed && spec.maximally_mixed) return ComplexMatrix::Identity(n, n) / n;
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  double total = 0;
  for (const auto& [w, amps] : spec.components) {
    rho += w * pure_density(make_ket(sys, amps, spec.eigen_basis));
    total += w;
  }
  if (!(total > 0)) fail(ErrorKind::InvalidArgument, "state weights sum to zero");
  return hermitian_part(rho / total);
}

Observable named_observable(const std::string& name, const PTSystem& sys) {
  struct Entry {
    const char* name;
    int dim;
    bool deformed;
    PauliKind kind;
  };
  static constexpr Entry table[] = {
      {"sigma_x", 2, false, PauliKind::X},   {"sigma_y", 2, false, PauliKind::Y},   {"sigma_z", 2, false, PauliKind::Z},
      {"tilde_x", 2, true, PauliKind::X},    {"tilde_y", 2, true, PauliKind::Y},    {"tilde_z", 2, true, PauliKind::Z},
      {"S_y", 4, false, PauliKind::Y},       {"S_z", 4, false, PauliKind::Z},       {"tilde_S_y", 4, true, PauliKind::Y},
      {"tilde_S_z", 4, true, PauliKind::Z},
  };
  for (const auto& e : table) {
    if (name != e.name) continue;
    if (sys.dim != e.dim)
      fail(ErrorKind::InvalidArgument, "observable '" + name + "' needs a dim-" + std::to_string(e.dim) + " system");
    if (!e.deformed) return standard_pauli(e.kind, e.dim);
    return e.dim == 2 ? deformed_pauli(e.kind, sys) : collective_observable(e.kind, sys);
  }
  fail(ErrorKind::InvalidArgument, "unknown observable '" + name + "'");
}

Trajectory observable_trajectory(const PTSystem& sys, const ComplexMatrix& rho0, const Observable& f,
                                 const std::vector<double>& times) {
  if (f.picture == Picture::Standard) return expectation_trajectory(rho0, sys, f, times);
  return expectation_trajectory(reverse_extract(rho0, sys), sys, f, times);
}

std::string format_number(double x) {
  if (x == 0) x = 0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_matrix(const ComplexMatrix& m) {
  std::string out;
  char buf[80];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real() == 0 ? 0.0 : m(i, j).real();
      const double im = m(i, j).imag() == 0 ? 0.0 : m(i, j).imag();
      std::snprintf(buf, sizeof buf, "%.12g%+.12gj", re, im);
      if (j) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const std::vector<Trajectory>& trs, Regime regime) {
  std::string out = "t,re_value,im_value,observable,picture,regime\n";
  for (const auto& tr : trs)
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      out += format_number(tr.times[i]);
      out += ',';
      out += format_number(tr.values[i].real());
      out += ',';
      out += format_number(tr.values[i].imag());
      out += ',';
      out += tr.observable_id;
      out += ',';
      out += picture_name(tr.picture);
      out += ',';
      out += regime_name(regime);
      out += '\n';
    }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory " + target.parent_path().string() + ": " + ec.message());
  const fs::path tmp = target.string() + ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) fail(ErrorKind::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorKind::Io, "cannot rename into " + path + ": " + ec.message());
}

std::vector<std::string> run_config(const RunConfig& cfg) {
  const PTSystem sys = build_system(cfg.dim, cfg.s, cfg.a, cfg.convention);
  ComplexMatrix rho0;
  try {
    rho0 = initial_density(sys, cfg.state);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Regime) throw;
    fail(ErrorKind::Config, cfg.source + ":" + std::to_string(cfg.state.line) + ": " + e.what());
  }
  const std::vector<double> times = linspace(cfg.start, cfg.stop, cfg.points);

  std::vector<std::pair<std::string, std::string>> outputs;
  for (const auto& spec : cfg.observables) {
    const std::string where = cfg.source + ":" + std::to_string(spec.line) + ": ";
    Observable f;
    try {
      if (spec.inline_matrix) {
        if (spec.matrix.rows() != sys.dim) fail(ErrorKind::Config, "inline matrix dimension does not match system");
        f = spec.picture == Picture::Standard ? Observable::standard(spec.matrix, spec.name)
                                              : Observable::biorthogonal(sys, spec.matrix, spec.name);
        f.label = spec.name;
      } else {
        f = named_observable(spec.name, sys);
        if (f.picture != spec.picture) fail(ErrorKind::Config, "observable '" + spec.name + "' has a fixed picture");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Regime)
        fail(ErrorKind::Regime, where + "biorthogonal observable '" + spec.name + "' refused: " + e.what());
      fail(ErrorKind::Config, where + e.what());
    }
    Trajectory tr;
    try {
      tr = observable_trajectory(sys, rho0, f, times);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Regime)
        fail(ErrorKind::Regime, where + "biorthogonal observable '" + spec.name + "' refused: " + e.what());
      throw;
    }
    outputs.emplace_back((fs::path(cfg.output_path) / (spec.name + ".csv")).string(),
                         trajectory_csv({tr}, sys.regime));
  }
  std::vector<std::string> written;
  for (const auto& [path, content] : outputs) {
    write_file_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

std::vector<NamedState> figure_states(int which, const PTSystem& sys) {
  const std::vector<Complex> plus{1.0, 1.0}, minus_sqrt3{1.0, -std::sqrt(3.0)};
  const auto n = sys.dim;
  const bool deformed = which == 4;
  return {{"plus", pure_density(make_ket(sys, plus, deformed))},
          {"minus_sqrt3", pure_density(make_ket(sys, minus_sqrt3, deformed))},
          {"mixed", ComplexMatrix::Identity(n, n) / n}};
}

namespace {

std::string a_tag(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "a%g", a);
  return buf;
}

}  // namespace

std::vector<std::string> write_figure(int which, const std::string& out_dir) {
  using Cell = std::function<std::pair<std::string, std::string>()>;
  std::vector<Cell> cells;
  const auto times = linspace(0.0, 10.0, 1001);
  const fs::path dir(out_dir);

  if (which == 2) {
    for (double a : {0.6, 1.2})
      for (const char* name : {"tilde_z", "tilde_y", "sigma_z", "sigma_y"})
        cells.push_back([=] {
          const PTSystem sys = build_single_qubit(1.0, a);
          const ComplexMatrix rho = figure_states(3, sys).front().rho;
          const Trajectory tr = observable_trajectory(sys, rho, named_observable(name, sys), times);
          return std::make_pair((dir / ("fig2_" + a_tag(a) + "_" + name + ".csv")).string(),
                                trajectory_csv({tr}, sys.regime));
        });
  } else if (which == 3) {
    for (double a : {0.6, 0.8, 1.2, 2.0})
      for (int state = 0; state < 3; ++state)
        cells.push_back([=] {
          const PTSystem sys = build_single_qubit(1.0, a);
          const NamedState st = figure_states(3, sys)[static_cast<std::size_t>(state)];
          std::vector<Trajectory> trs;
          for (const char* name : {"tilde_z", "tilde_y"})
            trs.push_back(observable_trajectory(sys, st.rho, named_observable(name, sys), times));
          return std::make_pair((dir / ("fig3_" + a_tag(a) + "_" + st.name + ".csv")).string(),
                                trajectory_csv(trs, sys.regime));
        });
  } else if (which == 4) {
    for (const char* name : {"tilde_S_y", "tilde_S_z", "S_y", "S_z"})
      for (int state = 0; state < 3; ++state)
        cells.push_back([=] {
          const PTSystem sys = build_two_qubit(1.0, 1.2);
          const NamedState st = figure_states(4, sys)[static_cast<std::size_t>(state)];
          const Trajectory tr = observable_trajectory(sys, st.rho, named_observable(name, sys), times);
          return std::make_pair((dir / (std::string("fig4_") + name + "_" + st.name + ".csv")).string(),
                                trajectory_csv({tr}, sys.regime));
        });
  } else {
    fail(ErrorKind::InvalidArgument, "figure must be 2, 3 or 4");
  }

  std::vector<std::future<std::string>> futures;
  for (auto& cell : cells)
    futures.push_back(std::async(std::launch::async, [cell] {
      auto [path, content] = cell();
      write_file_atomic(path, content);
      return path;
    }));
  std::vector<std::string> written;
  for (auto& f : futures) written.push_back(f.get());
  return written;
}

std::string decompose_text(double s, double a, double t, double tol, double* residual) {
  const PTSystem sys = build_single_qubit(s, a);
  CompileOptions opt;
  opt.tol = tol;
  const CompileReport rep = compile_report(sys, t, opt);
  if (residual) *residual = rep.residual;
  return serialize(rep.circuit);
}

std::string symmetries_text(const ComplexMatrix& h, const std::string& kind, double tol) {
  std::vector<SymmetryKind> kinds;
  if (kind == "commutant") kinds = {SymmetryKind::Commutant};
  else if (kind == "anticommutant") kinds = {SymmetryKind::Anticommutant};
  else if (kind == "intertwining") kinds = {SymmetryKind::Intertwining};
  else if (kind == "all") kinds = {SymmetryKind::Commutant, SymmetryKind::Anticommutant, SymmetryKind::Intertwining};
  else fail(ErrorKind::InvalidArgument, "kind must be commutant, anticommutant, intertwining or all");
  std::string out;
  for (auto k : kinds) out += format_space(symmetry_basis(k, h, tol));
  return out;
}

TomographyRun run_tomography(const RunConfig& cfg, const std::string& out_dir_override) {
  if (cfg.dim != 2 && cfg.dim != 4) fail(ErrorKind::Config, cfg.source + ": tomography supports system.dim 2 or 4");
  const PTSystem sys = build_system(cfg.dim, cfg.s, cfg.a, cfg.convention);
  sys.require_biorth("tomography pipeline (reverse extraction)");
  const ComplexMatrix rho0 = initial_density(sys, cfg.state);
  const double t = cfg.tomo_time.value_or(1.0);
  const ComplexMatrix rho_t = evolve_standard(sys, rho0, t);
  const ProjectorSet set = cfg.dim == 2 ? ProjectorSet::single_qubit() : ProjectorSet::two_qubit();
  const TomographyRecord rec = simulate_counts(rho_t, set, cfg.shots.value_or(1000000), cfg.seed.value_or(default_seed()));

  TomographyRun run;
  run.mle = mle_reconstruct(rec, set, 200000, 1e-10);
  if (!run.mle.converged)
    fail(ErrorKind::Numeric, "maximum-likelihood reconstruction did not converge (final delta " +
                                 std::to_string(run.mle.final_delta) + ")");
  run.trace_distance = trace_distance(run.mle.rho, rho_t);
  const BiorthDensity extracted = reverse_extract(run.mle.rho, sys, 1e-8);

  const fs::path dir(out_dir_override.empty() ? cfg.output_path : out_dir_override);
  const std::vector<std::pair<std::string, std::string>> files{
      {"counts.csv", record_to_csv(rec)},
      {"rho_reconstructed.txt", format_matrix(run.mle.rho)},
      {"rho_tilde.txt", format_matrix(extracted.coeff)}};
  for (const auto& [name, content] : files) {
    const std::string path = (dir / name).string();
    write_file_atomic(path, content);
    run.files.push_back(path);
  }
  return run;
}

}  // namespace ptnoether
