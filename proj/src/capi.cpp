#include "ptnoether/ptnoether.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ptnoether/errors.hpp"
#include "ptnoether/experiments.hpp"
#include "ptnoether/optics.hpp"

struct ptn_system {
  ptnoether::PTSystem sys;
};
struct ptn_trajectory {
  ptnoether::Trajectory tr;
};
struct ptn_circuit {
  ptnoether::CompileReport report;
};

namespace {

thread_local std::string g_last_error;

ptn_status to_status(ptnoether::ErrorKind k) {
  using ptnoether::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument: return PTN_ERR_INVALID_ARGUMENT;
    case ErrorKind::Regime: return PTN_ERR_REGIME;
    case ErrorKind::Numeric: return PTN_ERR_NUMERIC;
    case ErrorKind::Config: return PTN_ERR_CONFIG;
    case ErrorKind::Io: return PTN_ERR_IO;
  }
  return PTN_ERR_INTERNAL;
}

template <class Fn>
ptn_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return PTN_OK;
  } catch (const ptnoether::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PTN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PTN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) ptnoether::fail(ptnoether::ErrorKind::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

}  // namespace

extern "C" {

const char* ptn_version(void) { return "1.0.0"; }

const char* ptn_last_error(void) { return g_last_error.c_str(); }

void ptn_string_free(char* s) { std::free(s); }

ptn_status ptn_system_create(int dim, double s, double a, ptn_convention conv, ptn_system** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    const auto c = conv == PTN_CONVENTION_UNIT ? ptnoether::FConvention::UnitNorm : ptnoether::FConvention::PaperFigures;
    *out = new ptn_system{ptnoether::build_system(dim, s, a, c)};
  });
}

void ptn_system_destroy(ptn_system* sys) { delete sys; }

ptn_status ptn_system_dim(const ptn_system* sys, int* out) {
  return guarded([&] {
    require(sys && out, "null argument");
    *out = sys->sys.dim;
  });
}

ptn_status ptn_system_regime(const ptn_system* sys, ptn_regime* out) {
  return guarded([&] {
    require(sys && out, "null argument");
    *out = static_cast<ptn_regime>(static_cast<int>(sys->sys.regime));
  });
}

ptn_status ptn_system_eigenvalues(const ptn_system* sys, double* re, double* im, size_t capacity, size_t* count) {
  return guarded([&] {
    require(sys != nullptr, "null system");
    const auto& v = sys->sys.eigen.values;
    const auto n = static_cast<size_t>(v.size());
    if (count) *count = n;
    for (size_t k = 0; k < n && k < capacity; ++k) {
      if (re) re[k] = v(static_cast<Eigen::Index>(k)).real();
      if (im) im[k] = v(static_cast<Eigen::Index>(k)).imag();
    }
  });
}

ptn_status ptn_trajectory_compute(const ptn_system* sys, const double* psi_re, const double* psi_im, size_t n,
                                  const char* observable, double t0, double t1, size_t points, ptn_trajectory** out) {
  return guarded([&] {
    require(sys && psi_re && observable && out, "null argument");
    *out = nullptr;
    std::vector<ptnoether::Complex> amps(n);
    for (size_t k = 0; k < n; ++k) amps[k] = {psi_re[k], psi_im ? psi_im[k] : 0.0};
    const auto& s = sys->sys;
    const auto rho = ptnoether::pure_density(ptnoether::make_ket(s, amps, false));
    const auto f = ptnoether::named_observable(observable, s);
    *out = new ptn_trajectory{ptnoether::observable_trajectory(s, rho, f, ptnoether::linspace(t0, t1, points))};
  });
}

size_t ptn_trajectory_length(const ptn_trajectory* tr) { return tr ? tr->tr.times.size() : 0; }

ptn_status ptn_trajectory_value(const ptn_trajectory* tr, size_t i, double* t, double* re, double* im) {
  return guarded([&] {
    require(tr != nullptr, "null trajectory");
    require(i < tr->tr.times.size(), "index out of range");
    if (t) *t = tr->tr.times[i];
    if (re) *re = tr->tr.values[i].real();
    if (im) *im = tr->tr.values[i].imag();
  });
}

void ptn_trajectory_destroy(ptn_trajectory* tr) { delete tr; }

ptn_status ptn_circuit_compile(const ptn_system* sys, double t, double tol, ptn_circuit** out) {
  return guarded([&] {
    require(sys && out, "null argument");
    *out = nullptr;
    ptnoether::CompileOptions opt;
    opt.tol = tol;
    *out = new ptn_circuit{ptnoether::compile_report(sys->sys, t, opt)};
  });
}

ptn_status ptn_circuit_residuals(const ptn_circuit* c, double* phase_insensitive, double* strict) {
  return guarded([&] {
    require(c != nullptr, "null circuit");
    if (phase_insensitive) *phase_insensitive = c->report.residual;
    if (strict) *strict = c->report.strict_residual;
  });
}

ptn_status ptn_circuit_serialize(const ptn_circuit* c, char** out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = dup_string(ptnoether::serialize(c->report.circuit));
  });
}

void ptn_circuit_destroy(ptn_circuit* c) { delete c; }

ptn_status ptn_run_config_file(const char* path, char** out_summary) {
  return guarded([&] {
    require(path != nullptr, "null path");
    emit(out_summary, join_lines(ptnoether::run_config(ptnoether::load_config(path))));
  });
}

ptn_status ptn_write_figure(int which, const char* out_dir, char** out_summary) {
  return guarded([&] {
    require(out_dir != nullptr, "null output directory");
    emit(out_summary, join_lines(ptnoether::write_figure(which, out_dir)));
  });
}

ptn_status ptn_decompose(double s, double a, double t, double tol, char** out_text) {
  return guarded([&] { emit(out_text, ptnoether::decompose_text(s, a, t, tol)); });
}

ptn_status ptn_symmetries_file(const char* matrix_path, const char* kind, double tol, char** out_text) {
  return guarded([&] {
    require(matrix_path != nullptr, "null path");
    std::ifstream in(matrix_path, std::ios::binary);
    if (!in) ptnoether::fail(ptnoether::ErrorKind::Config, std::string(matrix_path) + ": cannot open matrix file");
    std::ostringstream ss;
    ss << in.rdbuf();
    ptnoether::ComplexMatrix h;
    try {
      h = ptnoether::parse_matrix_text(ss.str());
    } catch (const ptnoether::Error& e) {
      ptnoether::fail(ptnoether::ErrorKind::Config, std::string(matrix_path) + ": " + e.what());
    }
    emit(out_text, ptnoether::symmetries_text(h, kind ? kind : "all", tol));
  });
}

ptn_status ptn_tomography_config_file(const char* path, const char* out_dir, char** out_summary) {
  return guarded([&] {
    require(path != nullptr, "null path");
    const auto cfg = ptnoether::load_config(path, ptnoether::ConfigPurpose::Tomography);
    const auto run = ptnoether::run_tomography(cfg, out_dir ? out_dir : "");
    std::string summary = join_lines(run.files);
    summary += "trace_distance " + ptnoether::format_number(run.trace_distance) + "\n";
    summary += "mle_iterations " + std::to_string(run.mle.iterations) + "\n";
    emit(out_summary, summary);
  });
}

}  // extern "C"
