#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "ptnoether/config.hpp"
#include "ptnoether/errors.hpp"
#include "ptnoether/experiments.hpp"

using namespace ptnoether;
using testutil::max_abs;
namespace fs = std::filesystem;

namespace {

const char* kFig2a = R"(# single qubit, unbroken
system.dim = 2
system.a = 0.6
state.kind = pure
state.amplitudes = 1, 1
times.start = 0
times.stop = 10
times.points = 101
observable = tilde_z
observable = tilde_y
observable = sigma_z @ standard
output = out
)";

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ptnoether_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("complex number tokens") {
  CHECK(parse_complex("1.5") == Complex(1.5, 0));
  CHECK(parse_complex("-2") == Complex(-2, 0));
  CHECK(parse_complex("0.5+0.25j") == Complex(0.5, 0.25));
  CHECK(parse_complex("0.5-0.25j") == Complex(0.5, -0.25));
  CHECK(parse_complex("3j") == Complex(0, 3));
  CHECK(parse_complex("-j") == Complex(0, -1));
  CHECK(parse_complex("j") == Complex(0, 1));
  CHECK(parse_complex("1e-3+2E+1j") == Complex(1e-3, 20));
  CHECK(parse_complex("+1-j") == Complex(1, -1));
  for (const char* bad : {"", "abc", "1+", "1+2", "1..2j", "nan", "1+2jj"}) CHECK_THROWS_AS(parse_complex(bad), Error);
}

TEST_CASE("matrix text") {
  const ComplexMatrix m = parse_matrix_text("# H\n0.6j 1\n1 -0.6j  # row 2\n\n");
  REQUIRE(m.rows() == 2);
  CHECK(max_abs(m - testutil::h_pt(1.0, 0.6)) == 0);
  CHECK_THROWS_AS(parse_matrix_text("1 2\n3\n"), Error);
  CHECK_THROWS_AS(parse_matrix_text("# nothing\n"), Error);
  CHECK_THROWS_AS(parse_matrix_text("1 x\n2 3\n"), Error);
}

TEST_CASE("parse a complete config") {
  const RunConfig cfg = parse_config(kFig2a, "fig2a.cfg");
  CHECK(cfg.dim == 2);
  CHECK(cfg.a == 0.6);
  CHECK(cfg.s == 1.0);
  CHECK(cfg.state.kind == StateSpec::Kind::Pure);
  REQUIRE(cfg.state.components.size() == 1);
  CHECK(cfg.state.components[0].second.size() == 2);
  CHECK(cfg.points == 101);
  REQUIRE(cfg.observables.size() == 3);
  CHECK(cfg.observables[0].picture == Picture::Biorthogonal);
  CHECK(cfg.observables[2].picture == Picture::Standard);
  CHECK(cfg.observables[2].line == 11);
  CHECK(cfg.output_path == "out");
  CHECK_FALSE(cfg.seed.has_value());
}

TEST_CASE("config diagnostics are line-anchored") {
  const std::string base = kFig2a;
  CHECK(config_error(replace(base, "times.points = 101", "times.points = 1")) == "cfg:8: times.points must be at least 2");
  CHECK(config_error(replace(base, "system.a = 0.6", "system.a = abc")).rfind("cfg:3: 'system.a' expects a number", 0) == 0);
  CHECK(config_error(base + "system.a = 0.7\n").find("duplicate key 'system.a' (first set on line 3)") != std::string::npos);
  CHECK(config_error(base + "colour = blue\n") == "cfg:13: unknown key 'colour'");
  CHECK(config_error(base + "just text\n") == "cfg:13: expected 'key = value'");
  CHECK(config_error(replace(base, "state.amplitudes = 1, 1", "state.amplitudes = 1, 1, 1")) ==
        "cfg:4: state amplitudes need 2 entries");
  CHECK(config_error(replace(base, "times.stop = 10", "times.stop = 0")) == "cfg:7: times.stop must exceed times.start");
  CHECK(config_error(replace(base, "observable = tilde_y\n", "observable = tilde_z\n")).find("listed twice") != std::string::npos);
  CHECK(config_error(replace(base, "output = out\n", "")).find("missing required key 'output'") != std::string::npos);
  CHECK(config_error(replace(base, "state.kind = pure", "state.kind = solid")) == "cfg:4: state.kind must be 'pure' or 'mixed'");
  CHECK(config_error(replace(base, "system.dim = 2", "system.dim = 5")) == "cfg:2: system.dim must be 2, 3 or 4");
}

TEST_CASE("empty times section is rejected") {
  std::string text = kFig2a;
  text = replace(text, "times.start = 0\n", "");
  text = replace(text, "times.stop = 10\n", "");
  text = replace(text, "times.points = 101\n", "");
  const std::string msg = config_error(text);
  CHECK(msg.find("missing 'times' section") != std::string::npos);
  // Tomography configs do not need a time grid.
  CHECK_NOTHROW(parse_config(text, "cfg", ConfigPurpose::Tomography));
}

TEST_CASE("mixed states, inline observables and spin-1 keys") {
  const RunConfig mixed = parse_config(R"(system.dim = 2
system.a = 1.2
state.kind = mixed
state.component = 0.25 : 1, 0
state.component = 0.75 : 0.6, 0.8j
times.stop = 2
times.points = 5
observable = custom @ biorthogonal : 1 0 ; 0 -1
output = o
)", "m");
  CHECK(mixed.state.components.size() == 2);
  CHECK(mixed.state.components[1].second[1] == Complex(0, 0.8));
  REQUIRE(mixed.observables[0].inline_matrix);
  CHECK(max_abs(mixed.observables[0].matrix - pauli::Z()) == 0);

  const RunConfig spin = parse_config("system.dim = 3\nsystem.s = 2\nsystem.gamma = 1\nstate.kind = mixed\n"
                                      "state.maximally_mixed = true\ntimes.points = 3\nobservable = m @ standard : 1 0 0; 0 0 0; 0 0 -1\noutput = o\n",
                                      "s");
  CHECK(spin.a == 0.5);
  CHECK(config_error("system.dim = 3\nsystem.gamma = 1\nsystem.a = 1\nstate.kind = mixed\nstate.maximally_mixed = true\n"
                     "times.points = 3\nobservable = sigma_z\noutput = o\n") == "cfg:2: give either system.a or system.gamma, not both");
  CHECK(config_error("system.dim = 2\nsystem.a = 1\nstate.kind = pure\nstate.amplitudes = 1, 0\ntimes.points = 3\n"
                     "observable = x : 1 0 ; 0 1\noutput = o\n") == "cfg:6: inline observable needs '@ standard' or '@ biorthogonal'");
}

TEST_CASE("default seed") {
  ::unsetenv(kSeedEnvVar);
  CHECK(default_seed() == 20240601u);
  ::setenv(kSeedEnvVar, "77", 1);
  CHECK(default_seed() == 77u);
  ::setenv(kSeedEnvVar, "x", 1);
  CHECK_THROWS_AS(default_seed(), Error);
  ::unsetenv(kSeedEnvVar);
}

TEST_CASE("initial states") {
  const PTSystem sys = build_system(2, 1.0, 0.6);
  const ComplexVector k = make_ket(sys, {1.0, 1.0}, false);
  CHECK(std::abs(k.norm() - 1.0) < 1e-15);
  CHECK(std::abs(k(0) - 1 / std::sqrt(2.0)) < 1e-15);
  const ComplexVector e = make_ket(sys, {1.0, 0.0}, true);
  CHECK(max_abs(e - sys.eigen.right.col(0) / sys.eigen.right.col(0).norm()) < 1e-15);

  const PTSystem two = build_system(4, 1.0, 1.2);
  const ComplexVector prod = make_ket(two, {1.0, 2.0}, false);
  ComplexVector q(2);
  q << 1, 2;
  q /= q.norm();
  CHECK(max_abs(prod - kron(q, q)) < 1e-15);

  StateSpec mixed;
  mixed.kind = StateSpec::Kind::Mixed;
  mixed.maximally_mixed = true;
  CHECK(max_abs(initial_density(two, mixed) - ComplexMatrix::Identity(4, 4) / 4.0) == 0);
  mixed.maximally_mixed = false;
  mixed.components = {{1.0, {1.0, 0.0}}, {3.0, {0.0, 1.0}}};
  const ComplexMatrix rho = initial_density(sys, mixed);
  CHECK(std::abs(rho(0, 0) - 0.25) < 1e-15);
  CHECK(std::abs(rho(1, 1) - 0.75) < 1e-15);
}

TEST_CASE("named observables") {
  const PTSystem one = build_system(2, 1.0, 0.6);
  const PTSystem two = build_system(4, 1.0, 1.2);
  for (const char* n : {"sigma_x", "sigma_y", "sigma_z", "tilde_x", "tilde_y", "tilde_z"}) CHECK(named_observable(n, one).label == n);
  for (const char* n : {"S_y", "S_z", "tilde_S_y", "tilde_S_z"}) CHECK(named_observable(n, two).label == n);
  CHECK_THROWS_AS(named_observable("tilde_S_y", one), Error);
  CHECK_THROWS_AS(named_observable("tilde_q", one), Error);
}

TEST_CASE("number and matrix formatting") {
  CHECK(format_number(1.25) == "1.25");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-20) == "1e-20");
  Trajectory tr;
  tr.times = {0.0, 0.5};
  tr.values = {Complex(1.25, 0), Complex(1.25, -0.0)};
  tr.observable_id = "tilde_z";
  tr.picture = Picture::Biorthogonal;
  CHECK(trajectory_csv({tr}, Regime::Unbroken) ==
        "t,re_value,im_value,observable,picture,regime\n0,1.25,0,tilde_z,biorthogonal,unbroken\n"
        "0.5,1.25,0,tilde_z,biorthogonal,unbroken\n");
}

TEST_CASE("run writes reproducible CSV files") {
  const fs::path dir = scratch("run");
  RunConfig cfg = parse_config(kFig2a, "fig2a");
  cfg.output_path = dir.string();
  const auto files = run_config(cfg);
  REQUIRE(files.size() == 3);
  CHECK(fs::exists(dir / "tilde_z.csv"));
  const std::string first = slurp(dir / "tilde_z.csv");
  CHECK(first.rfind("t,re_value,im_value,observable,picture,regime\n0,1.25,0,tilde_z,biorthogonal,unbroken\n", 0) == 0);
  run_config(cfg);
  CHECK(slurp(dir / "tilde_z.csv") == first);
  CHECK(std::count(first.begin(), first.end(), '\n') == 102);

  // Biorthogonal observables at the exceptional point are refused with the line number.
  cfg.a = 1.0;
  try {
    run_config(cfg);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Regime);
    CHECK(std::string(e.what()).find("fig2a:9") != std::string::npos);
    CHECK(std::string(e.what()).find("exceptional point") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("atomic writes replace whole files") {
  const fs::path dir = scratch("atomic");
  const std::string p = (dir / "x.txt").string();
  write_file_atomic(p, "first\n");
  write_file_atomic(p, "second\n");
  CHECK(slurp(p) == "second\n");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  write_file_atomic((dir / "sub" / "y.txt").string(), "z");
  CHECK(slurp(dir / "sub" / "y.txt") == "z");
  CHECK_THROWS_AS(write_file_atomic((dir / "x.txt" / "y.txt").string(), "z"), Error);
  fs::remove_all(dir);
}

TEST_CASE("figure bundles") {
  const fs::path dir = scratch("fig");
  CHECK(write_figure(2, dir.string()).size() == 8);
  CHECK(write_figure(3, dir.string()).size() == 12);
  CHECK(write_figure(4, dir.string()).size() == 12);
  CHECK(fs::exists(dir / "fig2_a0.6_tilde_z.csv"));
  CHECK(fs::exists(dir / "fig4_tilde_S_y_plus.csv"));
  CHECK_THROWS_AS(write_figure(5, dir.string()), Error);
  fs::remove_all(dir);
}
