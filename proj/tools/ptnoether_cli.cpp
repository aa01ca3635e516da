#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "ptnoether/ptnoether.h"

namespace {

int exit_code(ptn_status st) {
  switch (st) {
    case PTN_OK: return 0;
    case PTN_ERR_CONFIG:
    case PTN_ERR_INVALID_ARGUMENT: return 2;
    case PTN_ERR_NUMERIC:
    case PTN_ERR_REGIME: return 3;
    default: return 1;
  }
}

int finish(ptn_status st, char* text) {
  if (st != PTN_OK) {
    std::fprintf(stderr, "error: %s\n", ptn_last_error());
    return exit_code(st);
  }
  if (text) {
    std::fputs(text, stdout);
    ptn_string_free(text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric Noether laboratory: trajectories, figures, circuits, symmetries, tomography"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Evaluate the trajectories described by a config file");
  run->add_option("--config", config, "Config file")->required();

  int which = 0;
  std::string out_dir;
  auto* figure = app.add_subcommand("figure", "Write the data grid for figure 2, 3 or 4");
  figure->add_option("which", which, "Figure number")->required()->check(CLI::IsMember({2, 3, 4}));
  figure->add_option("--out-dir", out_dir, "Output directory")->required();

  double s = 1.0, a = 0.0, t = 0.0, tol = 1e-6;
  auto* decompose = app.add_subcommand("decompose", "Compile exp(-iHt) into a wave-plate circuit");
  decompose->add_option("--a", a, "Non-Hermiticity ratio")->required();
  decompose->add_option("--t", t, "Evolution time")->required();
  decompose->add_option("--s", s, "Energy scale")->capture_default_str();
  decompose->add_option("--tol", tol, "Relative residual tolerance")->capture_default_str();

  std::string matrix, kind = "all";
  double sym_tol = 1e-9;
  auto* symmetries = app.add_subcommand("symmetries", "Commutant, anticommutant and intertwining bases of a matrix");
  symmetries->add_option("--matrix", matrix, "Matrix file")->required();
  symmetries->add_option("--kind", kind, "commutant | anticommutant | intertwining | all")
      ->check(CLI::IsMember({"commutant", "anticommutant", "intertwining", "all"}))
      ->capture_default_str();
  symmetries->add_option("--tol", sym_tol, "Relative rank threshold")->capture_default_str();

  std::string tomo_config, tomo_out;
  auto* tomo = app.add_subcommand("tomo", "Simulated tomography, MLE reconstruction and reverse extraction");
  tomo->add_option("--config", tomo_config, "Config file")->required();
  tomo->add_option("--out-dir", tomo_out, "Override the config output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  char* text = nullptr;
  ptn_status st = PTN_ERR_INTERNAL;
  if (*run) st = ptn_run_config_file(config.c_str(), &text);
  else if (*figure) st = ptn_write_figure(which, out_dir.c_str(), &text);
  else if (*decompose) st = ptn_decompose(s, a, t, tol, &text);
  else if (*symmetries) st = ptn_symmetries_file(matrix.c_str(), kind.c_str(), sym_tol, &text);
  else if (*tomo) st = ptn_tomography_config_file(tomo_config.c_str(), tomo_out.empty() ? nullptr : tomo_out.c_str(), &text);
  return finish(st, text);
}
