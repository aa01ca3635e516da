#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptnoether/biorthogonal.hpp"
#include "ptnoether/pt_model.hpp"

namespace ptnoether {

struct ObservableSpec {
  std::string name;
  Picture picture = Picture::Standard;
  bool inline_matrix = false;
  ComplexMatrix matrix;  // inline only
  int line = 0;
};

struct StateSpec {
  enum class Kind { Pure, Mixed } kind = Kind::Pure;
  bool eigen_basis = false;
  bool maximally_mixed = false;
  std::vector<std::pair<double, std::vector<Complex>>> components;  // (weight, amplitudes)
  int line = 0;
};

struct RunConfig {
  std::string source = "<config>";
  int dim = 2;
  double s = 1.0;
  double a = 0.0;
  FConvention convention = FConvention::PaperFigures;
  StateSpec state;
  double start = 0.0;
  double stop = 10.0;
  std::size_t points = 1001;
  std::vector<ObservableSpec> observables;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<double> tomo_time;
  std::string output_path;
};

enum class ConfigPurpose { Run, Tomography };

RunConfig parse_config(std::string_view text, const std::string& source, ConfigPurpose purpose = ConfigPurpose::Run);
RunConfig load_config(const std::string& path, ConfigPurpose purpose = ConfigPurpose::Run);

// "re+imj", "re-imj", "re", "imj" (also "j", "-j").
Complex parse_complex(std::string_view token);
// One row per line, whitespace-separated complex entries; '#' comments.
ComplexMatrix parse_matrix_text(std::string_view text);

// Seed used when a config gives none: PTNOETHER_SEED if set, else 20240601.
std::uint64_t default_seed();
inline constexpr const char* kSeedEnvVar = "PTNOETHER_SEED";

}  // namespace ptnoether
