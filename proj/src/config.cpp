#include "ptnoether/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ptnoether/errors.hpp"

namespace ptnoether {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

class Diagnostics {
 public:
  explicit Diagnostics(std::string source) : source_(std::move(source)) {}
  [[noreturn]] void at(int line, const std::string& msg) const {
    fail(ErrorKind::Config, source_ + ":" + std::to_string(line) + ": " + msg);
  }

 private:
  std::string source_;
};

}  // namespace

Complex parse_complex(std::string_view token) {
  const std::string t = trim(token);
  auto bad = [&]() -> Complex { fail(ErrorKind::InvalidArgument, "malformed complex number '" + t + "'"); };
  if (t.empty()) return bad();
  if (t.back() != 'j') {
    double re;
    if (!parse_double(t, re)) return bad();
    return {re, 0.0};
  }
  const std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not the leading sign and not part of an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_of = [&](std::string s) -> double {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    double v;
    if (!parse_double(s, v)) bad();
    return v;
  };
  if (split_at == std::string::npos) return {0.0, imag_of(body)};
  double re;
  if (!parse_double(body.substr(0, split_at), re)) return bad();
  return {re, imag_of(body.substr(split_at))};
}

ComplexMatrix parse_matrix_text(std::string_view text) {
  std::vector<std::vector<Complex>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<Complex> row;
    std::string tok;
    try {
      while (ls >> tok) row.push_back(parse_complex(tok));
    } catch (const Error& e) {
      fail(ErrorKind::Config, "matrix line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorKind::Config, "matrix file has no rows");
  const auto n = rows.size();
  for (std::size_t i = 0; i < n; ++i)
    if (rows[i].size() != n)
      fail(ErrorKind::Config, "matrix must be square; row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
  std::vector<Complex> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return make_matrix(static_cast<int>(n), static_cast<int>(n), flat);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    fail(ErrorKind::Config, std::string(kSeedEnvVar) + " is not an unsigned integer");
  }
  return 20240601ULL;
}

RunConfig parse_config(std::string_view text, const std::string& source, ConfigPurpose purpose) {
  const Diagnostics diag(source);
  RunConfig cfg;
  cfg.source = source;
  std::map<std::string, int> seen;  // key -> line (non-repeatable keys)
  bool have_a = false, have_gamma = false, have_points = false, have_start = false, have_stop = false;
  double gamma = 0;
  int last_line = 0;

  auto number = [&](const std::string& v, int line, const std::string& key) {
    double x;
    if (!parse_double(v, x)) diag.at(line, "'" + key + "' expects a number, got '" + v + "'");
    return x;
  };
  auto unsigned_int = [&](const std::string& v, int line, const std::string& key) {
    std::uint64_t x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
      diag.at(line, "'" + key + "' expects a non-negative integer, got '" + v + "'");
    return x;
  };
  auto amplitudes = [&](const std::string& v, int line) {
    std::vector<Complex> amps;
    for (const auto& tok : split(v, ',')) {
      try {
        amps.push_back(parse_complex(tok));
      } catch (const Error& e) {
        diag.at(line, e.what());
      }
    }
    return amps;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    last_line = lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) diag.at(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) diag.at(lineno, "missing key before '='");
    if (value.empty()) diag.at(lineno, "missing value for '" + key + "'");
    const bool repeatable = key == "observable" || key == "state.component";
    if (!repeatable) {
      auto [it, inserted] = seen.emplace(key, lineno);
      if (!inserted) diag.at(lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    }

    if (key == "system.dim") {
      const auto d = unsigned_int(value, lineno, key);
      if (d != 2 && d != 3 && d != 4) diag.at(lineno, "system.dim must be 2, 3 or 4");
      cfg.dim = static_cast<int>(d);
    } else if (key == "system.s") {
      cfg.s = number(value, lineno, key);
      if (!(cfg.s > 0)) diag.at(lineno, "system.s must be positive");
    } else if (key == "system.a") {
      cfg.a = number(value, lineno, key);
      if (!(cfg.a >= 0)) diag.at(lineno, "system.a must be >= 0");
      have_a = true;
    } else if (key == "system.gamma") {
      gamma = number(value, lineno, key);
      if (!(gamma >= 0)) diag.at(lineno, "system.gamma must be >= 0");
      have_gamma = true;
    } else if (key == "system.f_convention") {
      if (value == "paper") cfg.convention = FConvention::PaperFigures;
      else if (value == "unit") cfg.convention = FConvention::UnitNorm;
      else diag.at(lineno, "system.f_convention must be 'paper' or 'unit'");
    } else if (key == "state.kind") {
      if (value == "pure") cfg.state.kind = StateSpec::Kind::Pure;
      else if (value == "mixed") cfg.state.kind = StateSpec::Kind::Mixed;
      else diag.at(lineno, "state.kind must be 'pure' or 'mixed'");
      cfg.state.line = lineno;
    } else if (key == "state.basis") {
      if (value == "computational") cfg.state.eigen_basis = false;
      else if (value == "eigen") cfg.state.eigen_basis = true;
      else diag.at(lineno, "state.basis must be 'computational' or 'eigen'");
    } else if (key == "state.amplitudes") {
      cfg.state.components.push_back({1.0, amplitudes(value, lineno)});
    } else if (key == "state.component") {
      const auto colon = value.find(':');
      if (colon == std::string::npos) diag.at(lineno, "state.component expects 'weight : amplitudes'");
      const double w = number(trim(value.substr(0, colon)), lineno, key);
      if (!(w >= 0)) diag.at(lineno, "state.component weight must be >= 0");
      cfg.state.components.push_back({w, amplitudes(value.substr(colon + 1), lineno)});
    } else if (key == "state.maximally_mixed") {
      if (value != "true" && value != "false") diag.at(lineno, "state.maximally_mixed must be true or false");
      cfg.state.maximally_mixed = value == "true";
    } else if (key == "times.start") {
      cfg.start = number(value, lineno, key);
      have_start = true;
    } else if (key == "times.stop") {
      cfg.stop = number(value, lineno, key);
      have_stop = true;
    } else if (key == "times.points") {
      cfg.points = unsigned_int(value, lineno, key);
      have_points = true;
      if (cfg.points < 2) diag.at(lineno, "times.points must be at least 2");
    } else if (key == "observable") {
      ObservableSpec obs;
      obs.line = lineno;
      std::string head = value, body;
      const auto colon = value.find(':');
      if (colon != std::string::npos) {
        head = trim(value.substr(0, colon));
        body = trim(value.substr(colon + 1));
        obs.inline_matrix = true;
      }
      const auto at = head.find('@');
      obs.name = trim(head.substr(0, at));
      if (obs.name.empty()) diag.at(lineno, "observable needs a name");
      for (char c : obs.name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
          diag.at(lineno, "observable name '" + obs.name + "' may only use letters, digits, '_' and '-'");
      if (at != std::string::npos) {
        const std::string pic = trim(head.substr(at + 1));
        if (pic == "standard") obs.picture = Picture::Standard;
        else if (pic == "biorthogonal") obs.picture = Picture::Biorthogonal;
        else diag.at(lineno, "picture must be 'standard' or 'biorthogonal'");
      } else if (obs.inline_matrix) {
        diag.at(lineno, "inline observable needs '@ standard' or '@ biorthogonal'");
      } else {
        obs.picture = obs.name.rfind("tilde_", 0) == 0 ? Picture::Biorthogonal : Picture::Standard;
      }
      if (obs.inline_matrix) {
        std::string rows;
        for (const auto& r : split(body, ';')) rows += r + "\n";
        try {
          obs.matrix = parse_matrix_text(rows);
        } catch (const Error& e) {
          diag.at(lineno, e.what());
        }
      }
      for (const auto& o : cfg.observables)
        if (o.name == obs.name) diag.at(lineno, "observable '" + obs.name + "' listed twice");
      cfg.observables.push_back(std::move(obs));
    } else if (key == "shots") {
      cfg.shots = unsigned_int(value, lineno, key);
      if (*cfg.shots < 1) diag.at(lineno, "shots must be >= 1");
    } else if (key == "seed") {
      cfg.seed = unsigned_int(value, lineno, key);
    } else if (key == "tomo.time") {
      cfg.tomo_time = number(value, lineno, key);
    } else if (key == "output") {
      cfg.output_path = value;
    } else {
      diag.at(lineno, "unknown key '" + key + "'");
    }
  }

  const int end = last_line + 1;
  if (cfg.dim == 3) {
    if (have_a && have_gamma) diag.at(seen["system.gamma"], "give either system.a or system.gamma, not both");
    if (have_gamma) cfg.a = gamma / cfg.s;
    else if (!have_a) diag.at(end, "missing required key 'system.gamma' (or 'system.a')");
  } else {
    if (have_gamma) diag.at(seen["system.gamma"], "system.gamma is only used with system.dim = 3");
    if (!have_a) diag.at(end, "missing required key 'system.a'");
  }

  if (seen.count("state.kind") == 0) diag.at(end, "missing required key 'state.kind'");
  const int sline = cfg.state.line;
  if (cfg.state.kind == StateSpec::Kind::Pure) {
    if (cfg.state.maximally_mixed) diag.at(sline, "state.maximally_mixed needs state.kind = mixed");
    if (cfg.state.components.size() != 1 || seen.count("state.amplitudes") == 0)
      diag.at(sline, "pure state needs exactly one 'state.amplitudes' entry");
  } else {
    if (seen.count("state.amplitudes")) diag.at(seen["state.amplitudes"], "mixed state uses 'state.component' entries");
    if (cfg.state.maximally_mixed == !cfg.state.components.empty())
      diag.at(sline, "mixed state needs either state.maximally_mixed = true or state.component entries");
  }
  const std::size_t n = static_cast<std::size_t>(cfg.dim);
  for (const auto& [w, amps] : cfg.state.components) {
    const bool product = cfg.dim == 4 && amps.size() == 2;
    if (amps.size() != n && !product)
      diag.at(sline, "state amplitudes need " + std::to_string(n) + " entries" +
                         (cfg.dim == 4 ? " (or 2 for a product state)" : ""));
    double norm = 0;
    for (const auto& c : amps) norm += std::norm(c);
    if (!(norm > 0)) diag.at(sline, "state amplitudes are all zero");
  }
  if (cfg.state.eigen_basis && cfg.dim == 3) diag.at(sline, "state.basis = eigen is supported for dims 2 and 4");

  if (purpose == ConfigPurpose::Run) {
    if (!have_points && !have_start && !have_stop) diag.at(end, "missing 'times' section (times.start, times.stop, times.points)");
    if (!have_points) diag.at(end, "missing required key 'times.points'");
    if (cfg.observables.empty()) diag.at(end, "at least one 'observable' is required");
  }
  if (!(cfg.start >= 0)) diag.at(seen.count("times.start") ? seen["times.start"] : end, "times.start must be >= 0");
  if (!(cfg.stop > cfg.start)) diag.at(seen.count("times.stop") ? seen["times.stop"] : end, "times.stop must exceed times.start");
  if (cfg.output_path.empty()) diag.at(end, "missing required key 'output'");
  return cfg;
}

RunConfig load_config(const std::string& path, ConfigPurpose purpose) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, purpose);
}

}  // namespace ptnoether
