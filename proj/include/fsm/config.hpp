#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsm/fields.hpp"
#include "fsm/wedge_locality.hpp"

namespace fsm {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& source, int line, const std::string& msg);
  std::string source;
  int line = 0;  // 0 when the error is not tied to a line
  std::string detail;
};

// Sectioned key = value text; '#' and ';' start comments.
class IniFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static IniFile parse(const std::string& text, const std::string& source);
  static IniFile load(const std::string& path);

  const Entry* find(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return data_; }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> data_;
};

// Numbers with optional pi factors: "0.5", "pi/4", "-2*pi/3", "1e-3".
double parse_real(const std::string& text);

struct Tolerances {
  double relations = 1e-12;
  double algebra = 1e-12;
  double contour = 1e-6;
  double commutator = 1e-4;
  double smatrix = 1e-10;
  double trace_change = 1e-3;
};

struct RunConfig {
  std::string source;
  std::string model_name = "model";
  int epsilon = 1;
  double a = 0.0;
  double mass = 1.0;
  std::vector<cplx> zeros;
  bool auto_mirror = true;
  bool enforce_mirror = true;

  double half_width = 6.0;
  int nodes = 41;
  int n_max = 4;

  TestFunction2D f = TestFunction2D::bump({-0.1, 0.3, 0.4, 0.8});
  TestFunction2D g = TestFunction2D::bump({-0.4, 0.1, -1.1, -0.5});

  int locality_nodes = 81;
  int locality_n_max = 1;
  WedgeQuadrature quadrature;
  int spectators = 8;
  std::vector<int> contour_n = {0, 1, 2, 3};
  std::vector<int> refinement_orders = {2, 4, 8, 16, 32};
  int refinement_panels = 64;

  std::vector<int> smatrix_n = {2, 3, 4};
  int smatrix_trials = 20;

  std::optional<double> kappa;  // default: kappa(S)/2
  std::vector<double> s_values = {0.2, 0.5, 1.0, 2.0, 5.0};
  double nystrom_window = 12.0;
  int nystrom_nodes = 400;
  double bose_s = 1.0;
  std::vector<double> fermi_s = {0.5, 1.0};
  double partition_r = 1.0;
  std::vector<double> partition_beta = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  bool partition_improved = false;

  Tolerances tol;
  std::uint64_t seed = 0xD15EA5E;

  // Flattened "section.key" -> value, for the report's config echo.
  std::map<std::string, std::string> echo;

  ScatteringFunction model() const;
};

RunConfig parse_config(const IniFile& ini);
RunConfig load_config(const std::string& path);

// Applies KEY=VAL to the [tolerances] section.
void apply_tolerance_override(RunConfig& cfg, const std::string& assignment);

}  // namespace fsm
