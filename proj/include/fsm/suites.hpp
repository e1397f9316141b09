#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fsm/config.hpp"

namespace fsm {

enum class SuiteStatus { pass, fail, nonconvergence, skipped };

const char* to_string(SuiteStatus s);

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::pass;
  std::string note;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<CsvTable> tables;
  double runtime_s = 0.0;  // kept out of the report so reports stay byte-identical
};

// Suite names accepted by run_suite; "all" expands to every applicable one.
const std::vector<std::string>& suite_names();

struct CurveOverride {
  std::optional<double> s_min, s_max;
  std::optional<int> steps;
  std::optional<double> beta, r;
};

SuiteResult run_suite(const std::string& name, const RunConfig& cfg, const CurveOverride& ov = {});

SuiteResult suite_scattering(const RunConfig& cfg);
SuiteResult suite_algebra(const RunConfig& cfg);
SuiteResult suite_locality(const RunConfig& cfg);
SuiteResult suite_smatrix(const RunConfig& cfg);
SuiteResult suite_nuclearity_curve(const RunConfig& cfg, const CurveOverride& ov = {});
SuiteResult suite_find_smin(const RunConfig& cfg);
SuiteResult suite_free_bose(const RunConfig& cfg);
SuiteResult suite_ising_fermi(const RunConfig& cfg);
SuiteResult suite_partition(const RunConfig& cfg, const CurveOverride& ov = {});

// Column documentation for every CSV table the suites emit.
nlohmann::json csv_schema();

std::string format_number(double v);

}  // namespace fsm
