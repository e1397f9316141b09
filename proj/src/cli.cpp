#include "fsm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>

#include "fsm/config.hpp"
#include "fsm/errors.hpp"
#include "fsm/suites.hpp"

namespace fsm {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void diagnose(std::ostream& err, const std::string& kind, const std::string& message, const json& extra = json::object()) {
  json d = {{"error", kind}, {"message", message}};
  d.update(extra);
  err << d.dump() << '\n';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_csv(const fs::path& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json table_json(const CsvTable& t) { return {{"columns", t.columns}, {"rows", t.rows}}; }

SuiteResult guarded(const std::string& name, const RunConfig& cfg, const CurveOverride& ov) {
  try {
    return run_suite(name, cfg, ov);
  } catch (const std::exception& e) {
    SuiteResult r;
    r.name = name;
    r.status = SuiteStatus::fail;
    r.note = std::string("error: ") + e.what();
    return r;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Factorizing S-matrix model builder and verifier", "fsm"};
  std::string config_path, out_dir = "fsm-out", format = "csv";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool parallel = false, schema = false;
  CurveOverride ov;

  app.add_option("--config", config_path, "model and suite configuration file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--format", format, "table output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--tol-override", overrides, "KEY=VAL tolerance override (repeatable)");
  app.add_option("--seed", seed, "random seed for trial sampling");
  app.add_flag("--parallel", parallel, "run independent suites concurrently");
  app.add_flag("--schema", schema, "print the CSV column documentation and exit");

  std::vector<CLI::App*> subs;
  for (const auto& name : suite_names()) subs.push_back(app.add_subcommand(name)->fallthrough());
  subs.push_back(app.add_subcommand("all", "every suite applicable to the model")->fallthrough());
  CLI::App* curve = app.get_subcommand("nuclearity-curve");
  curve->add_option("--s-min", ov.s_min, "smallest splitting distance");
  curve->add_option("--s-max", ov.s_max, "largest splitting distance");
  curve->add_option("--steps", ov.steps, "number of geometric steps");
  CLI::App* part = app.get_subcommand("partition");
  part->add_option("--beta", ov.beta, "single inverse temperature");
  part->add_option("--r", ov.r, "double-cone radius");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", e.what());
    return exit_config;
  }

  if (schema) {
    out << csv_schema().dump(2) << '\n';
    return exit_pass;
  }

  std::string command;
  for (CLI::App* s : subs)
    if (s->parsed()) command = s->get_name();
  if (command.empty()) {
    diagnose(err, "usage", "a subcommand is required");
    return exit_config;
  }

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? parse_config(IniFile::parse("", "<defaults>")) : load_config(config_path);
    for (const auto& o : overrides) apply_tolerance_override(cfg, o);
    if (seed) {
      cfg.seed = *seed;
      cfg.echo["run.seed"] = std::to_string(*seed);
    }
  } catch (const ConfigError& e) {
    diagnose(err, "config", e.detail, {{"source", e.source}, {"line", e.line}});
    return exit_config;
  }

  std::vector<std::string> selected;
  if (command == "all") {
    selected = suite_names();
  } else {
    selected = {command};
  }

  std::vector<SuiteResult> results(selected.size());
  if (parallel) {
    std::vector<std::future<SuiteResult>> jobs;
    for (const auto& name : selected)
      jobs.push_back(std::async(std::launch::async, [&cfg, &ov, name] { return guarded(name, cfg, ov); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < selected.size(); ++i) results[i] = guarded(selected[i], cfg, ov);
  }

  // An explicitly requested suite that does not apply is a usage error; "all" just records it.
  if (command != "all" && results.front().status == SuiteStatus::skipped) {
    diagnose(err, "inapplicable", results.front().note, {{"suite", command}});
    return exit_config;
  }

  bool any_fail = false, any_nonconv = false;
  json suites = json::array(), timings = json::object();
  for (const auto& r : results) {
    json s = {{"name", r.name}, {"status", to_string(r.status)}, {"summary", r.summary}};
    if (!r.note.empty()) s["note"] = r.note;
    if (format == "json") {
      json t = json::object();
      for (const auto& tab : r.tables) t[tab.name] = table_json(tab);
      s["tables"] = t;
    }
    suites.push_back(s);
    timings[r.name] = r.runtime_s;
    any_fail = any_fail || r.status == SuiteStatus::fail;
    any_nonconv = any_nonconv || r.status == SuiteStatus::nonconvergence;
    if (r.status == SuiteStatus::fail) diagnose(err, "suite_failed", r.note.empty() ? r.name : r.note, {{"suite", r.name}});
    if (r.status == SuiteStatus::nonconvergence) diagnose(err, "nonconvergence", r.note, {{"suite", r.name}});
  }
  const int code = any_fail ? exit_fail : any_nonconv ? exit_nonconvergence : exit_pass;

  json report = {{"tool", "fsm"},
                 {"version", kToolVersion},
                 {"command", command},
                 {"seed", cfg.seed},
                 {"format", format},
                 {"config", {{"source", cfg.source}, {"values", cfg.echo}}},
                 {"suites", suites},
                 {"exit_code", code}};

  try {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
    write_text(fs::path(out_dir) / "timings.json", timings.dump(2) + "\n");
    if (format == "csv")
      for (const auto& r : results)
        for (const auto& t : r.tables) write_csv(fs::path(out_dir) / (t.name + ".csv"), t);
  } catch (const std::exception& e) {
    diagnose(err, "io", e.what(), {{"out", out_dir}});
    return exit_config;
  }

  for (const auto& r : results) {
    out << r.name << ": " << to_string(r.status);
    if (!r.note.empty()) out << " (" << r.note << ")";
    out << '\n';
  }
  out << "report: " << (fs::path(out_dir) / "report.json").string() << '\n';
  return code;
}

}  // namespace fsm
