// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "fsm/cli.hpp"
#include "fsm/config.hpp"
#include "fsm/nuclearity.hpp"
#include "fsm/suites.hpp"

using namespace fsm;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = FSM_CONFIG_DIR;
const std::vector<std::string> kCatalogue = {"free", "ising", "shg-b050", "resonance-pi4"};

RunConfig catalogue_config(const std::string& name) { return load_config(kConfigDir + "/" + name + ".cfg"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << o.detail << " (" << sci(seconds_since(t0))
            << " s)" << std::endl;
}

// Per-model suite results shared by criteria that read the same suite.
std::map<std::string, SuiteResult> algebra;

double check_max(const SuiteResult& r, const std::string& prefix) {
  double m = 0.0;
  for (const auto& [k, v] : r.summary["checks"].items())
    if (k.rfind(prefix, 0) == 0) m = std::max(m, v.get<double>());
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main() {
  criterion(1, "scattering-function relations on 201 points in [-8, 8]", [] {
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (const auto& name : kCatalogue) {
      const RunConfig cfg = catalogue_config(name);
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<double> th;
      for (int i = 0; i < 201; ++i) th.push_back(-8.0 + 16.0 * i / 200.0);
      const RelationReport r = verify_relations(cfg.model(), th, 1e-12);
      slowest = std::max(slowest, seconds_since(t0));
      worst = std::max(worst, r.max_residual());
      ok = ok && r.pass;
    }
    ok = ok && slowest < 1.0;
    return Outcome{ok, "max residual " + sci(worst) + " <= 1e-12, slowest model " + sci(slowest) + " s < 1 s"};
  });

  for (const auto& name : kCatalogue) algebra[name] = run_suite("verify-algebra", catalogue_config(name));

  criterion(2, "D_n laws and P_n projection, n <= 4, 9 nodes, 50 tensors", [] {
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (const auto& [name, r] : algebra) {
      worst = std::max({worst, check_max(r, "dn_"), check_max(r, "pn_")});
      slowest = std::max(slowest, r.runtime_s);
    }
    ok = worst <= 1e-12 && slowest < 30.0;
    return Outcome{ok, "max residual " + sci(worst) + " <= 1e-12, slowest suite " + sci(slowest) + " s < 30 s"};
  });

  criterion(3, "Zamolodchikov relations, 7 nodes, n_max 3, 20 triples, four models", [] {
    double worst = 0.0;
    for (const auto& [name, r] : algebra) worst = std::max(worst, check_max(r, "zf_"));
    return Outcome{worst <= 1e-12, "max residual " + sci(worst) + " <= 1e-12"};
  });

  criterion(4, "wedge locality: contour identity, refinement, operator commutator, negative control", [] {
    bool ok = true;
    std::ostringstream d;
    for (const auto& name : kCatalogue) {
      const SuiteResult r = run_suite("verify-locality", catalogue_config(name));
      const auto& s = r.summary;
      double contour = 0.0;
      for (const auto& c : s["contour"]) contour = std::max(contour, c["max_residual"].get<double>());
      const bool refine = s["refinement"]["converges"].get<bool>();
      const double op = s["operator"]["residual"].get<double>();
      const bool halves = s["operator"]["halves_under_doubling"].get<bool>();
      const double neg = s["negative_control"]["max_residual"].get<double>();
      const bool m = contour <= 1e-6 && refine && op <= 1e-4 && halves && neg > 1e-2;
      ok = ok && m && r.status == SuiteStatus::pass;
      d << name << "{contour " << sci(contour) << ", refinement " << (refine ? "10x" : "stalled") << ", operator " << sci(op)
        << (halves ? " halving" : " not halving") << ", control " << sci(neg) << "} ";
    }
    return Outcome{ok, d.str()};
  });

  criterion(5, "S-matrix recovery n in {2,3,4}, 20 trials, N = 41", [] {
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (const auto& name : kCatalogue) {
      RunConfig cfg = catalogue_config(name);
      cfg.smatrix_n = {2, 3, 4};
      cfg.smatrix_trials = 20;
      cfg.nodes = 41;
      const SuiteResult r = run_suite("smatrix", cfg);
      slowest = std::max(slowest, r.runtime_s);
      for (const auto& p : r.summary["per_n"])
        worst = std::max({worst, p["max_multiplier"].get<double>(), p["max_state"].get<double>()});
      ok = ok && r.status == SuiteStatus::pass;
    }
    ok = ok && worst <= 1e-10 && slowest < 120.0;
    return Outcome{ok, "max residual " + sci(worst) + " <= 1e-10, slowest model " + sci(slowest) + " s < 120 s"};
  });

  criterion(6, "Nystrom trace norm below the closed-form bound on 9 (a, b) pairs", [] {
    bool ok = true;
    double worst_ratio = 0.0, worst_change = 0.0;
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {kPi / 8, kPi / 4, kPi / 2}) {
        const TraceNormResult t = trace_norm_estimate(KernelOperator::general(a, b));
        const double bound = analytic_trace_bound(a, b);
        worst_ratio = std::max(worst_ratio, t.value / bound);
        worst_change = std::max(worst_change, t.rel_change);
        ok = ok && t.converged && t.rel_change < 1e-3 && t.value <= bound;
      }
    return Outcome{ok, "max estimate/bound " + sci(worst_ratio) + " <= 1, max relative change " + sci(worst_change) +
                           " < 1e-3"};
  });

  criterion(7, "s_min for the resonance model and its mass scaling", [] {
    const ScatteringFunction S = catalogue_config("resonance-pi4").model();
    const double k = default_kappa(S);
    const double s1 = find_s_min(S, k).s_min;
    const double s2 = find_s_min(S.with_mass(2.0), k).s_min;
    const double ratio = s2 / s1;
    const bool ok = s1 > 0.0 && s1 < 10.0 && std::abs(ratio - 0.5) <= 0.025;
    return Outcome{ok, "s_min(m=1) " + sci(s1) + " in (0, 10), s_min(m=2)/s_min(m=1) " + sci(ratio) + " within 5% of 0.5"};
  });

  criterion(8, "minus-class bound finite and decreasing for Ising and resonance", [] {
    bool ok = true;
    std::ostringstream d;
    for (const auto& name : {"ising", "resonance-pi4"}) {
      const ScatteringFunction S = catalogue_config(name).model();
      const double m = S.mass(), k = default_kappa(S);
      double prev = INFINITY;
      d << name << " log bound {";
      for (double s : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        const MinusBound b = xi_bound_minus(S, s / m, k);
        ok = ok && std::isfinite(b.series.log_value) && b.series.log_value < prev;
        prev = b.series.log_value;
        d << sci(b.series.log_value) << (s < 5.0 ? ", " : "} ");
      }
    }
    double ref = 0.0, lf = 0.0;
    for (int n = 0; n < 100; ++n) {
      if (n > 0) lf += std::log(static_cast<double>(n));
      ref += std::exp(-0.5 * lf);
    }
    const double series = minus_series(1.0).value;
    ok = ok && std::abs(series - 3.4695) <= 1e-3 && std::abs(series - ref) <= 1e-12;
    d << "series(1) " << sci(series) << " vs direct sum " << sci(ref);
    return Outcome{ok, d.str()};
  });

  criterion(9, "free Bose singular values and determinant surrogate", [] {
    const BoseBound b = free_bose_bound(1.0, 1.0);
    const BoseBound far = free_bose_bound(10.0, 1.0);
    const bool ok = b.max_phi < 1.0 && b.max_pi < 1.0 && std::isfinite(b.value) && std::abs(far.value - 1.0) <= 1e-3;
    return Outcome{ok, "max singular values " + sci(b.max_phi) + ", " + sci(b.max_pi) + " < 1; surrogate " + sci(b.value) +
                           " finite; at s = 10 |value - 1| = " + sci(std::abs(far.value - 1.0))};
  });

  criterion(10, "Ising Fermi exponential bound below the determinant product", [] {
    bool ok = true;
    std::ostringstream d;
    for (double s : {0.5, 1.0}) {
      const FermiBound f = ising_fermi_bound(s, 1.0);
      ok = ok && std::isfinite(f.value) && std::isfinite(f.det_compare) && f.value < f.det_compare;
      d << "s=" << s << ": " << sci(f.value) << " < " << sci(f.det_compare) << " ";
    }
    return Outcome{ok, d.str()};
  });

  criterion(11, "partition bound log monotone in 1/beta with positive slope (heuristic)", [] {
    bool ok = true;
    std::ostringstream d;
    for (const auto& name : {"ising", "resonance-pi4"}) {
      RunConfig cfg = catalogue_config(name);
      cfg.partition_r = 1.0 / cfg.mass;
      const SuiteResult r = run_suite("partition", cfg);
      const bool m = r.summary["monotone_in_inverse_beta"].get<bool>();
      const double slope = r.summary["small_beta_slope"].get<double>();
      ok = ok && m && slope > 0.0 && r.status == SuiteStatus::pass;
      d << name << " monotone " << (m ? "yes" : "no") << ", slope " << sci(slope) << "; ";
    }
    return Outcome{ok, d.str()};
  });

  criterion(12, "two runs of 'all' on ising.cfg give byte-identical reports", [] {
    const fs::path base = fs::temp_directory_path() / "fsm_acceptance";
    fs::remove_all(base);
    std::ostringstream o, e;
    const std::string cfg = kConfigDir + "/ising.cfg";
    const int c1 = run_cli({"all", "--config", cfg, "--out", (base / "a").string()}, o, e);
    const int c2 = run_cli({"all", "--config", cfg, "--out", (base / "b").string()}, o, e);
    const std::string a = slurp(base / "a" / "report.json"), b = slurp(base / "b" / "report.json");
    const bool ok = c1 == 0 && c2 == 0 && !a.empty() && a == b;
    return Outcome{ok, "exit codes " + std::to_string(c1) + ", " + std::to_string(c2) + "; " + std::to_string(a.size()) +
                           " bytes, " + (a == b ? "identical" : "different")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
