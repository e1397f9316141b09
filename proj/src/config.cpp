#include "fsm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "fsm/errors.hpp"

namespace fsm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string compose_message(const std::string& source, int line, const std::string& msg) {
  return line > 0 ? source + ":" + std::to_string(line) + ": " + msg : source + ": " + msg;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"model", {"name", "epsilon", "a", "mass", "zeros", "auto_mirror", "enforce_mirror"}},
      {"grid", {"half_width", "nodes", "n_max"}},
      {"testfunction.f", {"kind", "center", "sigma", "q", "amplitude", "box", "order", "alpha"}},
      {"testfunction.g", {"kind", "center", "sigma", "q", "amplitude", "box", "order", "alpha"}},
      {"locality",
       {"nodes", "n_max", "window", "panels", "order", "spectators", "n", "refinement_orders", "refinement_panels"}},
      {"smatrix", {"n", "trials"}},
      {"nuclearity",
       {"kappa", "s_values", "window", "nodes", "bose_s", "fermi_s", "r", "beta", "improved"}},
      {"tolerances", {"relations", "algebra", "contour", "commutator", "smatrix", "trace_change"}},
      {"run", {"seed"}},
  };
  return k;
}

// Reads typed values and reports failures against the entry's line.
class Reader {
 public:
  explicit Reader(const IniFile& ini) : ini_(ini) {}

  template <class T, class F>
  void read(const std::string& sec, const std::string& key, T& dst, F conv) const {
    const IniFile::Entry* e = ini_.find(sec, key);
    if (!e) return;
    try {
      dst = conv(e->value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(ini_.source(), e->line, "[" + sec + "] " + key + ": " + ex.what());
    }
  }

  int line(const std::string& sec, const std::string& key) const {
    const IniFile::Entry* e = ini_.find(sec, key);
    return e ? e->line : 0;
  }

 private:
  const IniFile& ini_;
};

double to_real(const std::string& s) { return parse_real(s); }

int to_int(const std::string& s) {
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (pos != s.size()) throw DomainError("expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
  const std::string v = lower(s);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw DomainError("expected a boolean, got '" + s + "'");
}

std::vector<double> to_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_real(p));
  return out;
}

std::vector<int> to_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : split(s, ',')) out.push_back(to_int(p));
  return out;
}

template <std::size_t K>
std::array<double, K> to_array(const std::string& s) {
  const auto v = to_reals(s);
  if (v.size() != K) throw DomainError("expected " + std::to_string(K) + " comma-separated numbers");
  std::array<double, K> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

// "re,im; re,im; ..."
std::vector<cplx> to_zeros(const std::string& s) {
  std::vector<cplx> out;
  if (trim(s).empty()) return out;
  for (const auto& pair : split(s, ';')) {
    if (pair.empty()) continue;
    const auto v = to_reals(pair);
    if (v.size() != 2) throw DomainError("each zero needs 're,im'");
    out.emplace_back(v[0], v[1]);
  }
  return out;
}

TestFunction2D read_test_function(const IniFile& ini, const std::string& sec, const TestFunction2D& fallback) {
  const auto& secs = ini.sections();
  if (!secs.count(sec)) return fallback;
  Reader r(ini);
  std::string kind = "bump";
  r.read(sec, "kind", kind, [](const std::string& s) { return lower(s); });
  double amp = 1.0;
  r.read(sec, "amplitude", amp, to_real);
  const int anchor = r.line(sec, "kind");
  try {
    if (kind == "gaussian") {
      std::array<double, 2> center{0.0, 0.0}, q{0.0, 0.0};
      double sigma = 1.0;
      r.read(sec, "center", center, to_array<2>);
      r.read(sec, "q", q, to_array<2>);
      r.read(sec, "sigma", sigma, to_real);
      return TestFunction2D::gaussian(center, sigma, q, amp);
    }
    if (kind == "bump") {
      std::array<double, 4> box{};
      int order = 64;
      double alpha = 1.0;
      if (!ini.find(sec, "box")) throw ConfigError(ini.source(), anchor, "[" + sec + "] bump needs 'box = a0, b0, a1, b1'");
      r.read(sec, "box", box, to_array<4>);
      r.read(sec, "order", order, to_int);
      r.read(sec, "alpha", alpha, to_real);
      return TestFunction2D::bump(box, amp, order, alpha);
    }
  } catch (const DomainError& e) {
    throw ConfigError(ini.source(), anchor, "[" + sec + "] " + e.what());
  }
  throw ConfigError(ini.source(), anchor, "[" + sec + "] unknown kind '" + kind + "'");
}

}  // namespace

ConfigError::ConfigError(const std::string& src, int ln, const std::string& msg)
    : std::runtime_error(compose_message(src, ln, msg)), source(src), line(ln), detail(msg) {}

IniFile IniFile::parse(const std::string& text, const std::string& source) {
  IniFile ini;
  ini.source_ = source;
  std::istringstream in(text);
  std::string raw, section;
  int ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    std::string s = raw;
    const std::size_t c = s.find_first_of("#;");
    // ';' also separates zeros, so it only starts a comment at the beginning of a line.
    if (c != std::string::npos && (s[c] == '#' || trim(s.substr(0, c)).empty())) s = s.substr(0, c);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(source, ln, "unterminated section header");
      section = lower(trim(s.substr(1, s.size() - 2)));
      if (!known_keys().count(section)) throw ConfigError(source, ln, "unknown section [" + section + "]");
      ini.data_[section];
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source, ln, "expected 'key = value'");
    if (section.empty()) throw ConfigError(source, ln, "key outside of any section");
    const std::string key = lower(trim(s.substr(0, eq)));
    if (!known_keys().at(section).count(key)) throw ConfigError(source, ln, "unknown key '" + key + "' in [" + section + "]");
    if (ini.data_[section].count(key)) throw ConfigError(source, ln, "duplicate key '" + key + "'");
    ini.data_[section][key] = {trim(s.substr(eq + 1)), ln};
  }
  return ini;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const IniFile::Entry* IniFile::find(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void IniFile::set(const std::string& section, const std::string& key, const std::string& value) {
  auto it = known_keys().find(section);
  if (it == known_keys().end() || !it->second.count(key))
    throw ConfigError(source_, 0, "unknown key '" + section + "." + key + "'");
  data_[section][key] = {value, 0};
}

double parse_real(const std::string& text) {
  const std::string s = lower(trim(text));
  if (s.empty()) throw DomainError("empty number");
  // sign? factor (('*' | '/') factor)*, factor = number | pi
  std::size_t i = 0;
  double sign = 1.0;
  if (s[i] == '-' || s[i] == '+') {
    if (s[i] == '-') sign = -1.0;
    ++i;
  }
  auto factor = [&]() -> double {
    while (i < s.size() && s[i] == ' ') ++i;
    if (s.compare(i, 2, "pi") == 0) {
      i += 2;
      return kPi;
    }
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw DomainError("cannot parse number '" + text + "'");
    i += static_cast<std::size_t>(end - begin);
    return v;
  };
  double v = factor();
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) break;
    const char op = s[i++];
    if (op == '*') {
      v *= factor();
    } else if (op == '/') {
      const double d = factor();
      if (d == 0.0) throw DomainError("division by zero in '" + text + "'");
      v /= d;
    } else {
      throw DomainError("cannot parse number '" + text + "'");
    }
  }
  if (!std::isfinite(v)) throw DomainError("non-finite number '" + text + "'");
  return sign * v;
}

ScatteringFunction RunConfig::model() const {
  ModelOptions opts;
  opts.auto_mirror = auto_mirror;
  opts.enforce_mirror = enforce_mirror;
  return build_model(epsilon, a, zeros, mass, opts);
}

RunConfig parse_config(const IniFile& ini) {
  RunConfig c;
  c.source = ini.source();
  Reader r(ini);
  r.read("model", "name", c.model_name, [](const std::string& s) { return s; });
  r.read("model", "epsilon", c.epsilon, to_int);
  r.read("model", "a", c.a, to_real);
  r.read("model", "mass", c.mass, to_real);
  r.read("model", "zeros", c.zeros, to_zeros);
  r.read("model", "auto_mirror", c.auto_mirror, to_bool);
  r.read("model", "enforce_mirror", c.enforce_mirror, to_bool);
  try {
    (void)c.model();
  } catch (const std::exception& e) {
    const std::string what = e.what();
    int ln = 0;
    for (const char* key : {"epsilon", "mass", "zeros"})
      if (!ln && what.find(key) != std::string::npos) ln = r.line("model", key);
    if (!ln && what.rfind("a must", 0) == 0) ln = r.line("model", "a");
    if (!ln) ln = r.line("model", "zeros") ? r.line("model", "zeros") : r.line("model", "epsilon");
    throw ConfigError(c.source, ln, std::string("[model] ") + e.what());
  }

  r.read("grid", "half_width", c.half_width, to_real);
  r.read("grid", "nodes", c.nodes, to_int);
  r.read("grid", "n_max", c.n_max, to_int);
  try {
    (void)RapidityGrid::make(c.half_width, c.nodes);
    if (c.n_max < 0 || c.n_max > 6) throw DomainError("n_max must lie in [0, 6]");
  } catch (const DomainError& e) {
    throw ConfigError(c.source, r.line("grid", "nodes"), std::string("[grid] ") + e.what());
  }

  c.f = read_test_function(ini, "testfunction.f", c.f);
  c.g = read_test_function(ini, "testfunction.g", c.g);

  r.read("locality", "nodes", c.locality_nodes, to_int);
  r.read("locality", "n_max", c.locality_n_max, to_int);
  r.read("locality", "window", c.quadrature.window, to_real);
  r.read("locality", "panels", c.quadrature.panels, to_int);
  r.read("locality", "order", c.quadrature.order, to_int);
  r.read("locality", "spectators", c.spectators, to_int);
  r.read("locality", "n", c.contour_n, to_ints);
  r.read("locality", "refinement_orders", c.refinement_orders, to_ints);
  r.read("locality", "refinement_panels", c.refinement_panels, to_int);
  if (c.locality_nodes < 3 || c.locality_nodes % 2 == 0)
    throw ConfigError(c.source, r.line("locality", "nodes"), "[locality] nodes must be odd and at least 3");
  if (c.locality_n_max < 0 || c.locality_n_max > 2)
    throw ConfigError(c.source, r.line("locality", "n_max"), "[locality] n_max must lie in [0, 2]");

  r.read("smatrix", "n", c.smatrix_n, to_ints);
  r.read("smatrix", "trials", c.smatrix_trials, to_int);
  for (int n : c.smatrix_n)
    if (n < 1 || n > 6) throw ConfigError(c.source, r.line("smatrix", "n"), "[smatrix] n must lie in [1, 6]");
  if (c.smatrix_trials < 1) throw ConfigError(c.source, r.line("smatrix", "trials"), "[smatrix] trials must be positive");

  if (const auto* e = ini.find("nuclearity", "kappa"); e && lower(e->value) != "default") {
    double k = 0.0;
    r.read("nuclearity", "kappa", k, to_real);
    c.kappa = k;
  }
  r.read("nuclearity", "s_values", c.s_values, to_reals);
  r.read("nuclearity", "window", c.nystrom_window, to_real);
  r.read("nuclearity", "nodes", c.nystrom_nodes, to_int);
  r.read("nuclearity", "bose_s", c.bose_s, to_real);
  r.read("nuclearity", "fermi_s", c.fermi_s, to_reals);
  r.read("nuclearity", "r", c.partition_r, to_real);
  r.read("nuclearity", "beta", c.partition_beta, to_reals);
  r.read("nuclearity", "improved", c.partition_improved, to_bool);

  r.read("tolerances", "relations", c.tol.relations, to_real);
  r.read("tolerances", "algebra", c.tol.algebra, to_real);
  r.read("tolerances", "contour", c.tol.contour, to_real);
  r.read("tolerances", "commutator", c.tol.commutator, to_real);
  r.read("tolerances", "smatrix", c.tol.smatrix, to_real);
  r.read("tolerances", "trace_change", c.tol.trace_change, to_real);

  r.read("run", "seed", c.seed, [](const std::string& s) { return static_cast<std::uint64_t>(std::stoull(s, nullptr, 0)); });

  for (const auto& [sec, keys] : ini.sections())
    for (const auto& [key, e] : keys) c.echo[sec + "." + key] = e.value;
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(IniFile::load(path)); }

void apply_tolerance_override(RunConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--tol-override", 0, "expected KEY=VAL, got '" + assignment + "'");
  std::string key = lower(trim(assignment.substr(0, eq)));
  if (key.rfind("tolerances.", 0) == 0) key = key.substr(11);
  double v = 0.0;
  try {
    v = parse_real(assignment.substr(eq + 1));
  } catch (const std::exception& e) {
    throw ConfigError("--tol-override", 0, e.what());
  }
  if (!(v > 0.0)) throw ConfigError("--tol-override", 0, "tolerance must be positive");
  static const std::map<std::string, double Tolerances::*> fields = {
      {"relations", &Tolerances::relations}, {"algebra", &Tolerances::algebra},
      {"contour", &Tolerances::contour},     {"commutator", &Tolerances::commutator},
      {"smatrix", &Tolerances::smatrix},     {"trace_change", &Tolerances::trace_change},
  };
  auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError("--tol-override", 0, "unknown tolerance '" + key + "'");
  cfg.tol.*(it->second) = v;
  cfg.echo["tolerances." + key] = trim(assignment.substr(eq + 1));
}

}  // namespace fsm
