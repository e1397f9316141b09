#include "fsm/io.hpp"

#include <fstream>

#include "fsm/errors.hpp"

namespace fsm {

nlohmann::json fock_to_json(const FockVector& v) {
  nlohmann::json j;
  j["grid"] = {{"half_width", v.grid().half_width}, {"count", v.grid().count}};
  j["n_max"] = v.n_max();
  j["components"] = nlohmann::json::array();
  for (int n = 0; n <= v.n_max(); ++n) {
    const auto& d = v.component(n).data;
    std::vector<double> re(d.size()), im(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      re[i] = d[i].real();
      im[i] = d[i].imag();
    }
    j["components"].push_back({{"n", n}, {"re", re}, {"im", im}});
  }
  return j;
}

FockVector fock_from_json(const nlohmann::json& j) {
  try {
    const GridPtr grid = make_grid(j.at("grid").at("half_width").get<double>(), j.at("grid").at("count").get<int>());
    FockVector v(grid, j.at("n_max").get<int>());
    for (const auto& c : j.at("components")) {
      const int n = c.at("n").get<int>();
      const auto re = c.at("re").get<std::vector<double>>();
      const auto im = c.at("im").get<std::vector<double>>();
      auto& d = v.component(n).data;
      if (re.size() != d.size() || im.size() != d.size()) throw DomainError("component size does not match the grid");
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = cplx(re[i], im[i]);
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed Fock vector: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw DomainError(std::string("malformed Fock vector: ") + e.what());
  }
}

void write_fock(const std::string& path, const FockVector& v) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out << fock_to_json(v).dump() << '\n';
}

FockVector read_fock(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed Fock vector file: ") + e.what());
  }
  return fock_from_json(j);
}

}  // namespace fsm
