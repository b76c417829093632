#include "geodnc/circuit_io.hpp"

#include <cmath>
#include <fstream>

namespace geodnc {

using nlohmann::json;

namespace {

Matrix matrix_from_json(const json& j) {
  std::vector<cplx> flat;
  auto push = [&](const json& e) {
    if (!e.is_array() || e.size() != 2) throw Error("matrix entries must be [re, im] pairs");
    flat.emplace_back(e[0].get<double>(), e[1].get<double>());
  };
  for (const json& row : j) {
    if (row.is_array() && !row.empty() && row[0].is_array()) {
      for (const json& e : row) push(e);
    } else {
      push(row);
    }
  }
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(flat.size()))));
  if (dim * dim != static_cast<Eigen::Index>(flat.size()) || dim < 2 || (dim & (dim - 1)))
    throw Error("gate matrix must be 2^k x 2^k");
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = flat[r * dim + c];
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

LatticeCircuit circuit_from_json(const json& j) {
  LatticeCircuit c;
  c.dims = j.at("dims").get<std::vector<int>>();
  for (int w : c.dims)
    if (w <= 0) throw Error("lattice widths must be positive");
  c.depth = j.at("depth").get<int>();
  for (const json& layer : j.at("layers")) {
    std::vector<Gate> gs;
    for (const json& jg : layer) {
      Gate g;
      const json& spec = jg.at("gate");
      if (spec.is_string()) {
        g.name = spec.get<std::string>();
        g.matrix = gates::by_name(g.name);
        if (g.matrix.size() == 0) throw Error("unknown gate name '" + g.name + "'");
      } else {
        g.name = "U";
        g.matrix = matrix_from_json(spec);
      }
      for (const json& q : jg.at("qubits")) {
        Coord coord = q.get<Coord>();
        if (!c.contains(coord)) throw Error("gate coordinate outside lattice");
        g.qubits.push_back(c.index(coord));
      }
      gs.push_back(std::move(g));
    }
    c.layers.push_back(std::move(gs));
  }
  return c;
}

json circuit_to_json(const LatticeCircuit& c) {
  json j;
  j["dims"] = c.dims;
  j["depth"] = c.depth;
  json layers = json::array();
  for (const auto& layer : c.layers) {
    json jl = json::array();
    for (const Gate& g : layer) {
      json jg;
      const Matrix named = gates::by_name(g.name);
      if (named.size() != 0 && named.rows() == g.matrix.rows() && named.isApprox(g.matrix))
        jg["gate"] = g.name;
      else
        jg["gate"] = matrix_to_json(g.matrix);
      json qs = json::array();
      for (int q : g.qubits) qs.push_back(c.coord(q));
      jg["qubits"] = qs;
      jl.push_back(jg);
    }
    layers.push_back(jl);
  }
  j["layers"] = layers;
  return j;
}

LatticeCircuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open circuit file " + path);
  return circuit_from_json(json::parse(in));
}

void save_circuit(const LatticeCircuit& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << circuit_to_json(c).dump(1) << "\n";
}

}  // namespace geodnc
