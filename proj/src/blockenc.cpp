#include "geodnc/blockenc.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace geodnc {

namespace {

// Plane offsets of the C-copy registers around the original at (0, 0). The
// data-copy of M for copy i sits at twice that offset.
constexpr std::array<std::array<int, 2>, 8> kNeighbours = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

enum class Role { T, M, X };  // traced side, middle, data side

Role role_of(const CutRegions& r, int q, Side side) {
  auto in = [](const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); };
  if (in(r.middle, q)) return Role::M;
  const bool back = in(r.back, q);
  return (back == (side == Side::F)) ? Role::T : Role::X;
}

void append_mapped(Circuit& out, const LatticeCircuit& c, const std::vector<int>& map,
                   bool adjoint) {
  std::vector<const Gate*> gs;
  for (const auto& layer : c.layers)
    for (const Gate& g : layer) gs.push_back(&g);
  if (adjoint) std::reverse(gs.begin(), gs.end());
  for (const Gate* g : gs) {
    Gate h;
    for (int q : g->qubits) h.qubits.push_back(map[q]);
    h.matrix = adjoint ? Matrix(g->matrix.adjoint()) : g->matrix;
    h.name = g->name.empty() ? "" : (adjoint ? g->name + "^+" : g->name);
    out.gates.push_back(std::move(h));
  }
}

BlockEncoding build(const LatticeCircuit& c, const CutRegions& regions, int k, Side side,
                    bool postselect_m) {
  if (k < 1) throw Error("encoding power must be positive");
  if (k > static_cast<int>(kNeighbours.size())) throw Error("encoding power too large to interleave");
  const int n = c.num_qubits();
  BlockEncoding enc;
  enc.source = c;
  enc.regions = regions;
  enc.target = {postselect_m ? k : 0, side};
  for (int q = 0; q < n; ++q) enc.circuit.labels.push_back({c.coord(q), {}, 0, "orig"});

  for (int i = 1; i <= k; ++i) {
    std::vector<int> copy_map(n), data_m(n, -1);
    for (int q = 0; q < n; ++q) {
      const Role r = role_of(regions, q, side);
      if (r == Role::T && i == 1)
        copy_map[q] = q;
      else
        copy_map[q] = enc.circuit.add_qubit({c.coord(q), {}, i, "copy"});
      if (r == Role::M) data_m[q] = (i == 1) ? q : enc.circuit.add_qubit({c.coord(q), {}, i, "mcopy"});
    }
    append_mapped(enc.circuit, c, copy_map, false);
    for (int q = 0; q < n; ++q) {
      const Role r = role_of(regions, q, side);
      if (r == Role::T) continue;
      const int partner = r == Role::M ? data_m[q] : q;
      enc.circuit.gates.push_back({{partner, copy_map[q]}, gates::SWAP(), -1, "SWAP"});
    }
    append_mapped(enc.circuit, c, copy_map, true);
  }

  for (int q = 0; q < n; ++q) {
    const Role r = role_of(regions, q, side);
    if (r == Role::X || (r == Role::M && !postselect_m)) enc.data.push_back(q);
  }
  for (int q = 0; q < enc.circuit.num_qubits(); ++q)
    if (!std::binary_search(enc.data.begin(), enc.data.end(), q)) enc.ancilla.push_back(q);
  return enc;
}

std::array<int, 2> plane_slot(const QubitLabel& l) {
  if (l.tag == "orig") return {0, 0};
  const auto& nb = kNeighbours.at(l.copy - 1);
  if (l.tag == "copy") return nb;
  return {2 * nb[0], 2 * nb[1]};
}

}  // namespace

BlockEncoding build_sigma_encoding(const LatticeCircuit& circuit, const CutRegions& regions) {
  return build(circuit, regions, 1, Side::F, false);
}

BlockEncoding build_rho_encoding(const LatticeCircuit& circuit, const CutRegions& regions) {
  return build(circuit, regions, 1, Side::F, true);
}

BlockEncoding build_rho_power_encoding(const LatticeCircuit& circuit, const CutRegions& regions,
                                       int k, Side side) {
  return build(circuit, regions, k, side, true);
}

std::vector<std::vector<int>> asap_layers(const Circuit& circuit) {
  std::vector<int> ready(circuit.num_qubits(), 0);
  std::vector<std::vector<int>> layers;
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    int l = 0;
    for (int q : circuit.gates[g].support()) l = std::max(l, ready[q]);
    for (int q : circuit.gates[g].support()) ready[q] = l + 1;
    if (static_cast<int>(layers.size()) <= l) layers.resize(l + 1);
    layers[l].push_back(static_cast<int>(g));
  }
  return layers;
}

int circuit_depth(const Circuit& circuit) { return static_cast<int>(asap_layers(circuit).size()); }

int max_gate_distance(const Circuit& circuit) {
  int d = 0;
  for (const Gate& g : circuit.gates) {
    const auto sup = g.support();
    for (std::size_t a = 0; a < sup.size(); ++a)
      for (std::size_t b = a + 1; b < sup.size(); ++b)
        d = std::max(d, linf_distance(circuit.labels[sup[a]].site, circuit.labels[sup[b]].site));
  }
  return d;
}

BlockEncoding interleave(const BlockEncoding& enc) {
  if (!enc.lattice_dims.empty()) return enc;
  BlockEncoding out = enc;
  int lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
  for (const auto& l : enc.circuit.labels) {
    const auto s = plane_slot(l);
    lo0 = std::min(lo0, s[0]);
    hi0 = std::max(hi0, s[0]);
    lo1 = std::min(lo1, s[1]);
    hi1 = std::max(hi1, s[1]);
  }
  for (auto& l : out.circuit.labels) {
    const auto s = plane_slot(l);
    l.site.push_back(s[0] - lo0);
    l.site.push_back(s[1] - lo1);
  }
  out.lattice_dims = enc.source.dims;
  out.lattice_dims.push_back(hi0 - lo0 + 1);
  out.lattice_dims.push_back(hi1 - lo1 + 1);
  out.circuit.gates.clear();
  for (const auto& layer : asap_layers(enc.circuit))
    for (int g : layer) out.circuit.gates.push_back(enc.circuit.gates[g]);
  return out;
}

LatticeCircuit to_lattice(const BlockEncoding& enc) {
  if (enc.lattice_dims.empty()) throw Error("encoding is not interleaved");
  LatticeCircuit lc;
  lc.dims = enc.lattice_dims;
  std::vector<int> site_of(enc.circuit.num_qubits());
  for (int q = 0; q < enc.circuit.num_qubits(); ++q) {
    const Coord& s = enc.circuit.labels[q].site;
    if (!lc.contains(s)) throw Error("interleaved qubit outside its lattice");
    site_of[q] = lc.index(s);
  }
  for (const auto& layer : asap_layers(enc.circuit)) {
    std::vector<Gate> gs;
    for (int g : layer) {
      Gate h = enc.circuit.gates[g];
      for (int& q : h.qubits) q = site_of[q];
      gs.push_back(std::move(h));
    }
    lc.layers.push_back(std::move(gs));
  }
  lc.depth = static_cast<int>(lc.layers.size());
  return lc;
}

Matrix encoded_block(const BlockEncoding& enc, const OracleOptions& opts) {
  const auto nd = enc.data.size();
  const Eigen::Index dim = Eigen::Index{1} << nd;
  Matrix block = Matrix::Zero(dim, dim);
  Synthesis s;
  s.M = enc.ancilla;
  s.N = enc.data;
  s.gamma.labels = enc.circuit.labels;
  for (Eigen::Index j = 0; j < dim; ++j) {
    s.gamma.gates.clear();
    for (std::size_t b = 0; b < nd; ++b)
      if (j >> b & 1) s.gamma.gates.push_back({{enc.data[b]}, gates::X(), -1, "X"});
    s.gamma.gates.insert(s.gamma.gates.end(), enc.circuit.gates.begin(), enc.circuit.gates.end());
    const StateVector st = postselected_state(s, false, opts);
    std::vector<int> bit_of;
    for (int q : st.qubits)
      bit_of.push_back(static_cast<int>(
          std::lower_bound(enc.data.begin(), enc.data.end(), q) - enc.data.begin()));
    for (Eigen::Index r = 0; r < st.amps.size(); ++r) {
      Eigen::Index row = 0;
      for (std::size_t p = 0; p < bit_of.size(); ++p)
        if (r >> p & 1) row |= Eigen::Index{1} << bit_of[p];
      block(row, j) = st.amps[r];
    }
  }
  return block;
}

Matrix target_operator(const BlockEncoding& enc) {
  const auto& r = enc.regions;
  std::vector<int> keep = r.middle;
  const auto& far = enc.target.side == Side::F ? r.front : r.back;
  keep.insert(keep.end(), far.begin(), far.end());
  std::sort(keep.begin(), keep.end());
  std::vector<int> all(enc.source.num_qubits());
  for (int q = 0; q < enc.source.num_qubits(); ++q) all[q] = q;
  const StateVector psi = apply_circuit(zero_state(all), enc.source);
  DensityOperator sigma = reduced_state(psi, keep);
  if (enc.target.power == 0) return sigma.matrix;
  const DensityOperator rho = postselect_zero(sigma, r.middle);
  Matrix out = Matrix::Identity(rho.matrix.rows(), rho.matrix.cols());
  for (int i = 0; i < enc.target.power; ++i) out = out * rho.matrix;
  return out;
}

double verify_encoding(const BlockEncoding& enc, const OracleOptions& opts) {
  const Matrix diff = target_operator(enc) - enc.alpha * encoded_block(enc, opts);
  if (diff.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues()[0];
}

}  // namespace geodnc
