#include "geodnc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace geodnc {

namespace {

std::string coord_str(const Coord& c) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ")";
  return os.str();
}

// Hermitian square root of a PSD matrix, clamping tiny negative eigenvalues.
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::vector<int> Gate::support() const {
  std::vector<int> s = qubits;
  if (ancilla >= 0) s.push_back(ancilla);
  return s;
}

Matrix unitary_dilation(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix id = Matrix::Identity(n, n);
  Matrix u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = a;
  u.topRightCorner(n, n) = psd_sqrt(id - a * a.adjoint());
  u.bottomLeftCorner(n, n) = psd_sqrt(id - a.adjoint() * a);
  u.bottomRightCorner(n, n) = -a.adjoint();
  return u;
}

Matrix LowRankOp::dense() const {
  return vectors * weights.cast<cplx>().asDiagonal() * vectors.adjoint();
}

double LowRankOp::norm() const { return weights.size() ? weights.cwiseAbs().maxCoeff() : 0.0; }

LowRankOp LowRankOp::scaled(double f) const { return {vectors, weights * f}; }

Matrix Gate::block() const { return low_rank ? low_rank->dense() : matrix; }

Matrix Gate::unitary() const { return is_block() ? unitary_dilation(block()) : matrix; }

namespace gates {

Matrix H() {
  Matrix m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}
Matrix X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix Z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
Matrix T() {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = std::polar(1.0, M_PI / 4);
  return m;
}
Matrix S() {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = cplx(0, 1);
  return m;
}
Matrix CZ() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}
Matrix CNOT() {
  // bit 0 = control, bit 1 = target
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(3, 1) = 1;
  m(1, 3) = 1;
  return m;
}
Matrix SWAP() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(3, 3) = 1;
  return m;
}
Matrix I(int nqubits) { return Matrix::Identity(1 << nqubits, 1 << nqubits); }

Matrix by_name(const std::string& name) {
  if (name == "H") return H();
  if (name == "X") return X();
  if (name == "Z") return Z();
  if (name == "T") return T();
  if (name == "S") return S();
  if (name == "I") return I(1);
  if (name == "CZ") return CZ();
  if (name == "CNOT" || name == "CX") return CNOT();
  if (name == "SWAP") return SWAP();
  return {};
}

}  // namespace gates

int LatticeCircuit::num_qubits() const {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

Coord LatticeCircuit::coord(int q) const {
  Coord c(dims.size());
  for (int a = dimension() - 1; a >= 0; --a) {
    c[a] = q % dims[a];
    q /= dims[a];
  }
  return c;
}

int LatticeCircuit::index(const Coord& c) const {
  int q = 0;
  for (int a = 0; a < dimension(); ++a) q = q * dims[a] + c[a];
  return q;
}

bool LatticeCircuit::contains(const Coord& c) const {
  if (c.size() != dims.size()) return false;
  for (int a = 0; a < dimension(); ++a)
    if (c[a] < 0 || c[a] >= dims[a]) return false;
  return true;
}

std::size_t LatticeCircuit::gate_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.size();
  return n;
}

LatticeCircuit identity_circuit(std::vector<int> dims, int depth) {
  LatticeCircuit c;
  c.dims = std::move(dims);
  c.depth = depth;
  c.layers.assign(depth, {});
  return c;
}

int linf_distance(const Coord& a, const Coord& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ValidationReport validate(const LatticeCircuit& circuit) {
  ValidationReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  if (circuit.dims.empty()) fail("empty lattice");
  for (int w : circuit.dims)
    if (w <= 0) fail("non-positive lattice width");
  if (!r.ok) return r;
  if (circuit.depth <= 0) fail("depth must be positive");
  if (static_cast<int>(circuit.layers.size()) != circuit.depth)
    fail("layer count " + std::to_string(circuit.layers.size()) + " != depth " +
         std::to_string(circuit.depth));
  const int n = circuit.num_qubits();
  for (std::size_t l = 0; l < circuit.layers.size(); ++l) {
    std::set<int> used;
    for (const Gate& g : circuit.layers[l]) {
      const std::string where = "layer " + std::to_string(l) + ": ";
      if (g.is_block()) fail(where + "block-encoded gate not allowed in a lattice circuit");
      const int k = static_cast<int>(g.qubits.size());
      if (k < 1 || k > 2) {
        fail(where + "gate acts on " + std::to_string(k) + " qubits");
        continue;
      }
      if (g.matrix.rows() != (1 << k) || g.matrix.cols() != (1 << k))
        fail(where + "matrix size does not match qubit count");
      bool inside = true;
      for (int q : g.qubits) {
        if (q < 0 || q >= n) {
          fail(where + "qubit index " + std::to_string(q) + " outside lattice");
          inside = false;
        }
      }
      if (!inside) continue;
      if (k == 2) {
        if (g.qubits[0] == g.qubits[1]) fail(where + "repeated qubit in gate");
        const Coord a = circuit.coord(g.qubits[0]);
        const Coord b = circuit.coord(g.qubits[1]);
        if (linf_distance(a, b) > 1)
          fail(where + "non-local gate between " + coord_str(a) + " and " + coord_str(b));
      }
      for (int q : g.qubits) {
        if (!used.insert(q).second)
          fail(where + "overlapping supports at " + coord_str(circuit.coord(q)));
      }
    }
  }
  return r;
}

std::vector<int> light_cone(const LatticeCircuit& circuit, const std::vector<int>& seed,
                            ConeDirection direction) {
  std::vector<char> in(circuit.num_qubits(), 0);
  for (int q : seed) in.at(q) = 1;
  auto sweep = [&](const std::vector<Gate>& layer) {
    for (const Gate& g : layer) {
      bool hit = false;
      for (int q : g.qubits) hit |= in[q] != 0;
      if (hit)
        for (int q : g.qubits) in[q] = 1;
    }
  };
  if (direction == ConeDirection::Forward) {
    for (const auto& layer : circuit.layers) sweep(layer);
  } else {
    for (auto it = circuit.layers.rbegin(); it != circuit.layers.rend(); ++it) sweep(*it);
  }
  std::vector<int> out;
  for (int q = 0; q < circuit.num_qubits(); ++q)
    if (in[q]) out.push_back(q);
  return out;
}

CutRegions cut_regions(const LatticeCircuit& circuit, const Slice& slice) {
  if (slice.axis < 0 || slice.axis >= circuit.dimension()) throw Error("slice axis out of range");
  if (slice.lo < 0 || slice.hi > circuit.dims[slice.axis] || slice.lo >= slice.hi)
    throw Error("slice outside lattice");
  if (slice.width() < 2 * circuit.depth) throw Error("insufficient light-cone separation");
  CutRegions r;
  r.slice = slice;
  for (int q = 0; q < circuit.num_qubits(); ++q) {
    const int x = circuit.coord(q)[slice.axis];
    if (x < slice.lo)
      r.back.push_back(q);
    else if (x >= slice.hi)
      r.front.push_back(q);
    else
      r.middle.push_back(q);
  }
  return r;
}

std::vector<Slice> enumerate_slices(int axis_length, int axis, int depth, int slice_width,
                                    int max_gap, std::vector<std::string>* warnings) {
  if (slice_width < 2 * depth) throw Error("slice width below light-cone minimum 2d");
  if (max_gap < 0) throw Error("negative slice gap");
  std::vector<Slice> out;
  if (axis_length < slice_width) {
    if (warnings) warnings->push_back("axis shorter than slice width; no slices");
    return out;
  }
  for (int lo = 0; lo + slice_width <= axis_length; lo += slice_width + max_gap)
    out.push_back({axis, lo, lo + slice_width});
  return out;
}

std::vector<Slice> enumerate_slices(const LatticeCircuit& circuit, int axis, int slice_width,
                                    int max_gap, std::vector<std::string>* warnings) {
  if (axis < 0 || axis >= circuit.dimension()) throw Error("slice axis out of range");
  return enumerate_slices(circuit.dims[axis], axis, circuit.depth, slice_width, max_gap,
                          warnings);
}

}  // namespace geodnc
