#include "geodnc/oracle.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <string>

#include "geodnc/kernels.hpp"

namespace geodnc {

namespace {

int position_of(const std::vector<int>& qubits, int q) {
  auto it = std::find(qubits.begin(), qubits.end(), q);
  return it == qubits.end() ? -1 : static_cast<int>(it - qubits.begin());
}

void apply_positions(Vector& amps, const std::vector<int>& pos, const Matrix& m, Backend b) {
  if (b == Backend::Serial)
    kernels::apply_matrix_serial(amps, pos, m);
  else
    kernels::apply_matrix_omp(amps, pos, m);
}

// V diag(w) V^+ on the given positions, through the gathered matrix form.
void apply_low_rank(Vector& amps, const std::vector<int>& pos, const LowRankOp& op, Backend b) {
  int nbits = 0;
  while ((Eigen::Index{1} << nbits) < amps.size()) ++nbits;
  Matrix y = b == Backend::Serial ? kernels::gather_serial(amps, nbits, pos)
                                  : kernels::gather_omp(amps, nbits, pos);
  const Matrix z = op.weights.cast<cplx>().asDiagonal() * (op.vectors.adjoint() * y);
  y.noalias() = op.vectors * z;
  if (b == Backend::Serial)
    kernels::scatter_serial(amps, pos, y);
  else
    kernels::scatter_omp(amps, pos, y);
}

// Live-qubit bookkeeping for the synthesis evaluator.
class LiveState {
 public:
  LiveState(int cap, Backend backend) : cap_(cap), backend_(backend) { amps_ = Vector::Ones(1); }

  int pos(int q) {
    int p = position_of(qubits_, q);
    if (p >= 0) return p;
    if (static_cast<int>(qubits_.size()) + 1 > cap_)
      throw Error("oracle capacity exceeded: more than " + std::to_string(cap_) +
                  " live qubits");
    const Eigen::Index old = amps_.size();
    amps_.conservativeResize(2 * old);
    amps_.tail(old).setZero();
    qubits_.push_back(q);
    return static_cast<int>(qubits_.size()) - 1;
  }

  void apply(const std::vector<int>& qs, const Matrix& m) {
    std::vector<int> p;
    p.reserve(qs.size());
    for (int q : qs) p.push_back(pos(q));
    apply_positions(amps_, p, m, backend_);
  }

  void apply(const std::vector<int>& qs, const LowRankOp& op) {
    std::vector<int> p;
    p.reserve(qs.size());
    for (int q : qs) p.push_back(pos(q));
    apply_low_rank(amps_, p, op, backend_);
  }

  void project(int q) {
    const int p = position_of(qubits_, q);
    if (p < 0) return;
    amps_ = kernels::project_zero(amps_, p);
    qubits_.erase(qubits_.begin() + p);
  }

  StateVector take() { return {std::move(qubits_), std::move(amps_)}; }

 private:
  int cap_;
  Backend backend_;
  std::vector<int> qubits_;
  Vector amps_;
};

}  // namespace

StateVector zero_state(std::vector<int> qubits) {
  StateVector s;
  s.amps = Vector::Zero(Eigen::Index{1} << qubits.size());
  s.amps[0] = 1;
  s.qubits = std::move(qubits);
  return s;
}

void apply_gate(StateVector& state, const Gate& gate, Backend backend) {
  std::vector<int> pos;
  for (int q : gate.support()) {
    const int p = position_of(state.qubits, q);
    if (p < 0) throw Error("gate acts on qubit " + std::to_string(q) + " outside the state");
    pos.push_back(p);
  }
  apply_positions(state.amps, pos, gate.unitary(), backend);
}

StateVector apply_circuit(StateVector state, const LatticeCircuit& circuit, Backend backend) {
  for (const auto& layer : circuit.layers)
    for (const Gate& g : layer) apply_gate(state, g, backend);
  return state;
}

double output_probability(const LatticeCircuit& circuit, const std::vector<int>& x) {
  const int n = circuit.num_qubits();
  if (static_cast<int>(x.size()) != n) throw Error("bitstring length does not match circuit");
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) qubits[q] = q;
  const StateVector s = apply_circuit(zero_state(qubits), circuit);
  std::size_t idx = 0;
  for (int q = 0; q < n; ++q)
    if (x[q]) idx |= std::size_t{1} << q;
  return std::norm(s.amps[static_cast<Eigen::Index>(idx)]);
}

Matrix full_unitary(const Circuit& circuit) {
  const int n = circuit.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : circuit.gates) {
    const std::vector<int> sup = g.support();
    const Matrix gu = g.unitary();
    std::size_t mask = 0;
    for (int q : sup) mask |= std::size_t{1} << q;
    auto spread = [&](Eigen::Index local) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < sup.size(); ++b) r |= std::size_t((local >> b) & 1) << sup[b];
      return r;
    };
    // Kronecker embedding I (x) gu, stored sparsely.
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(static_cast<std::size_t>(dim) * gu.cols());
    for (std::size_t rest = 0; rest < static_cast<std::size_t>(dim); ++rest) {
      if (rest & mask) continue;
      for (Eigen::Index r = 0; r < gu.rows(); ++r)
        for (Eigen::Index c = 0; c < gu.cols(); ++c)
          if (gu(r, c) != cplx(0))
            entries.emplace_back(rest | spread(r), rest | spread(c), gu(r, c));
    }
    Eigen::SparseMatrix<cplx> e(dim, dim);
    e.setFromTriplets(entries.begin(), entries.end());
    u = e * u;
  }
  return u;
}

Matrix full_unitary(const LatticeCircuit& circuit) { return full_unitary(flatten(circuit)); }

Matrix marginal_factor(const StateVector& state, const std::vector<int>& keep, Backend backend) {
  std::vector<int> live_keep, live_bits;
  for (std::size_t b = 0; b < keep.size(); ++b) {
    const int p = position_of(state.qubits, keep[b]);
    if (p >= 0) {
      live_keep.push_back(p);
      live_bits.push_back(static_cast<int>(b));
    }
  }
  Matrix x = backend == Backend::Serial
                 ? kernels::gather_serial(state.amps, state.num_qubits(), live_keep)
                 : kernels::gather_omp(state.amps, state.num_qubits(), live_keep);
  if (live_keep.size() == keep.size()) return x;
  // Qubits absent from the state are |0>: spread the rows accordingly.
  Matrix out = Matrix::Zero(Eigen::Index{1} << keep.size(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    Eigen::Index i = 0;
    for (std::size_t b = 0; b < live_bits.size(); ++b)
      if (r >> b & 1) i |= Eigen::Index{1} << live_bits[b];
    out.row(i) = x.row(r);
  }
  return out;
}

DensityOperator reduced_state(const StateVector& state, const std::vector<int>& keep,
                              Backend backend) {
  const Matrix x = marginal_factor(state, keep, backend);
  return {keep, x * x.adjoint()};
}

DensityOperator reduced_state(const LatticeCircuit& circuit, const CutRegions& regions) {
  std::vector<int> all(circuit.num_qubits());
  for (int q = 0; q < circuit.num_qubits(); ++q) all[q] = q;
  const StateVector s = apply_circuit(zero_state(all), circuit);
  std::vector<int> keep = regions.middle;
  keep.insert(keep.end(), regions.front.begin(), regions.front.end());
  std::sort(keep.begin(), keep.end());
  return reduced_state(s, keep);
}

DensityOperator postselect_zero(const DensityOperator& op, const std::vector<int>& reg) {
  std::size_t mask = 0;
  DensityOperator out;
  std::vector<int> rest_bits;
  for (std::size_t b = 0; b < op.qubits.size(); ++b) {
    if (std::find(reg.begin(), reg.end(), op.qubits[b]) != reg.end())
      mask |= std::size_t{1} << b;
    else {
      out.qubits.push_back(op.qubits[b]);
      rest_bits.push_back(static_cast<int>(b));
    }
  }
  for (int q : reg)
    if (position_of(op.qubits, q) < 0) throw Error("post-selected qubit not in operator");
  const Eigen::Index dim = Eigen::Index{1} << rest_bits.size();
  auto spread = [&](Eigen::Index r) {
    Eigen::Index i = 0;
    for (std::size_t b = 0; b < rest_bits.size(); ++b)
      if (r >> b & 1) i |= Eigen::Index{1} << rest_bits[b];
    return i;
  };
  out.matrix.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) out.matrix(r, c) = op.matrix(spread(r), spread(c));
  return out;
}

std::vector<Eigenpair> spectral(const DensityOperator& op) {
  const Matrix& m = op.matrix;
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-10 * scale) throw Error("spectral: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  std::vector<Eigenpair> out;
  for (Eigen::Index k = m.rows() - 1; k >= 0; --k)
    out.push_back({es.eigenvalues()[k], es.eigenvectors().col(k)});
  return out;
}

StateVector postselected_state(const Synthesis& s, bool project_n, const OracleOptions& opts) {
  check_registers(s);
  const int n = s.gamma.num_qubits();
  std::vector<char> in_m(n, 0), in_n(n, 0);
  for (int q : s.M) in_m[q] = 1;
  for (int q : s.N) in_n[q] = 1;
  std::vector<int> last(n, -1), touches(n, 0);
  const auto& gs = s.gamma.gates;
  for (std::size_t k = 0; k < gs.size(); ++k)
    for (int q : gs[k].support()) {
      last[q] = static_cast<int>(k);
      ++touches[q];
    }

  LiveState st(opts.max_qubits, opts.backend);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const Gate& g = gs[k];
    if (g.is_block() && in_m[g.ancilla] && touches[g.ancilla] == 1)
      g.low_rank ? st.apply(g.qubits, *g.low_rank) : st.apply(g.qubits, g.matrix);
    else
      st.apply(g.support(), g.unitary());
    for (int q : g.support())
      if (last[q] == static_cast<int>(k) && (in_m[q] || (project_n && in_n[q]))) st.project(q);
  }
  return st.take();
}

double synthesis_value_exact(const Synthesis& s, const OracleOptions& opts) {
  const StateVector st = postselected_state(s, true, opts);
  // Remaining N qubits are untouched; any leftover live N qubit is weighted too.
  std::vector<int> zeros;
  for (int q : s.N) {
    const int p = position_of(st.qubits, q);
    if (p >= 0) zeros.push_back(p);
  }
  return s.scale * kernels::weight_with_zeros(st.amps, zeros);
}

Matrix synthesis_marginal_factor(const Synthesis& s, const std::vector<int>& keep,
                                 const OracleOptions& opts) {
  for (int q : keep)
    if (std::find(s.M.begin(), s.M.end(), q) != s.M.end())
      throw Error("marginal requested on a post-selected qubit");
  const StateVector st = postselected_state(s, false, opts);
  return std::sqrt(s.scale) * marginal_factor(st, keep, opts.backend);
}

DensityOperator synthesis_marginal(const Synthesis& s, const std::vector<int>& keep,
                                   const OracleOptions& opts) {
  const Matrix x = synthesis_marginal_factor(s, keep, opts);
  return {keep, x * x.adjoint()};
}

}  // namespace geodnc
