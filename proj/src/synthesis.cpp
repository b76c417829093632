#include "geodnc/synthesis.hpp"

#include <algorithm>
#include <cmath>

namespace geodnc {

namespace {

// Eigenvalues at or below this are treated as outside the support.
constexpr double kSupportFloor = 1e-14;

std::vector<int> merged(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Synthesis synthesis_of_circuit(const LatticeCircuit& circuit) {
  Synthesis s;
  s.gamma = flatten(circuit);
  s.N.resize(circuit.num_qubits());
  for (int q = 0; q < circuit.num_qubits(); ++q) s.N[q] = q;
  s.dims = circuit.dims;
  s.depth = circuit.depth;
  return s;
}

SliceRegisters slice_registers(const Synthesis& s, const Slice& slice) {
  if (slice.axis != s.dimension() - 1) throw Error("slice must lie along the last declared axis");
  SliceRegisters r;
  for (int q : s.N) {
    const int x = s.gamma.labels[q].site.at(slice.axis);
    if (x < slice.lo)
      r.back.push_back(q);
    else if (x >= slice.hi)
      r.front.push_back(q);
    else
      r.slice.push_back(q);
  }
  return r;
}

Synthesis postselect_slice(const Synthesis& s, const Slice& slice) {
  const SliceRegisters r = slice_registers(s, slice);
  Synthesis out = s;
  out.M = merged(s.M, r.slice);
  out.N = minus(s.N, r.slice);
  return out;
}

Synthesis slice_weight_synthesis(const Synthesis& s, const Slice& slice) {
  const SliceRegisters r = slice_registers(s, slice);
  Synthesis out = s;
  out.L = merged(merged(s.L, r.back), r.front);
  out.N = r.slice;
  return out;
}

DensityOperator cut_state(const Synthesis& s, const Slice& slice, Side side,
                          const OracleOptions& opts) {
  const SliceRegisters r = slice_registers(s, slice);
  return synthesis_marginal(postselect_slice(s, slice), side == Side::F ? r.front : r.back, opts);
}

CutSpectrum spectrum_of_factor(const Matrix& x) {
  CutSpectrum spec;
  spec.dim = x.rows();
  const bool wide = x.cols() >= x.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(wide ? Matrix(x * x.adjoint()) : Matrix(x.adjoint() * x));
  const Eigen::Index m = es.eigenvalues().size();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = m - 1; k >= 0; --k)
    if (es.eigenvalues()[k] > kSupportFloor) keep.push_back(k);
  spec.values.resize(static_cast<Eigen::Index>(keep.size()));
  spec.vectors.resize(x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double v = es.eigenvalues()[keep[c]];
    spec.values[c] = v;
    if (wide)
      spec.vectors.col(c) = es.eigenvectors().col(keep[c]);
    else
      spec.vectors.col(c) = x * es.eigenvectors().col(keep[c]) / std::sqrt(v);
  }
  return spec;
}

CutSpectrum spectrum_of(const DensityOperator& rho) {
  CutSpectrum spec;
  spec.dim = rho.matrix.rows();
  std::vector<Eigenpair> kept;
  for (auto& e : spectral(rho))
    if (e.value > kSupportFloor) kept.push_back(std::move(e));
  spec.values.resize(static_cast<Eigen::Index>(kept.size()));
  spec.vectors.resize(spec.dim, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    spec.values[c] = kept[c].value;
    spec.vectors.col(c) = kept[c].vector;
  }
  return spec;
}

CutSpectrum cut_spectrum(const Synthesis& s, const Slice& slice, Side side,
                         const OracleOptions& opts) {
  const SliceRegisters r = slice_registers(s, slice);
  return spectrum_of_factor(
      synthesis_marginal_factor(postselect_slice(s, slice), side == Side::F ? r.front : r.back, opts));
}

double kappa_of(const CutSpectrum& spec, int T) {
  if (T < 1) throw Error("T must be positive");
  if (spec.values.size() == 0) throw Error("non-heavy slice: cut state has zero trace");
  const double top = spec.values[0];
  // Scale by the top eigenvalue so the 2T-th powers do not underflow.
  double acc = 0;
  for (double v : spec.values) acc += std::pow(v / top, 2 * T);
  return std::min(1.0, top * std::pow(acc, 1.0 / (2 * T)));
}

double kappa_of(const DensityOperator& rho, int T) { return kappa_of(spectrum_of(rho), T); }

double kappa(const Synthesis& s, const Slice& slice, int T, const OracleOptions& opts) {
  return kappa_of(cut_spectrum(s, slice, Side::F, opts), T);
}

LowRankOp projector_of(const CutSpectrum& spec, double kappa, const CutCalculus& calc) {
  Eigen::VectorXd w(spec.values.size());
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w[k] = calc.mode == CutMode::PowerEncoding ? std::pow(spec.values[k] / kappa, 2 * calc.K)
                                               : (spec.values[k] > calc.tau ? 1.0 : 0.0);
  return {spec.vectors, w};
}

LowRankOp projector_of(const DensityOperator& rho, double kappa, const CutCalculus& calc) {
  return projector_of(spectrum_of(rho), kappa, calc);
}

LowRankOp cut_projector(const Synthesis& s, const Slice& slice, const CutCalculus& calc,
                        const OracleOptions& opts) {
  const CutSpectrum spec = cut_spectrum(s, slice, Side::F, opts);
  const double k = calc.mode == CutMode::PowerEncoding ? kappa_of(spec, calc.T) : 1.0;
  return projector_of(spec, k, calc);
}

LowRankOp cut_operator(const CutSpectrum& spec, double kappa, const CutCalculus& calc) {
  if (calc.mode == CutMode::ExactSpectral)
    return projector_of(spec, kappa, calc).scaled(std::pow(kappa, calc.K));
  Eigen::VectorXd w(spec.values.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = std::pow(spec.values[k], calc.K);
  return {spec.vectors, w};
}

LowRankOp cut_operator(const DensityOperator& rho, double kappa, const CutCalculus& calc) {
  return cut_operator(spectrum_of(rho), kappa, calc);
}

namespace {

// Adds the gate built by `make(ancilla)` with a fresh cut ancilla in M.
template <class Make>
Synthesis append_cut_gate(const Synthesis& s, const std::vector<int>& qubits, Make make) {
  Synthesis out = s;
  QubitLabel anc = s.gamma.labels[qubits.front()];
  anc.copy = 0;
  for (const auto& l : s.gamma.labels) anc.copy = std::max(anc.copy, l.copy + 1);
  anc.tag = "cut";
  const int ancilla = out.gamma.add_qubit(anc);
  out.gamma.gates.push_back(make(ancilla));
  out.M.push_back(ancilla);
  return out;
}

}  // namespace

Synthesis append_block(const Synthesis& s, const std::vector<int>& qubits, const Matrix& block,
                       const std::string& name) {
  if (qubits.empty()) {
    if (block.size() != 1) throw Error("cut operator on an empty register must be a scalar");
    Synthesis out = s;
    out.scale *= std::norm(block(0, 0));
    return out;
  }
  // A contraction beyond rounding would make the dilation ill-defined.
  Eigen::JacobiSVD<Matrix> svd(block);
  const double norm = svd.singularValues()[0];
  if (norm > 1 + 1e-9) throw Error("cut operator is not a contraction");
  Matrix a = norm > 1 ? Matrix(block / norm) : block;
  return append_cut_gate(s, qubits, [&](int anc) { return Gate{qubits, std::move(a), anc, name}; });
}

Synthesis append_block(const Synthesis& s, const std::vector<int>& qubits, const LowRankOp& block,
                       const std::string& name) {
  if (block.dim() != (Eigen::Index{1} << qubits.size()))
    throw Error("cut operator dimension does not match its register");
  if (qubits.empty()) return append_block(s, qubits, block.dense(), name);
  const double norm = block.norm();
  if (norm > 1 + 1e-9) throw Error("cut operator is not a contraction");
  auto op = std::make_shared<const LowRankOp>(norm > 1 ? block.scaled(1 / norm) : block);
  return append_cut_gate(s, qubits, [&](int anc) {
    Gate g{qubits, Matrix(), anc, name};
    g.low_rank = op;
    return g;
  });
}

CutData prepare_cut(const Synthesis& s, const Slice& slice, const CutCalculus& calc,
                    const OracleOptions& opts) {
  CutData c;
  c.slice = slice;
  c.regs = slice_registers(s, slice);
  const CutSpectrum rho_f = cut_spectrum(s, slice, Side::F, opts);
  const CutSpectrum rho_b = cut_spectrum(s, slice, Side::B, opts);
  c.kappa = kappa_of(rho_f, calc.T);
  c.w_front = cut_operator(rho_f, c.kappa, calc);
  c.w_back = cut_operator(rho_b, c.kappa, calc);
  return c;
}

Synthesis left_child(const Synthesis& s, const CutData& cut) {
  Synthesis out = append_block(postselect_slice(s, cut.slice), cut.regs.back, cut.w_back, "W_B");
  out.L = merged(out.L, cut.regs.front);
  out.N = cut.regs.back;
  return out;
}

Synthesis right_child(const Synthesis& s, const CutData& cut) {
  Synthesis out = append_block(postselect_slice(s, cut.slice), cut.regs.front, cut.w_front, "W_F");
  out.L = merged(out.L, cut.regs.back);
  out.N = cut.regs.front;
  return out;
}

Synthesis middle_child(const Synthesis& s, const CutData& i, const CutData& j) {
  if (j.slice.lo < i.slice.hi) throw Error("cut slices overlap or are out of order");
  Synthesis mid = postselect_slice(postselect_slice(s, i.slice), j.slice);
  mid = append_block(mid, i.regs.back, i.w_back, "W_B");
  mid = append_block(mid, j.regs.front, j.w_front, "W_F");
  mid.L = merged(merged(mid.L, i.regs.back), j.regs.front);
  mid.N = minus(minus(mid.N, i.regs.back), j.regs.front);
  return mid;
}

SplitResult split_at_cuts(const Synthesis& s, const Slice& i, const std::optional<Slice>& j,
                          const CutCalculus& calc, const OracleOptions& opts) {
  if (j && j->lo < i.hi) throw Error("cut slices overlap or are out of order");
  const auto [nlo, nhi] = s.extent(s.dimension() - 1);
  auto inside = [&](const Slice& sl) { return sl.lo >= nlo && sl.hi <= nhi; };
  if (!inside(i) || (j && !inside(*j))) throw Error("cut slice not inside the synthesis");
  const CutData ci = prepare_cut(s, i, calc, opts);
  SplitResult out;
  out.kappa_i = ci.kappa;
  out.left = left_child(s, ci);
  if (!j) {
    out.right = right_child(s, ci);
    return out;
  }
  const CutData cj = prepare_cut(s, *j, calc, opts);
  out.kappa_j = cj.kappa;
  out.middle = middle_child(s, ci, cj);
  out.right = right_child(s, cj);
  return out;
}

Synthesis insert_cut_projector(const Synthesis& s, const Slice& k, const CutCalculus& calc,
                               const OracleOptions& opts) {
  const SliceRegisters r = slice_registers(s, k);
  const LowRankOp pi = cut_projector(s, k, calc, opts);
  Synthesis out = postselect_slice(s, k);
  return append_block(out, r.front, pi, "Pi_F");
}

Synthesis dimension_reduce(const Synthesis& s) {
  if (s.dimension() < 1) throw Error("nothing to reduce");
  Synthesis out = s;
  out.thickness.push_back(s.N.empty() ? s.dims.back() : s.width());
  out.dims.pop_back();
  for (auto& l : out.gamma.labels) {
    l.absorbed.insert(l.absorbed.begin(), l.site.back());
    l.site.pop_back();
  }
  return out;
}

}  // namespace geodnc
