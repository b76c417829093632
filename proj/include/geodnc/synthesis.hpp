#pragma once

#include <optional>
#include <vector>

#include "geodnc/blockenc.hpp"
#include "geodnc/circuit.hpp"
#include "geodnc/oracle.hpp"

namespace geodnc {

enum class CutMode { ExactSpectral, PowerEncoding };

/// How the cut operators of Algorithm 2 are realized.
///   exact-spectral: Pi = eigenprojector of rho above tau, W = kappa^K Pi
///   power-encoding: Pi = (rho / kappa)^{2K},             W = rho^K
/// W is the operator a single-cut child carries next to the cut.
struct CutCalculus {
  CutMode mode = CutMode::ExactSpectral;
  double tau = 1e-6;
  int K = 2;
  int T = 2;
};

/// N qubits of a synthesis grouped by their position relative to a slice
/// along the last declared axis.
struct SliceRegisters {
  std::vector<int> back, slice, front;
};

Synthesis synthesis_of_circuit(const LatticeCircuit& circuit);

SliceRegisters slice_registers(const Synthesis& s, const Slice& slice);

/// s with the slice's N qubits moved to M.
Synthesis postselect_slice(const Synthesis& s, const Slice& slice);

/// Synthesis whose value is the slice weight tr <0_{M_i}| phi_S |0_{M_i}>.
Synthesis slice_weight_synthesis(const Synthesis& s, const Slice& slice);

/// rho_F (or rho_B): marginal of phi on the front (back) N qubits after
/// post-selecting the slice on 0.
DensityOperator cut_state(const Synthesis& s, const Slice& slice, Side side,
                          const OracleOptions& opts = {});

/// Eigen-decomposition of a cut state restricted to its numerical support,
/// values descending. Computed from a factor X (rho = X X^+) through the
/// smaller of X X^+ and X^+ X.
struct CutSpectrum {
  Eigen::VectorXd values;
  Matrix vectors;  // one column per value
  Eigen::Index dim = 1;
  double trace() const { return values.sum(); }
};

CutSpectrum spectrum_of_factor(const Matrix& x);
CutSpectrum spectrum_of(const DensityOperator& rho);
CutSpectrum cut_spectrum(const Synthesis& s, const Slice& slice, Side side,
                         const OracleOptions& opts = {});

double kappa_of(const CutSpectrum& spec, int T);
double kappa_of(const DensityOperator& rho, int T);
/// (tr rho_F^{2T})^{1/(2T)}; throws "non-heavy slice" when rho_F vanishes.
double kappa(const Synthesis& s, const Slice& slice, int T, const OracleOptions& opts = {});

/// Pi for the given cut state (see CutCalculus).
LowRankOp projector_of(const CutSpectrum& spec, double kappa, const CutCalculus& calc);
LowRankOp projector_of(const DensityOperator& rho, double kappa, const CutCalculus& calc);
LowRankOp cut_projector(const Synthesis& s, const Slice& slice, const CutCalculus& calc,
                     const OracleOptions& opts = {});
/// W for the given cut state (see CutCalculus).
LowRankOp cut_operator(const CutSpectrum& spec, double kappa, const CutCalculus& calc);
LowRankOp cut_operator(const DensityOperator& rho, double kappa, const CutCalculus& calc);

/// Appends a block-encoded gate on `qubits` whose fresh ancilla joins M.
Synthesis append_block(const Synthesis& s, const std::vector<int>& qubits, const Matrix& block,
                       const std::string& name);
Synthesis append_block(const Synthesis& s, const std::vector<int>& qubits, const LowRankOp& block,
                       const std::string& name);

/// Everything Algorithm 2 needs about one cut, computed once per slice.
struct CutData {
  Slice slice;
  SliceRegisters regs;
  double kappa = 1.0;
  LowRankOp w_front;  // W built from rho_F
  LowRankOp w_back;   // W built from rho_B
};

CutData prepare_cut(const Synthesis& s, const Slice& slice, const CutCalculus& calc,
                    const OracleOptions& opts = {});
/// S_{L,i}: output = back side of the cut, W_B next to it.
Synthesis left_child(const Synthesis& s, const CutData& cut);
/// S_{i,R}: output = front side of the cut, W_F next to it.
Synthesis right_child(const Synthesis& s, const CutData& cut);
/// S_{i,j}: output = N strictly between the two slices, W_B of i and W_F of j.
Synthesis middle_child(const Synthesis& s, const CutData& i, const CutData& j);

/// Children of a cut. Without j: left = S_{L,i}, right = S_{i,R}. With j:
/// left = S_{L,i}, middle = S_{i,j}, right = S_{j,R}.
struct SplitResult {
  Synthesis left;
  std::optional<Synthesis> middle;
  Synthesis right;
  double kappa_i = 1.0;
  std::optional<double> kappa_j;
};

SplitResult split_at_cuts(const Synthesis& s, const Slice& i, const std::optional<Slice>& j,
                          const CutCalculus& calc, const OracleOptions& opts = {});

/// One factor of an Eq. (4) operand: inserts Pi_{F_k} on the N qubits right of
/// slice k and post-selects M_k.
Synthesis insert_cut_projector(const Synthesis& s, const Slice& k, const CutCalculus& calc,
                               const OracleOptions& opts = {});

/// Absorbs the last declared axis into the qudit structure. Gamma, L, M, N are
/// untouched; only the declared geometry changes.
Synthesis dimension_reduce(const Synthesis& s);

}  // namespace geodnc
