#pragma once

#include <vector>

#include "geodnc/circuit.hpp"
#include "geodnc/lattice.hpp"

namespace geodnc {

enum class Backend { Serial, Parallel };

/// Amplitudes over an explicit qubit list; index bit p belongs to qubits[p].
struct StateVector {
  std::vector<int> qubits;
  Vector amps;

  int num_qubits() const { return static_cast<int>(qubits.size()); }
};

/// Possibly unnormalized operator; index bit p belongs to qubits[p].
struct DensityOperator {
  std::vector<int> qubits;
  Matrix matrix;

  double trace() const { return matrix.trace().real(); }
};

struct Eigenpair {
  double value;
  Vector vector;
};

struct OracleOptions {
  int max_qubits = 22;  // peak simultaneously live qubits
  Backend backend = Backend::Parallel;
};

StateVector zero_state(std::vector<int> qubits);

/// Applies the gate's physical unitary (the dilation for block gates).
void apply_gate(StateVector& state, const Gate& gate, Backend backend = Backend::Parallel);
StateVector apply_circuit(StateVector state, const LatticeCircuit& circuit,
                          Backend backend = Backend::Parallel);

/// |<x|C|0^n>|^2 with x[q] the bit of qubit q.
double output_probability(const LatticeCircuit& circuit, const std::vector<int>& x);

/// Dense unitary assembled gate by gate from Kronecker embeddings. This path
/// shares no code with the statevector kernels.
Matrix full_unitary(const Circuit& circuit);
Matrix full_unitary(const LatticeCircuit& circuit);

/// Factor X with X X^+ = reduced_state(state, keep). Rows follow `keep`.
Matrix marginal_factor(const StateVector& state, const std::vector<int>& keep,
                       Backend backend = Backend::Parallel);

/// Tr over everything outside `keep`; qubits of `keep` absent from the state
/// are taken to be |0>. Result bit b belongs to keep[b].
DensityOperator reduced_state(const StateVector& state, const std::vector<int>& keep,
                              Backend backend = Backend::Parallel);
/// sigma_{M u F} = Tr_B C|0><0|C^+ for the given cut.
DensityOperator reduced_state(const LatticeCircuit& circuit, const CutRegions& regions);

DensityOperator postselect_zero(const DensityOperator& op, const std::vector<int>& reg);

/// Eigenpairs in descending eigenvalue order. Throws on non-Hermitian input.
std::vector<Eigenpair> spectral(const DensityOperator& op);

/// Evolves |0> through gamma, projecting each M qubit onto |0> right after its
/// last gate (and each N qubit too when `project_n`). Qubits never touched stay
/// implicit. Block gates whose ancilla is an otherwise untouched M qubit are
/// applied as their block directly. Throws "oracle capacity" errors.
StateVector postselected_state(const Synthesis& s, bool project_n, const OracleOptions& opts = {});

/// <0_N| phi_S |0_N> computed densely.
double synthesis_value_exact(const Synthesis& s, const OracleOptions& opts = {});

/// Factor X of synthesis_marginal: marginal = X X^+.
Matrix synthesis_marginal_factor(const Synthesis& s, const std::vector<int>& keep,
                                 const OracleOptions& opts = {});

/// Tr_{rest} <0_M| Gamma |0><0| Gamma^+ |0_M> restricted to `keep` (a subset of L u N).
DensityOperator synthesis_marginal(const Synthesis& s, const std::vector<int>& keep,
                                   const OracleOptions& opts = {});

}  // namespace geodnc
