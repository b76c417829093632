#pragma once

#include <vector>

#include "geodnc/circuit.hpp"
#include "geodnc/lattice.hpp"
#include "geodnc/oracle.hpp"

namespace geodnc {

enum class Side { F, B };

/// What an encoding claims to encode: sigma_{M u F} (power == 0), or rho^k on
/// the chosen side (rho_F = <0_M| sigma_{M u F} |0_M>, rho_B likewise).
struct EncodingTarget {
  int power = 0;
  Side side = Side::F;
};

struct BlockEncoding {
  Circuit circuit;
  std::vector<int> data;     // block index bit b belongs to data[b]
  std::vector<int> ancilla;  // post-selected on |0>
  double alpha = 1.0;
  double epsilon_claim = 0.0;
  EncodingTarget target;
  LatticeCircuit source;
  CutRegions regions;
  /// Lattice dims of the embedding once interleaved; empty before.
  std::vector<int> lattice_dims;
};

/// Lemma 3: (C^+ (x) I)(I_B (x) SWAP_{MF, M'F'})(C (x) I) with ancilla B u M' u F'.
BlockEncoding build_sigma_encoding(const LatticeCircuit& circuit, const CutRegions& regions);

/// Lemma 4: the Lemma 3 encoding with M moved from the data to the ancilla.
BlockEncoding build_rho_encoding(const LatticeCircuit& circuit, const CutRegions& regions);

/// Lemmas 5 and 6: product of k Lemma 3 factors with per-copy registers,
/// the i = 1 factor acting first.
BlockEncoding build_rho_power_encoding(const LatticeCircuit& circuit, const CutRegions& regions,
                                       int k, Side side);

/// Places every register copy on a lattice with two extra stacking axes so
/// that all gates are nearest-neighbour, and re-layers the gates ASAP.
BlockEncoding interleave(const BlockEncoding& enc);

/// (<0_anc| (x) I) U (|0_anc> (x) I), evaluated column by column.
Matrix encoded_block(const BlockEncoding& enc, const OracleOptions& opts = {});
/// The claimed operator, computed by the oracle from the source circuit.
Matrix target_operator(const BlockEncoding& enc);
/// Spectral-norm distance between target and alpha * block.
double verify_encoding(const BlockEncoding& enc, const OracleOptions& opts = {});

/// Gate indices grouped into layers by as-soon-as-possible scheduling.
std::vector<std::vector<int>> asap_layers(const Circuit& circuit);
int circuit_depth(const Circuit& circuit);
/// Largest L-infinity distance between the sites of a multi-qubit gate.
int max_gate_distance(const Circuit& circuit);
/// Lattice form of an interleaved encoding (idle sites included).
LatticeCircuit to_lattice(const BlockEncoding& enc);

}  // namespace geodnc
