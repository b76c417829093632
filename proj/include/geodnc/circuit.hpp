#pragma once

#include <string>
#include <vector>

#include "geodnc/lattice.hpp"

namespace geodnc {

/// Where a qubit of a generic circuit lives. `site` has one entry per declared
/// lattice dimension; coordinates absorbed by dimension reduction move to
/// `absorbed`. Copies of a lattice site (register copies, cut ancillas) share
/// the site and differ in `copy`.
struct QubitLabel {
  Coord site;
  Coord absorbed;
  int copy = 0;
  std::string tag;
};

/// Ordered gate list over labelled qubits. Unlike LatticeCircuit it carries no
/// layer structure and may contain block-encoded gates.
struct Circuit {
  std::vector<QubitLabel> labels;
  std::vector<Gate> gates;

  int num_qubits() const { return static_cast<int>(labels.size()); }
  int add_qubit(QubitLabel label);
};

/// Gates in layer order; qubit q keeps index q and its lattice coordinate.
Circuit flatten(const LatticeCircuit& circuit);

/// Circuit Gamma with registers L (traced), M (post-selected on 0) and N
/// (output). The value of a synthesis is scale * <0_N| phi |0_N>.
struct Synthesis {
  Circuit gamma;
  std::vector<int> L, M, N;  // sorted, disjoint, covering gamma's qubits
  std::vector<int> dims;     // declared lattice widths, one per active dimension
  std::vector<int> thickness;  // widths absorbed by dimension reduction
  int depth = 0;               // depth of the source lattice circuit
  double scale = 1.0;          // cut operators on empty registers act as scalars

  int dimension() const { return static_cast<int>(dims.size()); }
  /// [min, max + 1) of N's coordinates along `axis`; {0, 0} when N is empty.
  std::pair<int, int> extent(int axis) const;
  /// Extent length of N along the last declared axis.
  int width() const;
};

/// Throws Error when L, M, N do not partition the qubits.
void check_registers(const Synthesis& s);

}  // namespace geodnc
