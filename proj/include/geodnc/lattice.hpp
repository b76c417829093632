#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geodnc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Coord = std::vector<int>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hermitian operator V diag(w) V^+, V with orthonormal columns. Used for
/// cut operators, whose rank is far below their dimension.
struct LowRankOp {
  Matrix vectors;
  Eigen::VectorXd weights;

  Eigen::Index dim() const { return vectors.rows(); }
  Matrix dense() const;
  /// Spectral norm, max |w|.
  double norm() const;
  LowRankOp scaled(double f) const;
};

/// A gate on an ordered qubit list. Matrix index bit j corresponds to qubits[j].
///
/// When `ancilla >= 0` the gate is a block-encoded contraction: `matrix` holds
/// the block A, and the physical gate is the unitary dilation
/// [[A, sqrt(I - AA^+)], [sqrt(I - A^+A), -A^+]] with the ancilla as the
/// most significant bit. Post-selecting the ancilla on |0> applies A.
/// A block gate may instead carry A in factored form (`low_rank`), in which
/// case `matrix` is empty.
struct Gate {
  std::vector<int> qubits;
  Matrix matrix;
  int ancilla = -1;
  std::string name;
  std::shared_ptr<const LowRankOp> low_rank;

  bool is_block() const { return ancilla >= 0; }
  /// A for block gates (dense), the matrix otherwise.
  Matrix block() const;
  std::vector<int> support() const;
  Matrix unitary() const;
};

Matrix unitary_dilation(const Matrix& a);

namespace gates {
Matrix H();
Matrix X();
Matrix Z();
Matrix T();
Matrix S();
Matrix CZ();
Matrix CNOT();  // control = qubits[0], target = qubits[1]
Matrix SWAP();
Matrix I(int nqubits);
/// Looks up a gate by name; returns an empty matrix if unknown.
Matrix by_name(const std::string& name);
}  // namespace gates

/// Layered gate list on a rectangular D-dimensional qubit lattice.
/// Qubits are indexed row-major (last coordinate fastest).
struct LatticeCircuit {
  std::vector<int> dims;
  int depth = 0;
  std::vector<std::vector<Gate>> layers;

  int dimension() const { return static_cast<int>(dims.size()); }
  int num_qubits() const;
  Coord coord(int q) const;
  int index(const Coord& c) const;
  bool contains(const Coord& c) const;
  std::size_t gate_count() const;
};

LatticeCircuit identity_circuit(std::vector<int> dims, int depth = 1);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate(const LatticeCircuit& circuit);

int linf_distance(const Coord& a, const Coord& b);

enum class ConeDirection { Forward, Backward };

/// Qubits reachable from `seed` through gate supports, sweeping the layers
/// in the given direction. The result is sorted and contains the seed.
std::vector<int> light_cone(const LatticeCircuit& circuit, const std::vector<int>& seed,
                            ConeDirection direction);

struct Slice {
  int axis = 0;
  int lo = 0;
  int hi = 0;
  int width() const { return hi - lo; }
  bool contains(int x) const { return x >= lo && x < hi; }
  friend bool operator==(const Slice&, const Slice&) = default;
};

/// Back / middle / front partition of the lattice induced by a slice.
struct CutRegions {
  Slice slice;
  std::vector<int> back;
  std::vector<int> middle;
  std::vector<int> front;
};

CutRegions cut_regions(const LatticeCircuit& circuit, const Slice& slice);

/// Tiles an axis of the given length with slices of `slice_width`, leaving
/// `max_gap` sites (edge to edge) between neighbours, starting at 0.
std::vector<Slice> enumerate_slices(int axis_length, int axis, int depth, int slice_width,
                                    int max_gap, std::vector<std::string>* warnings = nullptr);
std::vector<Slice> enumerate_slices(const LatticeCircuit& circuit, int axis, int slice_width,
                                    int max_gap, std::vector<std::string>* warnings = nullptr);

}  // namespace geodnc
