#include "geodnc/circuit.hpp"

#include <algorithm>

namespace geodnc {

int Circuit::add_qubit(QubitLabel label) {
  labels.push_back(std::move(label));
  return num_qubits() - 1;
}

Circuit flatten(const LatticeCircuit& circuit) {
  Circuit c;
  c.labels.reserve(circuit.num_qubits());
  for (int q = 0; q < circuit.num_qubits(); ++q) c.labels.push_back({circuit.coord(q), {}, 0, ""});
  for (const auto& layer : circuit.layers)
    for (const Gate& g : layer) c.gates.push_back(g);
  return c;
}

std::pair<int, int> Synthesis::extent(int axis) const {
  if (N.empty()) return {0, 0};
  int lo = gamma.labels[N.front()].site.at(axis), hi = lo;
  for (int q : N) {
    const int x = gamma.labels[q].site.at(axis);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi + 1};
}

int Synthesis::width() const {
  if (dims.empty()) return 0;
  const auto [lo, hi] = extent(dimension() - 1);
  return hi - lo;
}

void check_registers(const Synthesis& s) {
  std::vector<int> seen(s.gamma.num_qubits(), 0);
  for (const auto* reg : {&s.L, &s.M, &s.N})
    for (int q : *reg) {
      if (q < 0 || q >= s.gamma.num_qubits()) throw Error("register qubit out of range");
      if (seen[q]++) throw Error("registers L, M, N overlap");
    }
  for (int v : seen)
    if (!v) throw Error("registers L, M, N do not cover all qubits");
}

}  // namespace geodnc
