#pragma once

#include <string>

#include "json.hpp"

#include "geodnc/lattice.hpp"

namespace geodnc {

/// Circuit files: {"dims": [..], "depth": d, "layers": [[{"gate": name | matrix,
/// "qubits": [[coords], ..]}, ..], ..]}. Matrices are row-major lists of
/// [re, im] pairs, either flat or nested by row.
LatticeCircuit circuit_from_json(const nlohmann::json& j);
nlohmann::json circuit_to_json(const LatticeCircuit& c);
LatticeCircuit load_circuit(const std::string& path);
void save_circuit(const LatticeCircuit& c, const std::string& path);

}  // namespace geodnc
