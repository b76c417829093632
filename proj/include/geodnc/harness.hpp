#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geodnc/dnc.hpp"
#include "geodnc/errmodel.hpp"
#include "geodnc/lattice.hpp"

namespace geodnc {

inline constexpr int kSchemaVersion = 1;

/// Seeded brickwork generator. Gate sets:
///   "haar": Haar-random two-qubit unitaries, Haar single-qubit gates on
///           unpaired sites
///   "weak": exp(i * strength * H) with H a random normalized Hermitian
///           two-qubit operator; stays close to the identity
struct GeneratorSpec {
  std::vector<int> dims;
  int depth = 1;
  std::string gate_set = "haar";
  std::uint64_t seed = 0;
  double strength = 0.3;
};

LatticeCircuit generate_circuit(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneratorSpec& g);

/// FNV-1a over the canonical JSON form.
std::uint64_t circuit_fingerprint(const LatticeCircuit& c);

/// Prepends unit-length axes until the circuit is D-dimensional.
LatticeCircuit embed_dimension(const LatticeCircuit& c, int D);

struct CircuitSource {
  std::string name;
  std::optional<std::string> file;
  std::optional<GeneratorSpec> generator;
};

struct ExperimentConfig {
  std::vector<CircuitSource> circuits;
  std::vector<double> deltas{0.1};
  Profile profile = Profile::Desk;
  CutMode calculus = CutMode::ExactSpectral;
  std::string base = "exact";
  std::optional<int> dim;
  ScheduleOverrides overrides;
  int oracle_cap = 22;
  std::optional<std::string> json_out, csv_out, trace_dir;
};

/// Relative file paths are resolved against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
ScheduleOverrides overrides_from_json(const nlohmann::json& j);

struct ReportRecord {
  int index = 0;
  std::string name;
  int n = 0;
  std::vector<int> dims;
  int depth = 0;
  double delta = 0;
  double oracle = 0;
  double estimate = 0;
  double error = 0;
  bool within_delta = false;
  double predicted_bound = 0;
  ParameterSchedule schedule;
  TraceSummary trace;
  double wall_time_s = 0;
  /// Set when the estimator threw; estimate and error are NaN then.
  std::string failure;
};

struct Report {
  std::vector<ReportRecord> records;
  bool all_within_delta() const;
};

Report run_experiment(const ExperimentConfig& config);
nlohmann::json to_json(const Report& r);
std::string to_csv(const Report& r);
/// Checks that every stored error equals |oracle - estimate|.
bool report_consistent(const nlohmann::json& report);

/// Default base solvers by name ("exact").
BaseSolver base_by_name(const std::string& name, const OracleOptions& opts);
CutMode parse_calculus(const std::string& name);
std::string to_string(CutMode m);

}  // namespace geodnc
