#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geodnc/blockenc.hpp"
#include "geodnc/circuit_io.hpp"
#include "geodnc/dnc.hpp"
#include "geodnc/errmodel.hpp"
#include "geodnc/harness.hpp"
#include "geodnc/oracle.hpp"

using namespace geodnc;
using nlohmann::json;

namespace {

struct ScheduleFlags {
  std::optional<int> h, Delta, K, T, eta, w0, slice_width, max_gap, z_width;
  std::optional<double> eps_factor;

  void attach(CLI::App* app) {
    app->add_option("--hn", h, "h(n) override");
    app->add_option("--Delta", Delta, "cuts per level");
    app->add_option("--K", K, "cut-operator power K");
    app->add_option("--T", T, "kappa exponent T");
    app->add_option("--eta", eta, "recursion budget override");
    app->add_option("--w0", w0, "stopping width");
    app->add_option("--slice-width", slice_width, "slice width");
    app->add_option("--max-gap", max_gap, "largest gap between adjacent slices");
    app->add_option("--z-width", z_width, "width of region Z");
    app->add_option("--eps-factor", eps_factor, "desk profile: eps = factor * delta");
  }
  ScheduleOverrides get() const {
    return {h, Delta, K, T, eta, w0, slice_width, max_gap, z_width, eps_factor};
  }
};

Slice parse_cut(const std::string& s) {
  std::stringstream ss(s);
  std::string a, lo, hi;
  if (!std::getline(ss, a, ':') || !std::getline(ss, lo, ':') || !std::getline(ss, hi))
    throw Error("cut must look like axis:lo:hi");
  return {std::stoi(a), std::stoi(lo), std::stoi(hi)};
}

int cmd_validate(const std::string& file) {
  const ValidationReport r = validate(load_circuit(file));
  if (r.ok) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
  return 1;
}

int cmd_simulate(const std::string& file, double delta, const std::string& profile,
                 std::optional<int> dim, const std::string& base, const std::string& calculus,
                 const std::string& trace_path, int cap, const ScheduleFlags& flags) {
  LatticeCircuit c = load_circuit(file);
  if (dim) c = embed_dimension(c, *dim);
  OracleOptions oracle;
  oracle.max_qubits = cap;
  const ParameterSchedule sched =
      schedule(c.num_qubits(), c.depth, c.dimension(), delta, parse_profile(profile), flags.get());
  CutCalculus calc;
  calc.mode = parse_calculus(calculus);
  const EstimateResult r = estimate(c, sched, base_by_name(base, oracle), calc, oracle);
  json out = {{"schema_version", kSchemaVersion},
              {"estimate", r.value},
              {"delta", delta},
              {"schedule", to_json(sched)},
              {"trace_summary", to_json(summarize(r.trace))}};
  int rc = 0;
  try {
    const double exact = synthesis_value_exact(synthesis_of_circuit(c), oracle);
    out["oracle"] = exact;
    out["error"] = std::abs(exact - r.value);
    out["within_delta"] = std::abs(exact - r.value) <= delta;
    if (std::abs(exact - r.value) > delta) rc = 1;
  } catch (const Error& e) {
    out["oracle"] = nullptr;
    out["oracle_note"] = e.what();
  }
  if (!trace_path.empty()) {
    std::ofstream t(trace_path);
    if (!t) throw Error("cannot write trace " + trace_path);
    t << json{{"schema_version", kSchemaVersion}, {"trace", to_json(r.trace)}}.dump(1) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return rc;
}

int cmd_verify(const std::string& file, const std::string& cut, int k) {
  const LatticeCircuit c = load_circuit(file);
  const CutRegions regions = cut_regions(c, parse_cut(cut));
  const int d = c.depth;
  auto row = [&](const std::string& label, const BlockEncoding& enc, int bound) {
    const BlockEncoding il = interleave(enc);
    const double dev = verify_encoding(enc);
    const double dev_il = verify_encoding(il);
    const int depth = circuit_depth(il.circuit);
    const int dist = max_gate_distance(il.circuit);
    std::cout << label << ": deviation " << dev << ", interleaved deviation " << dev_il
              << ", ancillas " << enc.ancilla.size() << ", interleaved depth " << depth
              << " (bound " << bound << "), max gate distance " << dist << "\n";
    return depth <= bound && dist <= 1;
  };
  bool ok = row("lemma3 sigma", build_sigma_encoding(c, regions), 3 * d);
  ok &= row("lemma4 rho_F", build_rho_encoding(c, regions), 3 * d);
  for (int p = 1; p <= k; ++p) {
    ok &= row("lemma5 rho_F^" + std::to_string(p), build_rho_power_encoding(c, regions, p, Side::F),
              (2 * p + 1) * d);
    ok &= row("lemma6 rho_B^" + std::to_string(p), build_rho_power_encoding(c, regions, p, Side::B),
              (2 * p + 1) * d);
  }
  return ok ? 0 : 1;
}

int cmd_experiment(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  const Report rep = run_experiment(cfg);
  const std::string csv = to_csv(rep);
  if (cfg.json_out) {
    std::ofstream out(*cfg.json_out);
    if (!out) throw Error("cannot write " + *cfg.json_out);
    out << to_json(rep).dump(2) << "\n";
  }
  if (cfg.csv_out) {
    std::ofstream out(*cfg.csv_out);
    if (!out) throw Error("cannot write " + *cfg.csv_out);
    out << csv;
  }
  std::cout << csv;
  return rep.all_within_delta() ? 0 : 1;
}

int cmd_predict(int n, int d, int D, double delta, std::optional<int> w, const std::string& profile,
                const ScheduleFlags& flags) {
  const ParameterSchedule sched = schedule(n, d, D, delta, parse_profile(profile), flags.get());
  const ErrorModel model = model_from_schedule(sched);
  const int width = w.value_or(std::max(1, static_cast<int>(std::lround(std::pow(n, 1.0 / D)))));
  int l = n;
  for (int i = 0; i < D - 1; ++i) l = (l + width - 1) / width;
  json out = {{"schema_version", kSchemaVersion},
              {"schedule", to_json(sched)},
              {"e", model.e()},
              {"g", model.g()},
              {"script_bounds", to_json(script_bounds(model, sched.eps))},
              {"predicted_error", predicted_error(model, sched.eps)},
              {"lattice", {{"long_axis", l}, {"width", width}}}};
  try {
    const RuntimePrediction rt = predicted_runtime(l, D, d, width, delta, sched);
    out["predicted_calls"] = to_json(rt.calls);
    out["predicted_cost"] = rt.cost;
    out["log2_envelope"] = rt.log2_envelope;
  } catch (const Error& e) {
    out["predicted_calls"] = nullptr;
    out["runtime_note"] = e.what();
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-conquer estimator for geometrically-local circuits"};
  app.require_subcommand(1);

  std::string file;
  auto* v = app.add_subcommand("validate", "check lattice, locality and layer invariants");
  v->add_option("file", file, "circuit JSON")->required();

  double delta = 0.1;
  std::string profile = "desk", base = "exact", calculus = "exact-spectral", trace;
  std::optional<int> dim;
  int cap = 22;
  ScheduleFlags flags;
  auto* s = app.add_subcommand("simulate", "estimate |<0|C|0>|^2 and compare with the oracle");
  s->add_option("file", file, "circuit JSON")->required();
  s->add_option("--delta", delta, "additive error target");
  s->add_option("--profile", profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  s->add_option("--dim", dim, "embed the circuit in D dimensions first");
  s->add_option("--base", base, "base-case solver")->check(CLI::IsMember({"exact"}));
  s->add_option("--calculus", calculus, "exact-spectral or power-encoding");
  s->add_option("--trace", trace, "write the recursion trace here");
  s->add_option("--oracle-cap", cap, "largest number of live qubits for dense evaluation");
  flags.attach(s);

  std::string cut;
  int k = 1;
  auto* ve = app.add_subcommand("verify-encodings", "check the block-encoding constructions");
  ve->add_option("file", file, "circuit JSON")->required();
  ve->add_option("--cut", cut, "slice as axis:lo:hi")->required();
  ve->add_option("--k", k, "largest power to check")->check(CLI::Range(1, 8));

  std::string config;
  auto* ex = app.add_subcommand("experiment", "run a configured experiment and write reports");
  ex->add_option("config", config, "experiment JSON")->required();

  int n = 16, d = 1, D = 3;
  std::optional<int> w;
  ScheduleFlags pflags;
  auto* pr = app.add_subcommand("predict", "print the schedule, error bound and predicted cost");
  pr->add_option("--n", n, "qubit count")->required();
  pr->add_option("--d", d, "circuit depth");
  pr->add_option("--D", D, "lattice dimension");
  pr->add_option("--delta", delta, "additive error target");
  pr->add_option("--w", w, "width of the short axes");
  pr->add_option("--profile", profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  pflags.attach(pr);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*v) return cmd_validate(file);
    if (*s) return cmd_simulate(file, delta, profile, dim, base, calculus, trace, cap, flags);
    if (*ve) return cmd_verify(file, cut, k);
    if (*ex) return cmd_experiment(config);
    if (*pr) return cmd_predict(n, d, D, delta, w, profile, pflags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
