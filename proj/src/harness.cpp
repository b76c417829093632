#include "geodnc/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "geodnc/circuit_io.hpp"
#include "geodnc/oracle.hpp"

namespace geodnc {

namespace {

using nlohmann::json;

Matrix ginibre(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = cplx(N(rng), N(rng));
  return m;
}

Matrix haar_unitary(int dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(dim, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    const cplx d = r(c, c);
    q.col(c) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1);
  }
  return q;
}

Matrix weak_unitary(int dim, double strength, std::mt19937_64& rng) {
  Matrix h = ginibre(dim, rng);
  h = (h + h.adjoint()).eval() / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  Vector ph(dim);
  for (int k = 0; k < dim; ++k) ph[k] = std::polar(1.0, strength * es.eigenvalues()[k] / scale);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

LatticeCircuit generate_circuit(const GeneratorSpec& spec) {
  if (spec.dims.empty()) throw Error("generator: dims must be non-empty");
  for (int w : spec.dims)
    if (w < 1) throw Error("generator: dims must be positive");
  if (spec.depth < 1) throw Error("generator: depth must be positive");
  if (spec.gate_set != "haar" && spec.gate_set != "weak")
    throw Error("generator: unknown gate set '" + spec.gate_set + "'");
  std::mt19937_64 rng(spec.seed);
  LatticeCircuit c = identity_circuit(spec.dims, spec.depth);
  std::vector<int> axes;
  for (int a = 0; a < c.dimension(); ++a)
    if (spec.dims[a] > 1) axes.push_back(a);
  auto two = [&] { return spec.gate_set == "haar" ? haar_unitary(4, rng) : weak_unitary(4, spec.strength, rng); };
  auto one = [&] { return spec.gate_set == "haar" ? haar_unitary(2, rng) : weak_unitary(2, spec.strength, rng); };
  for (int t = 0; t < spec.depth; ++t) {
    std::vector<char> used(c.num_qubits(), 0);
    if (!axes.empty()) {
      const int axis = axes[t % axes.size()];
      const int parity = static_cast<int>(t / axes.size()) % 2;
      for (int q = 0; q < c.num_qubits(); ++q) {
        Coord x = c.coord(q);
        if (x[axis] % 2 != parity || x[axis] + 1 >= spec.dims[axis]) continue;
        x[axis] += 1;
        const int p = c.index(x);
        c.layers[t].push_back({{q, p}, two(), -1, ""});
        used[q] = used[p] = 1;
      }
    }
    for (int q = 0; q < c.num_qubits(); ++q)
      if (!used[q]) c.layers[t].push_back({{q}, one(), -1, ""});
  }
  return c;
}

GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec g;
  g.dims = j.at("dims").get<std::vector<int>>();
  g.depth = j.value("depth", 1);
  g.gate_set = j.value("gate_set", std::string("haar"));
  if (!j.contains("seed")) throw Error("generator spec needs a seed");
  g.seed = j.at("seed").get<std::uint64_t>();
  g.strength = j.value("strength", 0.3);
  return g;
}

json to_json(const GeneratorSpec& g) {
  return {{"dims", g.dims}, {"depth", g.depth}, {"gate_set", g.gate_set}, {"seed", g.seed},
          {"strength", g.strength}};
}

std::uint64_t circuit_fingerprint(const LatticeCircuit& c) {
  const std::string s = circuit_to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

LatticeCircuit embed_dimension(const LatticeCircuit& c, int D) {
  if (D < c.dimension())
    throw Error("cannot embed a " + std::to_string(c.dimension()) + "D circuit in " +
                std::to_string(D) + " dimensions");
  LatticeCircuit out = c;
  out.dims.insert(out.dims.begin(), D - c.dimension(), 1);
  return out;  // row-major indices are unchanged by leading unit axes
}

ScheduleOverrides overrides_from_json(const json& j) {
  ScheduleOverrides o;
  auto get = [&](const char* key, std::optional<int>& dst) {
    if (j.contains(key)) dst = j.at(key).get<int>();
  };
  get("h", o.h);
  get("Delta", o.Delta);
  get("K", o.K);
  get("T", o.T);
  get("eta", o.eta);
  get("w0", o.w0);
  get("slice_width", o.slice_width);
  get("max_gap", o.max_gap);
  get("z_width", o.z_width);
  if (j.contains("eps_factor")) o.eps_factor = j.at("eps_factor").get<double>();
  return o;
}

CutMode parse_calculus(const std::string& name) {
  if (name == "exact-spectral" || name == "exact") return CutMode::ExactSpectral;
  if (name == "power-encoding" || name == "power") return CutMode::PowerEncoding;
  throw Error("unknown calculus '" + name + "'");
}

std::string to_string(CutMode m) {
  return m == CutMode::ExactSpectral ? "exact-spectral" : "power-encoding";
}

BaseSolver base_by_name(const std::string& name, const OracleOptions& opts) {
  if (name == "exact") return exact_base(opts);
  throw Error("unknown base solver '" + name + "'");
}

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw Error("config schema_version must be " + std::to_string(kSchemaVersion));
  ExperimentConfig cfg;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
  };
  if (j.contains("circuits"))
    for (const auto& c : j.at("circuits")) {
      CircuitSource src;
      if (c.contains("file")) {
        src.file = resolve(c.at("file").get<std::string>());
        src.name = c.value("name", c.at("file").get<std::string>());
      } else if (c.contains("generator")) {
        src.generator = generator_from_json(c.at("generator"));
        src.name = c.value("name", "generated-" + std::to_string(src.generator->seed));
      } else {
        throw Error("circuit entry needs 'file' or 'generator'");
      }
      cfg.circuits.push_back(std::move(src));
    }
  if (j.contains("corpus")) {
    // count seeded circuits sharing one spec, seeds seed, seed+1, ...
    const auto& c = j.at("corpus");
    const GeneratorSpec proto = generator_from_json(c);
    const int count = c.at("count").get<int>();
    for (int i = 0; i < count; ++i) {
      CircuitSource src;
      src.generator = proto;
      src.generator->seed = proto.seed + static_cast<std::uint64_t>(i);
      src.name = proto.gate_set + "-" + std::to_string(src.generator->seed);
      cfg.circuits.push_back(std::move(src));
    }
  }
  if (cfg.circuits.empty()) throw Error("config lists no circuits");
  if (j.contains("deltas")) cfg.deltas = j.at("deltas").get<std::vector<double>>();
  cfg.profile = parse_profile(j.value("profile", std::string("desk")));
  cfg.calculus = parse_calculus(j.value("calculus", std::string("exact-spectral")));
  cfg.base = j.value("base", std::string("exact"));
  if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
  if (j.contains("overrides")) cfg.overrides = overrides_from_json(j.at("overrides"));
  cfg.oracle_cap = j.value("oracle_cap", 22);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("json")) cfg.json_out = resolve(o.at("json").get<std::string>());
    if (o.contains("csv")) cfg.csv_out = resolve(o.at("csv").get<std::string>());
    if (o.contains("trace_dir")) cfg.trace_dir = resolve(o.at("trace_dir").get<std::string>());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("malformed config " + path + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path().string());
}

bool Report::all_within_delta() const {
  for (const auto& r : records)
    if (!r.within_delta) return false;
  return true;
}

Report run_experiment(const ExperimentConfig& cfg) {
  OracleOptions oracle;
  oracle.max_qubits = cfg.oracle_cap;
  const BaseSolver base = base_by_name(cfg.base, oracle);
  CutCalculus calc;
  calc.mode = cfg.calculus;
  Report report;
  int index = 0;
  for (const auto& src : cfg.circuits) {
    LatticeCircuit c = src.file ? load_circuit(*src.file) : generate_circuit(*src.generator);
    if (cfg.dim) c = embed_dimension(c, *cfg.dim);
    const ValidationReport v = validate(c);
    if (!v.ok) throw Error("circuit '" + src.name + "' is invalid: " + v.violations.front());
    const double oracle_value = synthesis_value_exact(synthesis_of_circuit(c), oracle);
    for (double delta : cfg.deltas) {
      ReportRecord r;
      r.index = index;
      r.name = src.name;
      r.n = c.num_qubits();
      r.dims = c.dims;
      r.depth = c.depth;
      r.delta = delta;
      r.oracle = oracle_value;
      r.schedule = schedule(r.n, c.depth, c.dimension(), delta, cfg.profile, cfg.overrides);
      const auto t0 = std::chrono::steady_clock::now();
      EstimateResult est;
      try {
        est = estimate(c, r.schedule, base, calc, oracle);
      } catch (const Error& e) {
        r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.failure = e.what();
        r.estimate = r.error = std::nan("");
        report.records.push_back(std::move(r));
        continue;
      }
      r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.estimate = est.value;
      r.error = std::abs(r.oracle - r.estimate);
      r.within_delta = r.error <= delta;
      try {
        r.predicted_bound = predicted_error(model_from_schedule(r.schedule), r.schedule.eps);
      } catch (const Error&) {
        r.predicted_bound = std::nan("");
      }
      r.trace = summarize(est.trace);
      if (cfg.trace_dir) {
        std::filesystem::create_directories(*cfg.trace_dir);
        std::ofstream out(std::filesystem::path(*cfg.trace_dir) /
                          ("trace-" + std::to_string(index) + "-" + fmt_double(delta) + ".json"));
        out << to_json(est.trace).dump(1) << "\n";
      }
      report.records.push_back(std::move(r));
    }
    ++index;
  }
  return report;
}

json to_json(const Report& rep) {
  json records = json::array();
  for (const auto& r : rep.records)
    records.push_back({{"index", r.index},
                       {"name", r.name},
                       {"n", r.n},
                       {"dims", r.dims},
                       {"depth", r.depth},
                       {"delta", r.delta},
                       {"oracle", r.oracle},
                       {"estimate", std::isnan(r.estimate) ? json(nullptr) : json(r.estimate)},
                       {"error", std::isnan(r.error) ? json(nullptr) : json(r.error)},
                       {"within_delta", r.within_delta},
                       {"predicted_bound", std::isnan(r.predicted_bound) ? json(nullptr) : json(r.predicted_bound)},
                       {"schedule", to_json(r.schedule)},
                       {"trace_summary", to_json(r.trace)},
                       {"wall_time_s", r.wall_time_s},
                       {"failure", r.failure.empty() ? json(nullptr) : json(r.failure)}});
  return {{"schema_version", kSchemaVersion},
          {"all_within_delta", rep.all_within_delta()},
          {"records", records}};
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}
}  // namespace

std::string to_csv(const Report& rep) {
  std::ostringstream os;
  os << "index,name,n,depth,delta,oracle,estimate,error,within_delta,nodes,wall_time_s,failure\n";
  for (const auto& r : rep.records)
    os << r.index << ',' << r.name << ',' << r.n << ',' << r.depth << ',' << fmt_double(r.delta)
       << ',' << fmt_double(r.oracle) << ',' << fmt_double(r.estimate) << ','
       << fmt_double(r.error) << ',' << (r.within_delta ? "true" : "false") << ','
       << r.trace.nodes << ',' << r.wall_time_s << ',' << csv_field(r.failure) << '\n';
  return os.str();
}

bool report_consistent(const json& report) {
  for (const auto& r : report.at("records")) {
    if (r.at("estimate").is_null()) {
      if (r.at("within_delta").get<bool>()) return false;
      continue;
    }
    const double err = std::abs(r.at("oracle").get<double>() - r.at("estimate").get<double>());
    if (err != r.at("error").get<double>()) return false;
  }
  return true;
}

}  // namespace geodnc
