#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "geodnc/circuit_io.hpp"
#include "geodnc/harness.hpp"
#include "geodnc/trace.hpp"
#include "test_util.hpp"

using namespace geodnc;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("geodnc-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Generator, DeterministicPerSeed) {
  GeneratorSpec g{{2, 5}, 3, "haar", 42, 0.3};
  EXPECT_EQ(circuit_fingerprint(generate_circuit(g)), circuit_fingerprint(generate_circuit(g)));
  GeneratorSpec h = g;
  h.seed = 43;
  EXPECT_NE(circuit_fingerprint(generate_circuit(g)), circuit_fingerprint(generate_circuit(h)));
  const LatticeCircuit c = generate_circuit(g);
  EXPECT_TRUE(validate(c).ok);
  // Every qubit is touched in every layer.
  for (const auto& layer : c.layers) {
    int touched = 0;
    for (const auto& gate : layer) touched += static_cast<int>(gate.qubits.size());
    EXPECT_EQ(touched, 10);
  }
}

TEST(Generator, WeakGatesStayNearIdentity) {
  const LatticeCircuit c = fixtures::random_circuit({6}, 1, 1, "weak", 0.1);
  for (const auto& g : c.layers[0]) {
    const Matrix id = Matrix::Identity(g.matrix.rows(), g.matrix.cols());
    EXPECT_LT((g.matrix - id).norm(), 0.3);
  }
}

TEST(Generator, RejectsBadSpecs) {
  EXPECT_THROW(generate_circuit({{}, 1, "haar", 0, 0.3}), Error);
  EXPECT_THROW(generate_circuit({{3}, 0, "haar", 0, 0.3}), Error);
  EXPECT_THROW(generate_circuit({{3}, 1, "clifford", 0, 0.3}), Error);
  EXPECT_THROW(generator_from_json(json::parse(R"({"dims": [4]})")), Error);
  const GeneratorSpec g = generator_from_json(json::parse(R"({"dims": [4], "seed": 9})"));
  EXPECT_EQ(g.seed, 9u);
  EXPECT_EQ(to_json(g)["gate_set"], "haar");
}

TEST(Generator, EmbedPrependsUnitAxes) {
  const LatticeCircuit c = fixtures::random_circuit({2, 4}, 1, 3);
  const LatticeCircuit e = embed_dimension(c, 4);
  EXPECT_EQ(e.dims, (std::vector<int>{1, 1, 2, 4}));
  EXPECT_TRUE(validate(e).ok);
  EXPECT_THROW(embed_dimension(c, 1), Error);
}

TEST(Trace, SummaryAndJsonRoundTrip) {
  const LatticeCircuit c = embed_dimension(fixtures::random_circuit({14}, 1, 2, "weak", 0.4), 3);
  const ParameterSchedule s = schedule(14, 1, 3, 0.1, Profile::Desk);
  const EstimateResult r = estimate(c, s, exact_base());
  const TraceSummary sum = summarize(r.trace);
  long count = 0;
  visit(r.trace, [&](const TraceNode&, const TraceNode*) { ++count; });
  EXPECT_EQ(sum.nodes, count);
  EXPECT_EQ(sum.by_branch.at("root"), 1);
  EXPECT_GT(sum.max_depth, 2);
  const TraceNode back = trace_from_json(to_json(r.trace));
  EXPECT_EQ(summarize(back).nodes, sum.nodes);
  EXPECT_EQ(back.children.size(), r.trace.children.size());
  EXPECT_DOUBLE_EQ(back.value, r.trace.value);
  EXPECT_EQ(to_json(sum)["nodes"], sum.nodes);
}

TEST(Config, ParsesCircuitsAndCorpus) {
  const auto dir = temp_dir("config");
  save_circuit(fixtures::random_circuit({1, 1, 12}, 1, 1), (dir / "c.json").string());
  const json j = json::parse(R"({
    "schema_version": 1,
    "circuits": [{"file": "c.json"}, {"generator": {"dims": [1, 1, 12], "seed": 3}, "name": "g"}],
    "corpus": {"count": 2, "dims": [1, 1, 12], "seed": 10, "gate_set": "weak"},
    "deltas": [0.1, 0.05], "calculus": "power", "overrides": {"Delta": 1},
    "output": {"json": "out.json"}})");
  const ExperimentConfig cfg = config_from_json(j, dir.string());
  ASSERT_EQ(cfg.circuits.size(), 4u);
  EXPECT_EQ(*cfg.circuits[0].file, (dir / "c.json").string());
  EXPECT_EQ(cfg.circuits[1].name, "g");
  EXPECT_EQ(cfg.circuits[3].generator->seed, 11u);
  EXPECT_EQ(cfg.calculus, CutMode::PowerEncoding);
  EXPECT_EQ(*cfg.overrides.Delta, 1);
  EXPECT_EQ(*cfg.json_out, (dir / "out.json").string());
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json(json::parse(R"({"circuits": []})")), Error);
  EXPECT_THROW(config_from_json(json::parse(R"({"schema_version": 1})")), Error);
  EXPECT_THROW(config_from_json(json::parse(
                   R"({"schema_version": 1, "circuits": [{"name": "x"}]})")),
               Error);
  EXPECT_THROW(config_from_json(json::parse(
                   R"({"schema_version": 1, "corpus": {"count": 1, "dims": [4], "seed": 1},
                       "profile": "huge"})")),
               Error);
  const auto dir = temp_dir("bad");
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_THROW(load_config((dir / "broken.json").string()), Error);
  EXPECT_THROW(load_config((dir / "missing.json").string()), Error);
}

TEST(Experiment, ReportIsConsistent) {
  const auto dir = temp_dir("experiment");
  ExperimentConfig cfg = config_from_json(json::parse(R"({
    "schema_version": 1,
    "corpus": {"count": 2, "dims": [1, 1, 12], "depth": 1, "gate_set": "weak", "seed": 5},
    "deltas": [0.1, 0.05]})"));
  cfg.trace_dir = (dir / "traces").string();
  const Report rep = run_experiment(cfg);
  ASSERT_EQ(rep.records.size(), 4u);
  EXPECT_TRUE(rep.all_within_delta());
  const json j = to_json(rep);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_TRUE(report_consistent(j));
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir / "traces"),
                          std::filesystem::directory_iterator{}),
            4);
  const std::string csv = to_csv(rep);
  EXPECT_EQ(csv.rfind("index,name,n,depth,delta,oracle,estimate,error,within_delta", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  // Tampering with a stored error is caught.
  json bad = j;
  bad["records"][0]["error"] = 0.5;
  EXPECT_FALSE(report_consistent(bad));
}

TEST(Experiment, EstimatorFailuresAreRecorded) {
  // Region Z narrower than the heavy-slice spacing guarantee needs: d = 2,
  // 16 sites, Z = 12 sites holds at most two whole slices.
  ExperimentConfig cfg;
  cfg.circuits.push_back({"strong", std::nullopt, GeneratorSpec{{1, 1, 16}, 2, "weak", 12, 1.0}});
  cfg.deltas = {0.05};
  cfg.overrides.z_width = 12;
  cfg.overrides.w0 = 12;
  const Report rep = run_experiment(cfg);
  ASSERT_EQ(rep.records.size(), 1u);
  const auto& r = rep.records[0];
  EXPECT_FALSE(r.within_delta);
  EXPECT_NE(r.failure.find("spacing precondition"), std::string::npos);
  EXPECT_FALSE(rep.all_within_delta());
  const json j = to_json(rep);
  EXPECT_TRUE(j["records"][0]["estimate"].is_null());
  EXPECT_TRUE(report_consistent(j));
}

TEST(Experiment, NamesAndParsers) {
  EXPECT_EQ(parse_calculus("exact-spectral"), CutMode::ExactSpectral);
  EXPECT_EQ(to_string(CutMode::PowerEncoding), "power-encoding");
  EXPECT_THROW(parse_calculus("magic"), Error);
  EXPECT_THROW(base_by_name("mps", {}), Error);
}
