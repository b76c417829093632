#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace geodnc {

/// One call in the recursion tree.
///   callee: "a_full", "a", "base", "brute-force" or "kappa"
///   branch: how the parent invoked it: "root", "slice-weight", "dispatch",
///           "stop", "left", "right", "middle", "sigma", "kappa", "base",
///           "brute-force"
struct TraceNode {
  std::string callee;
  std::string branch = "root";
  int dimension = 0;
  int width = 0;
  int eta = -1;  // only meaningful for "a" nodes
  double delta = 0.0;
  double value = 0.0;
  std::string outcome;  // a_full: "half", "brute-force", "base", "too-few-heavy", "recursive"
  std::vector<TraceNode> children;

  TraceNode& add(TraceNode child);
  int count_children(const std::string& branch) const;
};

struct TraceSummary {
  std::map<std::string, long> by_callee;
  std::map<std::string, long> by_branch;
  long nodes = 0;
  int max_depth = 0;
};

TraceSummary summarize(const TraceNode& root);
nlohmann::json to_json(const TraceNode& node);
nlohmann::json to_json(const TraceSummary& summary);
TraceNode trace_from_json(const nlohmann::json& j);

/// Visits every node with its parent (nullptr for the root).
template <class F>
void visit(const TraceNode& node, F&& f, const TraceNode* parent = nullptr) {
  f(node, parent);
  for (const auto& c : node.children) visit(c, f, &node);
}

}  // namespace geodnc
