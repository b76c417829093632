#include "geodnc/trace.hpp"

#include <algorithm>

namespace geodnc {

TraceNode& TraceNode::add(TraceNode child) {
  children.push_back(std::move(child));
  return children.back();
}

int TraceNode::count_children(const std::string& b) const {
  return static_cast<int>(
      std::count_if(children.begin(), children.end(), [&](const TraceNode& c) { return c.branch == b; }));
}

namespace {

void walk(const TraceNode& n, int depth, TraceSummary& s) {
  ++s.nodes;
  ++s.by_callee[n.callee];
  ++s.by_branch[n.branch];
  s.max_depth = std::max(s.max_depth, depth);
  for (const auto& c : n.children) walk(c, depth + 1, s);
}

}  // namespace

TraceSummary summarize(const TraceNode& root) {
  TraceSummary s;
  walk(root, 1, s);
  return s;
}

nlohmann::json to_json(const TraceNode& n) {
  nlohmann::json j = {{"callee", n.callee}, {"branch", n.branch}, {"dimension", n.dimension},
                      {"width", n.width},   {"delta", n.delta},   {"value", n.value}};
  if (n.eta >= 0) j["eta"] = n.eta;
  if (!n.outcome.empty()) j["outcome"] = n.outcome;
  if (!n.children.empty()) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& c : n.children) counts[c.branch] = counts.value(c.branch, 0) + 1;
    j["child_counts"] = counts;
    j["children"] = nlohmann::json::array();
    for (const auto& c : n.children) j["children"].push_back(to_json(c));
  }
  return j;
}

nlohmann::json to_json(const TraceSummary& s) {
  return {{"nodes", s.nodes},
          {"max_depth", s.max_depth},
          {"by_callee", s.by_callee},
          {"by_branch", s.by_branch}};
}

TraceNode trace_from_json(const nlohmann::json& j) {
  TraceNode n;
  n.callee = j.at("callee").get<std::string>();
  n.branch = j.at("branch").get<std::string>();
  n.dimension = j.at("dimension").get<int>();
  n.width = j.at("width").get<int>();
  n.delta = j.at("delta").get<double>();
  n.value = j.at("value").get<double>();
  n.eta = j.value("eta", -1);
  n.outcome = j.value("outcome", std::string());
  if (j.contains("children"))
    for (const auto& c : j["children"]) n.children.push_back(trace_from_json(c));
  return n;
}

}  // namespace geodnc
