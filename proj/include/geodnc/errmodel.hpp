#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace geodnc {

struct ParameterSchedule;

// All logarithms are base 2.

/// E1(delta) = 2^{log(delta)/(2h) - 1} - 2^{log(delta)/h - 1}.
double e1(double delta, double h);
/// -log(delta) ln(2) 2^{log(delta)/h} / (4h), the appendix lower bound on E1.
double e1_lower_bound(double delta, double h);
/// E2(delta) = delta 2^{-10 log n log log n}; needs n >= 4.
double e2(double delta, int n);
/// E3(eps) = eps / 2^Delta.
double e3(double eps, int Delta);

struct ErrorModel {
  double h = 1;
  int Delta = 1, K = 1, T = 1, eta = 1, D = 3, n = 16, d = 1;
  double delta = 0.1;
  /// Slice residual e(n); default 1 - 2^{log(delta)/log^7(n)}.
  std::optional<double> e_of_n;
  /// Projector error g(n); default (2 e(n))^K / 6.
  std::optional<double> g_of_n;

  double e() const;
  double g() const;
};

ErrorModel model_from_schedule(const ParameterSchedule& sched);

/// E3(E2(E1^{(D)}(delta))) with E1 applied model.D times.
double e5(double delta, const ErrorModel& model);

struct ScriptBounds {
  double E1 = 0, E2 = 0, E3 = 0;
};

/// Lemma 10-12 bounds. The Lemma 12 big-O constant is max(1, 10K / 2^Delta),
/// the smallest value for which E3 >= E2 holds for every input.
double lemma12_constant(const ErrorModel& model);
ScriptBounds script_bounds(const ErrorModel& model, double eps);

/// eta (20 Delta^2)^eta ((2e + 2g)^Delta + 3 Delta^2 E3).
double predicted_error(const ErrorModel& model, double eps);

/// Node counts of the recursion tree the estimator would build when every
/// slice is heavy, keyed the same way as TraceSummary.
struct CallCounts {
  std::map<std::string, long> by_callee;
  std::map<std::string, long> by_branch;
  long nodes = 0;
};

CallCounts predict_calls(const std::vector<int>& dims, int depth, const ParameterSchedule& sched);

struct RuntimePrediction {
  CallCounts calls;
  double cost = 0;            // unit cost per call plus base-case and brute-force costs
  double log2_envelope = 0;   // log2 of delta^-2 2^{(d log n)^{D 3^D} w^{1/3}} with O-constant 1
};

/// Base-case cost for a 2D call at accuracy delta.
using BaseCost = std::function<double(double delta)>;

/// Predicted cost of a_full on a lattice whose long axis has length l and
/// whose remaining D - 1 axes have width w.
RuntimePrediction predicted_runtime(int l, int D, int d, int w, double delta,
                                    const ParameterSchedule& sched,
                                    const BaseCost& base_cost = nullptr);

nlohmann::json to_json(const ScriptBounds& b);
nlohmann::json to_json(const CallCounts& c);

}  // namespace geodnc
