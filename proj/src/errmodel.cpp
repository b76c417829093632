#include "geodnc/errmodel.hpp"

#include <cmath>

#include "geodnc/dnc.hpp"

namespace geodnc {

double e1(double delta, double h) {
  if (!(delta > 0) || delta > 1) throw Error("e1: delta must lie in (0, 1]");
  if (h < 1) throw Error("e1: h must be at least 1");
  const double l = std::log2(delta);
  return std::exp2(l / (2 * h) - 1) - std::exp2(l / h - 1);
}

double e1_lower_bound(double delta, double h) {
  const double l = std::log2(delta);
  return -l * std::log(2.0) * std::exp2(l / h) / (4 * h);
}

double e2(double delta, int n) {
  if (n < 4) throw Error("e2: n must be at least 4");
  if (delta < 0) throw Error("e2: delta must be non-negative");
  const double lg = std::log2(static_cast<double>(n));
  return delta * std::exp2(-10 * lg * std::log2(lg));
}

double e3(double eps, int Delta) {
  if (Delta < 0) throw Error("e3: Delta must be non-negative");
  return std::ldexp(eps, -Delta);
}

double ErrorModel::e() const {
  if (e_of_n) return *e_of_n;
  const double lg = std::log2(static_cast<double>(n));
  return 1 - std::exp2(std::log2(delta) / std::pow(lg, 7));
}

double ErrorModel::g() const {
  if (g_of_n) return *g_of_n;
  return std::pow(2 * e(), K) / 6;
}

ErrorModel model_from_schedule(const ParameterSchedule& s) {
  ErrorModel m;
  m.h = s.h;
  m.Delta = s.Delta;
  m.K = s.K;
  m.T = s.T;
  m.eta = s.eta;
  m.D = s.D;
  m.n = s.n;
  m.d = s.d;
  m.delta = s.delta;
  return m;
}

double e5(double delta, const ErrorModel& m) {
  double x = delta;
  for (int i = 0; i < m.D; ++i) x = e1(x, m.h);
  return e3(e2(x, m.n), m.Delta);
}

double lemma12_constant(const ErrorModel& m) {
  return std::max(1.0, 10.0 * m.K / std::exp2(m.Delta));
}

ScriptBounds script_bounds(const ErrorModel& m, double eps) {
  if (m.K < 1 || m.T < 1) throw Error("script_bounds: K and T must be at least 1");
  const double e2t = std::pow(m.e(), 2 * m.T);
  const double g = m.g();
  const double p = std::exp2(m.Delta);
  ScriptBounds b;
  b.E1 = 10.0 * m.K * (e2t + 6 * g + eps);
  b.E2 = b.E1 + eps;
  b.E3 = lemma12_constant(m) * (p * 6 * g + p * m.K * (e2t + eps) + eps);
  return b;
}

double predicted_error(const ErrorModel& m, double eps) {
  const ScriptBounds b = script_bounds(m, eps);
  const double D2 = static_cast<double>(m.Delta) * m.Delta;
  return m.eta * std::pow(20 * D2, m.eta) *
         (std::pow(2 * m.e() + 2 * m.g(), m.Delta) + 3 * D2 * b.E3);
}

namespace {

// N register of a synthesis, reduced to its per-axis coordinate ranges.
struct Geometry {
  std::vector<std::pair<int, int>> ext;
  bool empty = false;

  int width() const { return empty ? 0 : ext.back().second - ext.back().first; }
  std::pair<int, int> last() const { return empty ? std::pair{0, 0} : ext.back(); }
  Geometry reduced() const {
    Geometry g = *this;
    g.ext.pop_back();
    return g;
  }
  Geometry restricted(int lo, int hi) const {
    Geometry g = *this;
    if (lo >= hi) g.empty = true;
    g.ext.back() = {lo, hi};
    return g;
  }
};

struct Predictor {
  const ParameterSchedule& sched;
  int depth;
  CallCounts counts;
  long base_calls = 0, brute_calls = 0;
  std::vector<double> base_deltas;

  void node(const std::string& callee, const std::string& branch) {
    ++counts.nodes;
    ++counts.by_callee[callee];
    ++counts.by_branch[branch];
  }

  void full(const Geometry& g, double delta, int D, const std::string& branch) {
    node("a_full", branch);
    if (delta <= brute_force_threshold(sched.n)) {
      node("brute-force", "brute-force");
      ++brute_calls;
      return;
    }
    if (delta >= 0.5) return;
    if (D == 2) {
      node("base", "base");
      base_deltas.push_back(delta);
      return;
    }
    const auto [lo, hi] = g.last();
    const auto slices = slices_in_range(lo, hi, D - 1, depth, sched);
    for (const Slice& s : slices) full(g.restricted(s.lo, s.hi).reduced(), e1(delta, sched.h), D - 1, "slice-weight");
    rec(g, sched.eta_for(D), sched.eps_for(delta), D, slices, "dispatch");
  }

  void rec(const Geometry& g, int eta, double eps, int D, const std::vector<Slice>& heavy,
           const std::string& branch) {
    node("a", branch);
    if (g.width() < sched.w0 || eta < 1) {
      full(g.reduced(), eps, D - 1, "stop");
      return;
    }
    const auto [lo, hi] = g.last();
    const RegionZ z = select_region(lo, hi, D - 1, sched, heavy);
    for (int i = 0; i < sched.Delta; ++i) node("kappa", "kappa");
    for (const Slice& c : z.chosen) {
      rec(g.restricted(lo, c.lo), eta - 1, eps, D, heavy, "left");
      rec(g.restricted(c.hi, hi), eta - 1, eps, D, heavy, "right");
    }
    for (int i = 0; i < sched.Delta; ++i)
      for (int j = i + 1; j < sched.Delta; ++j) {
        const int mlo = z.chosen[i].hi, mhi = z.chosen[j].lo;
        full(g.restricted(mlo, mhi).reduced(), eps, D - 1, "middle");
        for (const auto& sigma : sigma_subsets(i, j)) {
          int covered = 0;
          for (int k : sigma) covered += z.chosen[k].width();
          Geometry phi = g.restricted(mlo, mhi);
          if (covered >= mhi - mlo) phi.empty = true;
          full(phi.reduced(), e3(eps, sched.Delta), D - 1, "sigma");
        }
      }
  }
};

}  // namespace

CallCounts predict_calls(const std::vector<int>& dims, int depth, const ParameterSchedule& sched) {
  if (static_cast<int>(dims.size()) != sched.D) throw Error("predict_calls: dims do not match D");
  Predictor p{sched, depth, {}, 0, 0, {}};
  Geometry g;
  for (int w : dims) g.ext.push_back({0, w});
  p.full(g, sched.delta, sched.D, "root");
  return p.counts;
}

RuntimePrediction predicted_runtime(int l, int D, int d, int w, double delta,
                                    const ParameterSchedule& sched, const BaseCost& base_cost) {
  if (l < 1 || w < 1) throw Error("predicted_runtime: lattice sides must be positive");
  if (D != sched.D) throw Error("predicted_runtime: D does not match the schedule");
  if (sched.eta_for(D) > 64) throw Error("predicted_runtime: eta too large to terminate");
  std::vector<int> dims(D - 1, w);
  dims.push_back(l);
  ParameterSchedule s = sched;
  s.delta = delta;
  Predictor p{s, d, {}, 0, 0, {}};
  Geometry g;
  for (int x : dims) g.ext.push_back({0, x});
  p.full(g, delta, D, "root");

  const BaseCost cost = base_cost ? base_cost : [&](double dl) {
    return std::pow(dl, -2) * std::exp2(std::pow(d, 3) * std::pow(w, 1.0 / D));
  };
  RuntimePrediction r;
  r.calls = p.counts;
  r.cost = static_cast<double>(p.counts.by_callee["a_full"] + p.counts.by_callee["a"] +
                               p.counts.by_callee["kappa"]);
  for (double dl : p.base_deltas) r.cost += cost(dl);
  long n = 1;
  for (int x : dims) n *= x;
  r.cost += static_cast<double>(p.brute_calls) * std::exp2(std::min<long>(n, 1000));
  const double lg = std::log2(static_cast<double>(std::max(2L, n)));
  r.log2_envelope = -2 * std::log2(delta) +
                    std::pow(d * lg, D * std::pow(3.0, D)) * std::cbrt(static_cast<double>(w));
  return r;
}

nlohmann::json to_json(const ScriptBounds& b) { return {{"E1", b.E1}, {"E2", b.E2}, {"E3", b.E3}}; }

nlohmann::json to_json(const CallCounts& c) {
  return {{"nodes", c.nodes}, {"by_callee", c.by_callee}, {"by_branch", c.by_branch}};
}

}  // namespace geodnc
