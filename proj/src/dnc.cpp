#include "geodnc/dnc.hpp"

#include <algorithm>
#include <cmath>

#include "geodnc/errmodel.hpp"

namespace geodnc {

namespace {

int ceil_pos(double x) { return std::max(1, static_cast<int>(std::ceil(x - 1e-12))); }

}  // namespace

Profile parse_profile(const std::string& name) {
  if (name == "desk") return Profile::Desk;
  if (name == "paper") return Profile::Paper;
  throw Error("unknown profile '" + name + "' (expected desk or paper)");
}

std::string to_string(Profile p) { return p == Profile::Desk ? "desk" : "paper"; }

double ParameterSchedule::eps_for(double delta) const {
  if (profile == Profile::Paper) return e2(delta, n);
  return eps_factor * delta;
}

int ParameterSchedule::eta_for(int dim) const {
  if (eta_override) return *eta_override;
  return ceil_pos(std::log2(static_cast<double>(n)) / (dim * std::log2(4.0 / 3.0)));
}

ParameterSchedule schedule(int n, int d, int D, double delta, Profile profile,
                           const ScheduleOverrides& o) {
  if (n < 2) throw Error("schedule needs n >= 2");
  if (d < 1) throw Error("schedule needs d >= 1");
  if (D < 2) throw Error("schedule needs D >= 2");
  if (!(delta > 0)) throw Error("schedule needs delta > 0");
  ParameterSchedule s;
  s.profile = profile;
  s.n = n;
  s.d = d;
  s.D = D;
  s.delta = delta;
  const double lg = std::log2(static_cast<double>(n));
  if (profile == Profile::Paper) {
    if (n < 4) throw Error("paper profile needs n >= 4 (log log n)");
    s.h = o.h.value_or(ceil_pos(std::pow(lg, 7)));
    s.Delta = o.Delta.value_or(ceil_pos(lg));
    s.K = o.K.value_or(ceil_pos(std::pow(lg, 3)));
    s.T = o.T.value_or(ceil_pos(std::pow(lg, 3)));
    s.slice_width = o.slice_width.value_or(10 * d);
    s.max_gap = o.max_gap.value_or(10 * d);
    s.w0 = o.w0.value_or(20 * d * (s.Delta + s.h + 2));
    s.z_width = o.z_width.value_or(10 * d * (s.Delta + s.h + 2));
  } else {
    s.h = o.h.value_or(1);
    s.Delta = o.Delta.value_or(2);
    s.K = o.K.value_or(2);
    s.T = o.T.value_or(2);
    s.slice_width = o.slice_width.value_or(2 * d);
    s.max_gap = o.max_gap.value_or(0);
    s.z_width = o.z_width.value_or(s.slice_width * (s.Delta + s.h + 2));
    s.w0 = o.w0.value_or(s.z_width);
    s.eps_factor = o.eps_factor.value_or(0.25);
  }
  s.eta_override = o.eta;
  if (s.slice_width < 2 * d)
    throw Error("slice_width " + std::to_string(s.slice_width) + " below the minimum 2d = " +
                std::to_string(2 * d));
  if (s.Delta < 1) throw Error("Delta must be at least 1");
  if (s.K < 1 || s.T < 1) throw Error("K and T must be at least 1");
  if (s.h < 1) throw Error("h must be at least 1");
  if (s.max_gap < 0) throw Error("max_gap must be non-negative");
  if (s.eps_factor <= 0 || s.eps_factor > 1) throw Error("eps_factor must lie in (0, 1]");
  if (s.z_width < s.Delta * (s.slice_width + s.max_gap))
    throw Error("z_width too small to hold Delta slices");
  if (s.eta_override && *s.eta_override < 0) throw Error("eta must be non-negative");
  s.eta = s.eta_for(D);
  s.eps = s.eps_for(delta);
  return s;
}

nlohmann::json to_json(const ParameterSchedule& s) {
  return {{"profile", to_string(s.profile)},
          {"n", s.n},
          {"d", s.d},
          {"D", s.D},
          {"delta", s.delta},
          {"eps", s.eps},
          {"h", s.h},
          {"eta", s.eta},
          {"Delta", s.Delta},
          {"K", s.K},
          {"T", s.T},
          {"w0", s.w0},
          {"slice_width", s.slice_width},
          {"max_gap", s.max_gap},
          {"z_width", s.z_width}};
}

BaseSolver exact_base(OracleOptions opts) {
  return [opts](const Synthesis& s, double) { return synthesis_value_exact(s, opts); };
}

double heavy_threshold(double delta, int h) {
  return (std::pow(delta, 1.0 / (2 * h)) + std::pow(delta, 1.0 / h)) / 2;
}

double brute_force_threshold(int n) {
  const double lg = std::log2(static_cast<double>(n));
  return std::pow(2.0, -lg * lg * lg);
}

std::vector<Slice> slices_in_range(int lo, int hi, int axis, int depth,
                                   const ParameterSchedule& sched) {
  auto out = enumerate_slices(std::max(0, hi - lo), axis, depth, sched.slice_width, sched.max_gap);
  for (auto& s : out) {
    s.lo += lo;
    s.hi += lo;
  }
  return out;
}

RegionZ select_region(int lo, int hi, int axis, const ParameterSchedule& sched,
                      const std::vector<Slice>& heavy) {
  RegionZ r;
  const int zlo = lo + (hi - lo) / 2 - sched.z_width / 2;
  r.z = {axis, zlo, zlo + sched.z_width};
  for (const Slice& s : heavy) {
    if (static_cast<int>(r.chosen.size()) == sched.Delta) break;
    if (s.lo >= std::max(r.z.lo, lo) && s.hi <= std::min(r.z.hi, hi)) r.chosen.push_back(s);
  }
  if (static_cast<int>(r.chosen.size()) < sched.Delta)
    throw Error("fewer than Delta heavy slices inside region Z; the spacing precondition on "
                "K_heavy is violated");
  return r;
}

RegionZ select_region_Z(const Synthesis& s, const ParameterSchedule& sched,
                        const std::vector<Slice>& heavy) {
  const int axis = s.dimension() - 1;
  const auto [lo, hi] = s.extent(axis);
  return select_region(lo, hi, axis, sched, heavy);
}

std::vector<std::vector<int>> sigma_subsets(int i, int j) {
  std::vector<std::vector<int>> out;
  const int m = j - i - 1;
  if (m <= 0) return out;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> s;
    for (int b = 0; b < m; ++b)
      if (mask >> b & 1) s.push_back(i + 1 + b);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double inclusion_exclusion_combine(const std::vector<double>& single,
                                   const std::map<std::pair<int, int>, double>& dbl,
                                   const std::map<SigmaKey, double>& multi,
                                   const std::vector<double>& kappas, int K, int Delta) {
  if (static_cast<int>(single.size()) != Delta || static_cast<int>(kappas.size()) != Delta)
    throw Error("combine: expected Delta single values and kappas");
  const double e = 4.0 * K + 1;
  double total = 0;
  for (int i = 0; i < Delta; ++i) {
    if (!(kappas[i] > 0)) throw Error("combine: kappa must be positive");
    total += single[i] / std::pow(kappas[i], e);
  }
  for (int i = 0; i < Delta; ++i)
    for (int j = i + 1; j < Delta; ++j) {
      const double c = std::pow(kappas[i] * kappas[j], e);
      auto it = dbl.find({i, j});
      if (it == dbl.end())
        throw Error("combine: missing two-cut value (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      total -= it->second / c;
      for (const auto& sigma : sigma_subsets(i, j)) {
        auto m = multi.find({i, j, sigma});
        if (m == multi.end()) throw Error("combine: missing multi-cut value");
        const double sign = sigma.size() % 2 == 1 ? 1.0 : -1.0;
        total += sign * m->second / c;
      }
    }
  return total;
}

Estimator::Estimator(ParameterSchedule sched, BaseSolver base, CutCalculus calc,
                     OracleOptions oracle)
    : sched_(std::move(sched)), base_(std::move(base)), calc_(calc), oracle_(oracle) {
  calc_.K = sched_.K;
  calc_.T = sched_.T;
}

HeavyResult Estimator::heavy_slices(const Synthesis& s, const std::vector<Slice>& slices,
                                    double delta, int D, TraceNode* node) const {
  HeavyResult r;
  r.threshold = heavy_threshold(delta, sched_.h);
  const double sub_delta = e1(delta, sched_.h);
  for (const Slice& sl : slices) {
    TraceNode child;
    child.branch = "slice-weight";
    const double est = a_full(dimension_reduce(slice_weight_synthesis(s, sl)), sub_delta, D - 1,
                              node ? &child : nullptr);
    if (node) node->add(std::move(child));
    r.estimates.push_back(est);
    if (est >= r.threshold) r.heavy.push_back(sl);
    if (observer_) observer_({&s, sl, est, r.threshold, est >= r.threshold});
  }
  r.enough = static_cast<int>(r.heavy.size()) >= static_cast<int>(slices.size()) - sched_.h;
  return r;
}

double Estimator::a_full(const Synthesis& s, double delta, int D, TraceNode* node) const {
  if (D != s.dimension())
    throw Error("a_full: dimension " + std::to_string(D) + " does not match the synthesis (" +
                std::to_string(s.dimension()) + ")");
  TraceNode local;
  TraceNode& t = node ? *node : local;
  t.callee = "a_full";
  t.dimension = D;
  t.width = s.width();
  t.delta = delta;
  auto leaf = [&](const std::string& name, double v) {
    if (!node) return;
    TraceNode c;
    c.callee = name;
    c.branch = name;
    c.dimension = D;
    c.width = t.width;
    c.delta = delta;
    c.value = v;
    t.add(std::move(c));
  };

  double value = 0;
  if (delta <= brute_force_threshold(sched_.n)) {
    t.outcome = "brute-force";
    value = synthesis_value_exact(s, oracle_);
    leaf("brute-force", value);
  } else if (delta >= 0.5) {
    t.outcome = "half";
    value = 0.5;
  } else if (D == 2) {
    t.outcome = "base";
    value = base_(s, delta);
    leaf("base", value);
  } else if (D < 2) {
    throw Error("a_full: dimension below 2");
  } else {
    const int axis = D - 1;
    const auto [lo, hi] = s.extent(axis);
    const auto slices = slices_in_range(lo, hi, axis, s.depth, sched_);
    const HeavyResult hr = heavy_slices(s, slices, delta, D, node ? &t : nullptr);
    if (!hr.enough) {
      t.outcome = "too-few-heavy";
      value = 0;
    } else {
      t.outcome = "recursive";
      TraceNode child;
      child.branch = "dispatch";
      value = a_recursive(s, sched_.eta_for(D), sched_.eps_for(delta), D, hr.heavy,
                          node ? &child : nullptr);
      if (node) t.add(std::move(child));
    }
  }
  t.value = value;
  return value;
}

double Estimator::a_recursive(const Synthesis& s, int eta, double eps, int D,
                              const std::vector<Slice>& heavy, TraceNode* node) const {
  TraceNode local;
  TraceNode& t = node ? *node : local;
  t.callee = "a";
  t.dimension = D;
  t.width = s.width();
  t.eta = eta;
  t.delta = eps;
  auto call_full = [&](const Synthesis& sub, double acc, const std::string& branch) {
    TraceNode c;
    c.branch = branch;
    const double v = a_full(dimension_reduce(sub), acc, D - 1, node ? &c : nullptr);
    if (node) t.add(std::move(c));
    return v;
  };

  if (t.width < sched_.w0 || eta < 1) {
    t.value = call_full(s, eps, "stop");
    return t.value;
  }

  const RegionZ z = select_region_Z(s, sched_, heavy);
  const int Delta = sched_.Delta;
  std::vector<CutData> cuts;
  std::vector<double> kappas;
  for (const Slice& sl : z.chosen) {
    cuts.push_back(prepare_cut(s, sl, calc_, oracle_));
    kappas.push_back(cuts.back().kappa);
    if (node) {
      TraceNode k;
      k.callee = "kappa";
      k.branch = "kappa";
      k.dimension = D;
      k.width = sl.width();
      k.delta = eps;
      k.value = cuts.back().kappa;
      t.add(std::move(k));
    }
  }

  auto call_rec = [&](const Synthesis& sub, const std::string& branch) {
    TraceNode c;
    c.branch = branch;
    const double v = a_recursive(sub, eta - 1, eps, D, heavy, node ? &c : nullptr);
    if (node) t.add(std::move(c));
    return v;
  };
  std::vector<double> left(Delta), right(Delta), single(Delta);
  for (int i = 0; i < Delta; ++i) {
    left[i] = call_rec(left_child(s, cuts[i]), "left");
    right[i] = call_rec(right_child(s, cuts[i]), "right");
    single[i] = left[i] * right[i];
  }

  std::map<std::pair<int, int>, double> dbl;
  std::map<SigmaKey, double> multi;
  const double sigma_eps = e3(eps, Delta);
  for (int i = 0; i < Delta; ++i)
    for (int j = i + 1; j < Delta; ++j) {
      const Synthesis mid = middle_child(s, cuts[i], cuts[j]);
      dbl[{i, j}] = left[i] * call_full(mid, eps, "middle") * right[j];
      for (const auto& sigma : sigma_subsets(i, j)) {
        Synthesis phi = mid;
        for (int k : sigma) phi = insert_cut_projector(phi, z.chosen[k], calc_, oracle_);
        multi[{i, j, sigma}] = left[i] * call_full(phi, sigma_eps, "sigma") * right[j];
      }
    }
  t.value = inclusion_exclusion_combine(single, dbl, multi, kappas, sched_.K, Delta);
  return t.value;
}

EstimateResult estimate(const LatticeCircuit& circuit, const ParameterSchedule& sched,
                        const BaseSolver& base, const CutCalculus& calc,
                        const OracleOptions& oracle) {
  const ValidationReport rep = validate(circuit);
  if (!rep.ok) throw Error("invalid circuit: " + rep.violations.front());
  if (circuit.dimension() != sched.D)
    throw Error("circuit dimension " + std::to_string(circuit.dimension()) +
                " does not match schedule dimension " + std::to_string(sched.D));
  Estimator est(sched, base, calc, oracle);
  EstimateResult r;
  r.value = est.a_full(synthesis_of_circuit(circuit), sched.delta, sched.D, &r.trace);
  return r;
}

}  // namespace geodnc
