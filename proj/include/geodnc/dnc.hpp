#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geodnc/synthesis.hpp"
#include "geodnc/trace.hpp"

namespace geodnc {

enum class Profile { Desk, Paper };

Profile parse_profile(const std::string& name);
std::string to_string(Profile p);

/// Optional replacements for schedule fields. Under the paper profile the
/// derived widths (w0, z_width) follow overridden Delta and h.
struct ScheduleOverrides {
  std::optional<int> h, Delta, K, T, eta, w0, slice_width, max_gap, z_width;
  std::optional<double> eps_factor;  // desk profile: eps = eps_factor * delta
};

struct ParameterSchedule {
  Profile profile = Profile::Desk;
  int n = 0, d = 1, D = 3;
  double delta = 0.1;
  double eps = 0.025;
  int h = 1, eta = 1, Delta = 2, K = 2, T = 2;
  int w0 = 10, slice_width = 2, max_gap = 0, z_width = 10;
  double eps_factor = 0.25;
  std::optional<int> eta_override;

  /// epsilon attached to an a_full call at accuracy delta.
  double eps_for(double delta) const;
  /// eta_D = ceil(log n / (D log(4/3))) unless overridden.
  int eta_for(int D) const;
};

ParameterSchedule schedule(int n, int d, int D, double delta, Profile profile,
                           const ScheduleOverrides& overrides = {});
nlohmann::json to_json(const ParameterSchedule& s);

/// Base-case solver for two-dimensional syntheses.
using BaseSolver = std::function<double(const Synthesis&, double)>;
BaseSolver exact_base(OracleOptions opts = {});

/// Slice-weight threshold separating heavy from light slices:
/// midpoint of 2^{log(delta)/(2h)} and 2^{log(delta)/h}.
double heavy_threshold(double delta, int h);
/// 1 / n^{log^2 n}; at or below this the driver brute-forces.
double brute_force_threshold(int n);

/// Slices of the schedule's width tiling [lo, hi) along `axis`, anchored at lo.
std::vector<Slice> slices_in_range(int lo, int hi, int axis, int depth,
                                   const ParameterSchedule& sched);

struct HeavyResult {
  std::vector<Slice> heavy;
  bool enough = false;
  std::vector<double> estimates;  // one per input slice
  double threshold = 0.0;
};

struct RegionZ {
  Slice z;
  std::vector<Slice> chosen;
};

/// Z of width z_width centred on the midpoint of [lo, hi); chosen = the
/// Delta left-most heavy slices lying inside both Z and [lo, hi).
RegionZ select_region(int lo, int hi, int axis, const ParameterSchedule& sched,
                      const std::vector<Slice>& heavy);
RegionZ select_region_Z(const Synthesis& s, const ParameterSchedule& sched,
                        const std::vector<Slice>& heavy);

/// Key of an Eq. (4) term: cuts i < j (0-based) and sigma within (i, j).
struct SigmaKey {
  int i = 0, j = 0;
  std::vector<int> sigma;
  friend auto operator<=>(const SigmaKey&, const SigmaKey&) = default;
};

/// Nonempty subsets of {i+1, ..., j-1} in lexicographic order.
std::vector<std::vector<int>> sigma_subsets(int i, int j);

/// single[i] = A(S_{L,i}) A(S_{i,R}); dbl[(i,j)] = A(S_{L,i}) A(S_{i,j}) A(S_{j,R});
/// multi[key] = A(S_{L,i}) A(phi_sigma) A(S_{j,R}).
/// Returns sum_i single_i / k_i^{4K+1} - sum_{i<j} dbl_ij / (k_i k_j)^{4K+1}
///   + sum_{j >= i+2} sum_sigma (-1)^{|sigma|+1} multi / (k_i k_j)^{4K+1}.
double inclusion_exclusion_combine(const std::vector<double>& single,
                                   const std::map<std::pair<int, int>, double>& dbl,
                                   const std::map<SigmaKey, double>& multi,
                                   const std::vector<double>& kappas, int K, int Delta);

/// Called once per classified slice with the synthesis it was cut from.
struct SliceClassification {
  const Synthesis* synthesis = nullptr;
  Slice slice;
  double estimate = 0.0;
  double threshold = 0.0;
  bool heavy = false;
};
using ClassificationObserver = std::function<void(const SliceClassification&)>;

/// Algorithms 1 and 2 with shared configuration.
class Estimator {
 public:
  Estimator(ParameterSchedule sched, BaseSolver base, CutCalculus calc = {},
            OracleOptions oracle = {});

  /// Algorithm 1. Fills `node` when given.
  double a_full(const Synthesis& s, double delta, int D, TraceNode* node = nullptr) const;
  /// Algorithm 2 at accuracy eps.
  double a_recursive(const Synthesis& s, int eta, double eps, int D,
                     const std::vector<Slice>& heavy, TraceNode* node = nullptr) const;
  HeavyResult heavy_slices(const Synthesis& s, const std::vector<Slice>& slices, double delta,
                           int D, TraceNode* node = nullptr) const;

  const ParameterSchedule& schedule() const { return sched_; }
  const CutCalculus& calculus() const { return calc_; }
  void set_observer(ClassificationObserver obs) { observer_ = std::move(obs); }

 private:
  ParameterSchedule sched_;
  BaseSolver base_;
  CutCalculus calc_;
  OracleOptions oracle_;
  ClassificationObserver observer_;
};

struct EstimateResult {
  double value = 0.0;
  TraceNode trace;
};

/// Runs a_full on the trivial synthesis of a circuit.
EstimateResult estimate(const LatticeCircuit& circuit, const ParameterSchedule& sched,
                        const BaseSolver& base, const CutCalculus& calc = {},
                        const OracleOptions& oracle = {});

}  // namespace geodnc
