#pragma once

#include <map>
#include <optional>
#include <vector>

#include "treeflow/lp_space.hpp"
#include "treeflow/tree.hpp"

namespace treeflow {

enum class WeightRuleKind : uint8_t { constant, exponential, tabulated };

// One admissible shape for rho on a single edge, parametrized by the edge's
// depth. Positive on [0,1] by construction (validated at load).
struct WeightRule {
  WeightRuleKind kind = WeightRuleKind::constant;
  double value = 1.0;          // constant
  double a = 0.0, b = 0.0;     // exponential: exp(a*(depth+s) + b)
  std::vector<double> table;   // tabulated: K+1 samples at j/K, linear in between

  double eval(int depth, double s) const;
  void validate() const;  // Error(NonPositiveWeight / InvalidSpec)

  static WeightRule constant_rule(double c) {
    WeightRule r; r.kind = WeightRuleKind::constant; r.value = c; return r;
  }
  static WeightRule exponential_rule(double a, double b) {
    WeightRule r; r.kind = WeightRuleKind::exponential; r.a = a; r.b = b; return r;
  }
  static WeightRule tabulated_rule(std::vector<double> samples) {
    WeightRule r; r.kind = WeightRuleKind::tabulated; r.table = std::move(samples);
    return r;
  }
};

// rho: one positive weight per edge, resolved per edge > per depth > default.
// Holds a pointer to the tree it was built against; the tree must outlive it.
class WeightFamily {
 public:
  WeightFamily(const DirectedTree& tree, WeightRule default_rule);

  void set_depth_rule(int depth, WeightRule rule);
  void set_edge_rule(int edge, WeightRule rule);

  double eval(int edge, double s) const;
  const DirectedTree& tree() const { return *tree_; }

  static WeightFamily constant(const DirectedTree& t, double c) {
    return WeightFamily(t, WeightRule::constant_rule(c));
  }
  static WeightFamily exponential(const DirectedTree& t, double a, double b = 0.0) {
    return WeightFamily(t, WeightRule::exponential_rule(a, b));
  }

 private:
  const WeightRule& rule_for(int edge) const;

  const DirectedTree* tree_;
  WeightRule default_rule_;
  std::map<int, WeightRule> depth_rules_;
  std::map<int, WeightRule> edge_rules_;
};

// Optimal split of unit mass across weights: minimizes sum |v_j|^p rho_j
// subject to sum v_j = 1, v_j >= 0.
//   p > 1: value = (sum rho_j^{-1/(p-1)})^{1-p}, v_j proportional to
//          rho_j^{-1/(p-1)} (the infimum is attained);
//   p = 1: value = min_j rho_j, all mass on the smallest-index argmin.
// Throws Error(InvalidExponent) for p < 1, std::invalid_argument when some
// rho_j <= 0 or the list is empty.
struct HolderOptimum {
  double value = 0.0;
  std::vector<double> family;
};
HolderOptimum holder_infimum(const std::vector<double>& rho, double p);

// inf over j in M_n(i) of rho_j(s); +infinity when the set is empty (below a
// leaf). Throws TruncationExceeded when M_n(i) is cut off.
double min_weight(const DirectedTree& tree, const WeightFamily& W, int i, int n,
                  double s);

struct AdmissibilityViolation {
  int edge = -1;
  double t = 0.0;
  double s = 0.0;
  double ratio = 0.0;
};

struct AdmissibilityReport {
  double p = 2.0;
  double M = 1.0;
  double w = 0.0;
  bool admissible = false;
  double worst_ratio = 0.0;   // max over tested (i,t,s) of LHS/RHS
  long tested = 0;            // number of (i,t,s) triples actually evaluated
  std::optional<AdmissibilityViolation> violation;  // first in scan order
};

// Tests the translation-boundedness inequality for (M, w) over every
// materialized edge, every t in t_grid and s on the closed N+1-point grid:
//   p  = 1: rho_i(s) <= M e^{wt} inf_{j in M_n(i)} rho_j(s+t-n)
//   p  > 1: (sum_{j in M_n(i)} rho_j(s+t-n)^{-1/(p-1)})^{p-1} <= M^p e^{pwt}/rho_i(s)
// with n = floor(s+t). Triples whose reachable set is cut off are skipped; a
// t with no testable edge at all raises TruncationExceeded. Requires M >= 1.
AdmissibilityReport check_admissibility(const DirectedTree& tree,
                                        const WeightFamily& W, double p, double M,
                                        double w, const std::vector<double>& t_grid,
                                        const LpConfig& cfg);

struct AdmissibilityFit {
  double M = 1.0;
  double w = 0.0;
};

// Searches for the smallest growth bound w (coarse log grid, then bisection)
// such that the needed constant M(w) = max over tested t of the raw ratio
// times e^{-wt} stabilizes over the first half of the horizon instead of
// growing through it; M is derived from the winning w. nullopt when the
// ratios outgrow every tested exponential.
std::optional<AdmissibilityFit> fit_admissibility(const DirectedTree& tree,
                                                  const WeightFamily& W, double p,
                                                  int horizon, const LpConfig& cfg);

// Materializes the boundedness counterexample at (i0, t0), t0 grid-aligned:
// support on the single worst violating descendant j0 of i0 (p = 1: samples
// 1/rho_{j0}; p > 1: the holder_infimum family across M_n(i0)) placed on the
// violating cells. The result satisfies ||T_{t0} f|| > M e^{w t0} ||f|| at
// quadrature level. Throws Error(NoViolation) when (i0, t0) admits none.
GridFunction build_norm_violator(const DirectedTree& tree, const WeightFamily& W,
                                 double p, double M, double w, int i0, double t0,
                                 const LpConfig& cfg);

}  // namespace treeflow
