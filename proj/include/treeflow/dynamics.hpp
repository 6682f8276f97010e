#pragma once

#include <map>
#include <optional>
#include <vector>

#include "treeflow/lp_space.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace treeflow {

// Verdicts are horizon-qualified: "mixing" asserts the tested quantity sits
// below threshold with a monotone trend across the whole horizon, never a
// statement about the untested tail.
enum class Verdict {
  mixing,                    // satisfied on the full tested sequence
  satisfied_on_subsequence,  // recorded indices only
  not_satisfied,             // nothing within the horizon
  leaf_obstruction,          // a leaf edge forces (T_t f)_leaf = 0 for t > 1
};

const char* verdict_name(Verdict v);

struct EdgeCriterion {
  int edge = -1;
  std::vector<double> forward;   // c_n, n = 1..horizon
  std::vector<double> ancestor;  // unrooted only; the displayed dual quantity
  double min_forward = 0.0;
  double slope = 0.0;           // least-squares slope of log c_n vs n
  double ancestor_slope = 0.0;  // unrooted; 0 otherwise
};

struct CriterionReport {
  double p = 2.0;
  TreeKind kind = TreeKind::rooted;
  int horizon = 0;
  double tol_dyn = 1e-3;
  Verdict verdict = Verdict::not_satisfied;
  std::vector<EdgeCriterion> edges;  // probes that can see the full horizon
  std::vector<int> subsequence;      // n where the criterion holds at every probe
  double global_min = 0.0;           // min over probes and n of the forward value
  std::optional<int> obstruction;    // leaf id when verdict == leaf_obstruction
};

// Smallest-id leaf (an edge with no children strictly inside the frontier),
// if any. A leaf kills hypercyclicity outright: mass on it cannot be hit.
std::optional<int> leaf_obstruction(const DirectedTree& tree);

// Forward criterion on a rooted tree. For p > 1,
//   c_n(i) = inf_s (sum_{j in M_n(i)} rho_j(s)^{-1/(p-1)})^{-1},
// for p = 1, c_n(i) = min_{j in M_n(i)} inf_s rho_j(s). Probes are the edges
// that can see `horizon` steps down inside the truncation.
CriterionReport rooted_criterion(const DirectedTree& tree, const WeightFamily& W,
                                 double p, int horizon, const LpConfig& cfg,
                                 double tol_dyn = 1e-3);

// Unrooted variant: the same forward quantity plus the ancestor-side one,
//   p > 1: sup_s (rho_{K_n(i)}(s)^{-1/(p-1)} + sum_{j in M_n(K_n(i))} rho_j(s)^{-1/(p-1)})
//   p = 1: inf_s min(rho_{K_n(i)}(s), min_{j in M_n(K_n(i))} rho_j(s)),
// with both required to pass on a common subsequence at every probe.
CriterionReport unrooted_criterion(const DirectedTree& tree, const WeightFamily& W,
                                   double p, int horizon, const LpConfig& cfg,
                                   double tol_dyn = 1e-3);

// Kind dispatcher with the leaf short-circuit in front.
CriterionReport evaluate_criterion(const DirectedTree& tree, const WeightFamily& W,
                                   double p, int horizon, const LpConfig& cfg,
                                   double tol_dyn = 1e-3);

struct Witness {
  GridFunction g;
  int n = 0;              // the selected index
  int steps_applied = 0;  // n-1 on rooted trees, n on unrooted ones
  bool unrooted = false;
  double achieved_closeness = 0.0;     // ||f1 - g||
  double achieved_target_error = 0.0;  // ||T_steps g - f2||
  // Mass-splitting families actually used, sampled on the grid, plus the
  // keep/cancel partition of supp(f1) (unrooted only).
  std::map<int, std::vector<double>> nu;
  std::map<int, std::vector<double>> u;
  std::vector<int> J1, J2;
};

// Transitivity witness on a rooted tree: g agrees with f1 on supp(f1) and
// carries f2 backward to depth n-1 through the optimal mass split, so that
// T_{n-1} g = f2 exactly on samples and ||f1 - g|| < eps.
Witness build_witness_rooted(const DirectedTree& tree, const WeightFamily& W,
                             double p, const GridFunction& f1,
                             const GridFunction& f2, double eps,
                             const LpConfig& cfg);

// Unrooted witness: inputs are split into pieces with at most one supported
// edge per component class, each piece keeps (J1) or cancels (J2) its f1 mass
// through the sibling set of its n-step ancestor and plants f2 at depth +n;
// accepted when ||f1 - g|| < eps and ||T_n g - f2|| < eps by quadrature.
Witness build_witness_unrooted(const DirectedTree& tree, const WeightFamily& W,
                               double p, const GridFunction& f1,
                               const GridFunction& f2, double eps,
                               const LpConfig& cfg);

struct NegativeCertificate {
  GridFunction g;   // 2^{1-1/p} / rho_{i0}^{1/p} on i0
  double gap = 0.0;  // guaranteed ||T_n f - g||^p lower bound (= 1/2)
  double K = 0.0;    // sup over tested (n, s) of the transfer constant
};

// When the forward quantity at i0 stays above threshold along the given n's,
// no small f can be pushed near g: ||T_n f - g||^p >= 1 - K ||f||^p >= 1/2
// whenever ||f||^p < 1/(2K).
NegativeCertificate negative_certificate(const DirectedTree& tree,
                                         const WeightFamily& W, double p, int i0,
                                         const std::vector<int>& subsequence,
                                         const LpConfig& cfg,
                                         double tol_dyn = 1e-3);

struct OrbitApproach {
  int target = 0;  // index into the input list
  int best_t = 0;
  double distance = 0.0;
};

struct OrbitProbeResult {
  GridFunction g;  // the chained witness start vector
  std::vector<OrbitApproach> approaches;
};

// Chains witnesses through the target list from a small seeded start, then
// records each target's best approach distance along the integer-time orbit.
// Distances are reported, not asserted.
OrbitProbeResult orbit_density_probe(const DirectedTree& tree,
                                     const WeightFamily& W, double p,
                                     uint64_t seed,
                                     const std::vector<GridFunction>& targets,
                                     int horizon, const LpConfig& cfg,
                                     double tol_dyn = 1e-3);

}  // namespace treeflow
