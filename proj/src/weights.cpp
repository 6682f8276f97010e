#include "treeflow/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treeflow/parallel.hpp"

namespace treeflow {

double WeightRule::eval(int depth, double s) const {
  switch (kind) {
    case WeightRuleKind::constant:
      return value;
    case WeightRuleKind::exponential:
      return std::exp(a * (depth + s) + b);
    case WeightRuleKind::tabulated: {
      const int K = static_cast<int>(table.size()) - 1;
      double u = s * K;
      int k0 = std::min(static_cast<int>(std::floor(u)), K - 1);
      k0 = std::max(k0, 0);
      double frac = u - k0;
      return table[k0] + frac * (table[k0 + 1] - table[k0]);
    }
  }
  return value;
}

void WeightRule::validate() const {
  switch (kind) {
    case WeightRuleKind::constant:
      if (!(value > 0.0) || !std::isfinite(value))
        fail(Errc::NonPositiveWeight, "constant weight must be positive");
      break;
    case WeightRuleKind::exponential:
      if (!std::isfinite(a) || !std::isfinite(b))
        fail(Errc::InvalidSpec, "exponential weight parameters must be finite");
      break;
    case WeightRuleKind::tabulated:
      if (table.size() < 2)
        fail(Errc::InvalidSpec,
             "tabulated weight needs samples at both edge endpoints");
      for (double v : table)
        if (!(v > 0.0) || !std::isfinite(v))
          fail(Errc::NonPositiveWeight, "tabulated weight must be positive");
      break;
  }
}

WeightFamily::WeightFamily(const DirectedTree& tree, WeightRule default_rule)
    : tree_(&tree), default_rule_(std::move(default_rule)) {
  default_rule_.validate();
}

void WeightFamily::set_depth_rule(int depth, WeightRule rule) {
  rule.validate();
  depth_rules_[depth] = std::move(rule);
}

void WeightFamily::set_edge_rule(int edge, WeightRule rule) {
  rule.validate();
  edge_rules_[edge] = std::move(rule);
}

const WeightRule& WeightFamily::rule_for(int edge) const {
  if (auto it = edge_rules_.find(edge); it != edge_rules_.end())
    return it->second;
  if (auto it = depth_rules_.find(tree_->depth(edge)); it != depth_rules_.end())
    return it->second;
  return default_rule_;
}

double WeightFamily::eval(int edge, double s) const {
  return rule_for(edge).eval(tree_->depth(edge), s);
}

HolderOptimum holder_infimum(const std::vector<double>& rho, double p) {
  if (rho.empty())
    throw std::invalid_argument("holder_infimum: empty weight list");
  if (!(p >= 1.0) || !std::isfinite(p))
    fail(Errc::InvalidExponent, "holder_infimum needs p in [1, infinity)");
  for (double r : rho)
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("holder_infimum: weights must be positive");

  HolderOptimum out;
  out.family.assign(rho.size(), 0.0);
  if (p == 1.0) {
    size_t arg = 0;
    for (size_t j = 1; j < rho.size(); ++j)
      if (rho[j] < rho[arg]) arg = j;
    out.value = rho[arg];
    out.family[arg] = 1.0;
    return out;
  }
  const double q = 1.0 / (p - 1.0);
  double denom = 0.0;
  for (size_t j = 0; j < rho.size(); ++j) {
    out.family[j] = std::pow(rho[j], -q);
    denom += out.family[j];
  }
  for (double& v : out.family) v /= denom;
  out.value = std::pow(denom, 1.0 - p);
  return out;
}

double min_weight(const DirectedTree& tree, const WeightFamily& W, int i, int n,
                  double s) {
  std::vector<int> js = tree.reachable_set(i, n);
  double best = std::numeric_limits<double>::infinity();
  for (int j : js) best = std::min(best, W.eval(j, s));
  return best;
}

namespace {

// Raw size of the boundedness ratio at (i, t, s) with M = 1, w = 0, already
// taken to the power 1/p so it scales like M. Negative when untestable.
struct ScanPoint {
  double ratio = -1.0;
  double s = 0.0;
};

// LHS/RHS with the (M, w) factors stripped out:
//   p  = 1: rho_i(s) / min_j rho_j(u)
//   p  > 1: [rho_i(s) * (sum_j rho_j(u)^{-1/(p-1)})^{p-1}]^{1/p}
// so that the admissibility ratio equals (raw / (M e^{wt}))^{p-ish} uniformly:
// raw <= M e^{wt} <=> the inequality holds at (i, t, s).
double raw_ratio(const DirectedTree& tree, const WeightFamily& W, double p,
                 int i, const std::vector<int>& reach, double s, double u) {
  (void)tree;
  if (reach.empty()) return -1.0;  // vacuous below a leaf
  double rho_i = W.eval(i, s);
  if (p == 1.0) {
    double m = std::numeric_limits<double>::infinity();
    for (int j : reach) m = std::min(m, W.eval(j, u));
    return rho_i / m;
  }
  double q = 1.0 / (p - 1.0);
  double sum = 0.0;
  for (int j : reach) sum += std::pow(W.eval(j, u), -q);
  return std::pow(rho_i * std::pow(sum, p - 1.0), 1.0 / p);
}

struct EdgeScan {
  double worst = -1.0;           // max raw ratio over s
  long tested = 0;
  double first_bad_s = -1.0;     // smallest s with a violation, else -1
  double first_bad_ratio = 0.0;
};

EdgeScan scan_edge(const DirectedTree& tree, const WeightFamily& W, double p,
                   double bound /* M e^{wt}, violation threshold */, int i,
                   double t, const LpConfig& cfg) {
  EdgeScan out;
  // n = floor(s+t) takes at most two values on s in [0,1].
  int n_lo = static_cast<int>(std::floor(t));
  std::vector<int> reach[2];
  bool have[2] = {false, false};
  for (int k = 0; k <= cfg.N; ++k) {
    double s = static_cast<double>(k) / cfg.N;
    int n = static_cast<int>(std::floor(s + t));
    double u = s + t - n;
    int slot = n - n_lo;
    if (slot < 0 || slot > 1) continue;  // floating fringe; skip
    if (!have[slot]) {
      if (!tree.reachable_within_truncation(i, n)) {
        reach[slot].clear();
        reach[slot].push_back(-1);  // marker: untestable
      } else {
        reach[slot] = tree.reachable_set(i, n);
      }
      have[slot] = true;
    }
    if (!reach[slot].empty() && reach[slot][0] == -1) continue;
    double r = raw_ratio(tree, W, p, i, reach[slot], s, u);
    if (r < 0.0) continue;  // vacuous
    ++out.tested;
    if (r > out.worst) out.worst = r;
    if (out.first_bad_s < 0.0 && r > bound * (1.0 + cfg.tol)) {
      out.first_bad_s = s;
      out.first_bad_ratio = r / bound;
    }
  }
  return out;
}

}  // namespace

AdmissibilityReport check_admissibility(const DirectedTree& tree,
                                        const WeightFamily& W, double p, double M,
                                        double w, const std::vector<double>& t_grid,
                                        const LpConfig& cfg) {
  cfg.validate();
  if (!(p >= 1.0) || !std::isfinite(p))
    fail(Errc::InvalidExponent, "p must lie in [1, infinity)");
  if (!(M >= 1.0)) throw std::invalid_argument("check_admissibility: M >= 1");
  AdmissibilityReport rep;
  rep.p = p;
  rep.M = M;
  rep.w = w;
  rep.worst_ratio = 0.0;

  const int m = tree.edge_count();
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw std::invalid_argument("t_grid entries must be >= 0");
    double bound = M * std::exp(w * t);
    std::vector<EdgeScan> slots(m);
    parallel_for(m, [&](int i) { slots[i] = scan_edge(tree, W, p, bound, i, t, cfg); });
    long tested_at_t = 0;
    for (int i = 0; i < m; ++i) {
      const EdgeScan& es = slots[i];
      tested_at_t += es.tested;
      if (es.worst >= 0.0) rep.worst_ratio = std::max(rep.worst_ratio, es.worst / bound);
      if (es.first_bad_s >= 0.0 && !rep.violation) {
        rep.violation = AdmissibilityViolation{i, t, es.first_bad_s, es.first_bad_ratio};
      }
    }
    if (tested_at_t == 0)
      fail(Errc::TruncationExceeded,
           "no edge can see n = floor(s + t) steps at t = " + std::to_string(t));
    rep.tested += tested_at_t;
  }
  rep.admissible = rep.worst_ratio <= 1.0 + cfg.tol;
  return rep;
}

namespace {

// Per-t needed M at w = 0 over the testable part of the tree; element 0 is
// t = 0 where the identity forces M >= 1.
struct RatioEnvelope {
  std::vector<double> t;
  std::vector<double> raw;  // max raw ratio at that t
};

RatioEnvelope ratio_envelope(const DirectedTree& tree, const WeightFamily& W,
                             double p, int horizon, const LpConfig& cfg) {
  RatioEnvelope env;
  env.t.push_back(0.0);
  env.raw.push_back(1.0);
  const int m = tree.edge_count();
  int max_steps = tree.max_depth() - tree.min_depth();
  for (int j = 1; j <= 4 * horizon; ++j) {
    double t = 0.25 * j;
    if (std::floor(t) > max_steps) break;  // nothing testable further out
    std::vector<double> worst(m, -1.0);
    parallel_for(m, [&](int i) {
      worst[i] = scan_edge(tree, W, p, std::numeric_limits<double>::infinity(),
                           i, t, cfg).worst;
    });
    double best = -1.0;
    for (double v : worst) best = std::max(best, v);
    if (best < 0.0) break;
    env.t.push_back(t);
    env.raw.push_back(best);
  }
  return env;
}

// w is acceptable when the needed-M envelope peaks in the first half of the
// tested horizon rather than still growing through the end.
bool envelope_stabilizes(const RatioEnvelope& env, double w) {
  double t_max = env.t.back();
  double full = 0.0, first_half = 0.0;
  for (size_t k = 0; k < env.t.size(); ++k) {
    double needed = env.raw[k] * std::exp(-w * env.t[k]);
    full = std::max(full, needed);
    if (env.t[k] <= 0.5 * t_max) first_half = std::max(first_half, needed);
  }
  return full <= first_half * (1.0 + 1e-9) && full <= 1e12;
}

}  // namespace

std::optional<AdmissibilityFit> fit_admissibility(const DirectedTree& tree,
                                                  const WeightFamily& W, double p,
                                                  int horizon, const LpConfig& cfg) {
  cfg.validate();
  if (horizon < 1) throw std::invalid_argument("fit_admissibility: horizon >= 1");
  RatioEnvelope env = ratio_envelope(tree, W, p, horizon, cfg);
  if (env.t.size() < 2) return std::nullopt;  // nothing testable beyond t = 0

  const std::vector<double> grid = {-16, -8, -4, -2, -1, -0.5, -0.25, -0.125,
                                    0,   0.125, 0.25, 0.5, 1, 2, 4, 8, 16};
  double passing = std::numeric_limits<double>::quiet_NaN();
  double failing = std::numeric_limits<double>::quiet_NaN();
  for (double wv : grid) {
    if (envelope_stabilizes(env, wv)) {
      passing = wv;
      break;
    }
    failing = wv;
  }
  if (std::isnan(passing)) return std::nullopt;
  if (!std::isnan(failing)) {
    for (int it = 0; it < 80 && passing - failing > 1e-9; ++it) {
      double mid = 0.5 * (passing + failing);
      (envelope_stabilizes(env, mid) ? passing : failing) = mid;
    }
  }
  AdmissibilityFit fit;
  fit.w = passing;
  double needed = 0.0;
  for (size_t k = 0; k < env.t.size(); ++k)
    needed = std::max(needed, env.raw[k] * std::exp(-fit.w * env.t[k]));
  fit.M = std::max(1.0, needed);
  return fit;
}

GridFunction build_norm_violator(const DirectedTree& tree, const WeightFamily& W,
                                 double p, double M, double w, int i0, double t0,
                                 const LpConfig& cfg) {
  cfg.validate();
  if (!(p >= 1.0) || !std::isfinite(p))
    fail(Errc::InvalidExponent, "p must lie in [1, infinity)");
  const double mN = t0 * cfg.N;
  if (std::abs(mN - std::llround(mN)) > 1e-12)
    throw std::invalid_argument("build_norm_violator: t0 must be grid-aligned");
  const long long shift = std::llround(mN);
  if (shift < 0) throw std::invalid_argument("build_norm_violator: t0 >= 0");
  const double bound = M * std::exp(w * t0);

  // Locate violations on the open sample grid; each sample's mass travels to
  // u = s + t0 - n which is again a sample. Track the worst branch.
  struct Cell {
    int k;      // source sample index
    int u_idx;  // destination sample index
    double u;
  };
  int best_n = -1;
  double best_ratio = 0.0;
  std::map<int, std::vector<Cell>> cells_by_n;
  std::map<int, std::vector<int>> reach_by_n;
  bool any_testable = false;
  for (int k = 0; k < cfg.N; ++k) {
    long long pos = k + shift;
    int n = static_cast<int>(pos / cfg.N);
    int u_idx = static_cast<int>(pos % cfg.N);
    double s = cfg.s(k);
    double u = cfg.s(u_idx);
    if (!reach_by_n.count(n)) {
      reach_by_n[n] = tree.reachable_within_truncation(i0, n)
                          ? tree.reachable_set(i0, n)
                          : std::vector<int>{-1};
    }
    const auto& reach = reach_by_n[n];
    if (!reach.empty() && reach[0] == -1) continue;  // cut off: skip branch
    any_testable = true;
    double r = raw_ratio(tree, W, p, i0, reach, s, u);
    if (r < 0.0) continue;
    if (r > bound * (1.0 + cfg.tol)) {
      cells_by_n[n].push_back(Cell{k, u_idx, u});
      if (r > best_ratio) {
        best_ratio = r;
        best_n = n;
      }
    }
  }
  if (!any_testable)
    fail(Errc::TruncationExceeded,
         "i0 cannot see floor(s + t0) steps inside the truncation");
  if (best_n < 0)
    fail(Errc::NoViolation, "the (M, w) inequality holds at (i0, t0) on the grid");

  const auto& reach = reach_by_n[best_n];
  GridFunction f(cfg.N);
  if (p == 1.0) {
    // All mass on the single worst descendant.
    int j_best = -1;
    double worst = 0.0;
    for (const Cell& c : cells_by_n[best_n]) {
      double rho_i = W.eval(i0, cfg.s(c.k));
      for (int j : reach) {
        double r = rho_i / W.eval(j, c.u);
        if (r > worst) {
          worst = r;
          j_best = j;
        }
      }
    }
    auto& row = f.at(j_best);
    for (const Cell& c : cells_by_n[best_n]) {
      double rho_i = W.eval(i0, cfg.s(c.k));
      if (rho_i / W.eval(j_best, c.u) > bound * (1.0 + cfg.tol))
        row[c.u_idx] = 1.0 / W.eval(j_best, c.u);
    }
    f.prune();
    if (f.is_zero())
      fail(Errc::NoViolation, "no single descendant violates on its own");
    return f;
  }
  // p > 1: the optimal unit-mass family across M_n(i0) on each violating cell.
  for (const Cell& c : cells_by_n[best_n]) {
    std::vector<double> rho(reach.size());
    for (size_t j = 0; j < reach.size(); ++j) rho[j] = W.eval(reach[j], c.u);
    HolderOptimum opt = holder_infimum(rho, p);
    for (size_t j = 0; j < reach.size(); ++j)
      f.at(reach[j])[c.u_idx] = opt.family[j];
  }
  return f;
}

}  // namespace treeflow
