#include "treeflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "treeflow/errors.hpp"
#include "treeflow/parallel.hpp"
#include "treeflow/semigroup.hpp"

namespace treeflow {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::mixing: return "satisfied-on-full-sequence";
    case Verdict::satisfied_on_subsequence: return "satisfied-on-subsequence";
    case Verdict::not_satisfied: return "not-satisfied-within-horizon";
    case Verdict::leaf_obstruction: return "not-hypercyclic-leaf-obstruction";
  }
  return "?";
}

std::optional<int> leaf_obstruction(const DirectedTree& tree) {
  return tree.find_leaf();
}

namespace {

constexpr double kTiny = 1e-300;

double grid_min_rho(const WeightFamily& W, int edge, int N) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= N; ++k)
    m = std::min(m, W.eval(edge, static_cast<double>(k) / N));
  return m;
}

double grid_max_rho(const WeightFamily& W, int edge, int N) {
  double m = 0.0;
  for (int k = 0; k <= N; ++k)
    m = std::max(m, W.eval(edge, static_cast<double>(k) / N));
  return m;
}

double holder_sum(const WeightFamily& W, const std::vector<int>& set, double s,
                  double pstar) {
  double sum = 0.0;
  for (int j : set) sum += std::pow(W.eval(j, s), -pstar);
  return sum;
}

// c_n(i): the decay quantity whose vanishing drives the criteria. Extrema over
// s use the closed grid (both edge endpoints included).
double forward_value(const DirectedTree& tree, const WeightFamily& W, double p,
                     int i, int n, int N) {
  std::vector<int> set = tree.reachable_set(i, n);
  if (p == 1.0) {
    double m = std::numeric_limits<double>::infinity();
    for (int j : set) m = std::min(m, grid_min_rho(W, j, N));
    return m;
  }
  double pstar = 1.0 / (p - 1.0);
  double worst = 0.0;
  for (int k = 0; k <= N; ++k)
    worst = std::max(worst, holder_sum(W, set, static_cast<double>(k) / N, pstar));
  return 1.0 / worst;
}

double log_slope(const std::vector<double>& vals) {
  const int n = static_cast<int>(vals.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    double x = k + 1.0;
    double y = std::log(std::max(vals[k], kTiny));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

void criterion_guards(const DirectedTree& tree, double p, int horizon,
                      const LpConfig& cfg) {
  cfg.validate();
  if (!(p >= 1.0) || !std::isfinite(p))
    fail(Errc::InvalidExponent, "p must lie in [1, infinity)");
  if (horizon < 1) throw std::invalid_argument("criterion horizon >= 1");
  if (auto leaf = tree.find_leaf())
    fail(Errc::LeafPresent,
         "edge " + std::to_string(*leaf) + " is a leaf; no criterion applies");
}

}  // namespace

CriterionReport rooted_criterion(const DirectedTree& tree, const WeightFamily& W,
                                 double p, int horizon, const LpConfig& cfg,
                                 double tol_dyn) {
  if (tree.kind() != TreeKind::rooted)
    fail(Errc::NotRooted, "rooted_criterion needs a rooted tree");
  criterion_guards(tree, p, horizon, cfg);

  std::vector<int> probes;
  for (int i = 0; i < tree.edge_count(); ++i)
    if (tree.reachable_within_truncation(i, horizon)) probes.push_back(i);
  if (probes.empty())
    fail(Errc::TruncationExceeded, "no edge can see the full horizon");

  CriterionReport rep;
  rep.p = p;
  rep.kind = TreeKind::rooted;
  rep.horizon = horizon;
  rep.tol_dyn = tol_dyn;
  rep.edges.resize(probes.size());
  parallel_for(static_cast<int>(probes.size()), [&](int idx) {
    EdgeCriterion ec;
    ec.edge = probes[idx];
    ec.forward.resize(horizon);
    for (int n = 1; n <= horizon; ++n)
      ec.forward[n - 1] = forward_value(tree, W, p, ec.edge, n, cfg.N);
    ec.min_forward = *std::min_element(ec.forward.begin(), ec.forward.end());
    ec.slope = log_slope(ec.forward);
    rep.edges[idx] = std::move(ec);
  });

  std::vector<double> d(horizon, 0.0);
  for (const EdgeCriterion& ec : rep.edges)
    for (int k = 0; k < horizon; ++k) d[k] = std::max(d[k], ec.forward[k]);
  for (int n = 1; n <= horizon; ++n)
    if (d[n - 1] < tol_dyn) rep.subsequence.push_back(n);
  bool monotone = true;
  for (int k = 1; k < horizon; ++k)
    if (d[k] > d[k - 1] * (1.0 + 1e-12)) monotone = false;
  if (monotone && d[horizon - 1] < tol_dyn)
    rep.verdict = Verdict::mixing;
  else if (!rep.subsequence.empty())
    rep.verdict = Verdict::satisfied_on_subsequence;
  else
    rep.verdict = Verdict::not_satisfied;
  rep.global_min = std::numeric_limits<double>::infinity();
  for (const EdgeCriterion& ec : rep.edges)
    rep.global_min = std::min(rep.global_min, ec.min_forward);
  return rep;
}

CriterionReport unrooted_criterion(const DirectedTree& tree,
                                   const WeightFamily& W, double p, int horizon,
                                   const LpConfig& cfg, double tol_dyn) {
  if (tree.kind() != TreeKind::unrooted)
    fail(Errc::NotUnrooted, "unrooted_criterion needs an unrooted tree");
  criterion_guards(tree, p, horizon, cfg);

  std::vector<int> probes;
  for (int i = 0; i < tree.edge_count(); ++i) {
    if (tree.depth(i) - horizon < tree.min_depth()) continue;  // no K_horizon
    if (!tree.reachable_within_truncation(i, horizon)) continue;
    probes.push_back(i);
  }
  if (probes.empty())
    fail(Errc::TruncationExceeded,
         "no edge can see the horizon both forward and backward");

  CriterionReport rep;
  rep.p = p;
  rep.kind = TreeKind::unrooted;
  rep.horizon = horizon;
  rep.tol_dyn = tol_dyn;
  rep.edges.resize(probes.size());
  parallel_for(static_cast<int>(probes.size()), [&](int idx) {
    EdgeCriterion ec;
    ec.edge = probes[idx];
    ec.forward.resize(horizon);
    ec.ancestor.resize(horizon);
    for (int n = 1; n <= horizon; ++n) {
      ec.forward[n - 1] = forward_value(tree, W, p, ec.edge, n, cfg.N);
      int K = tree.ancestor(ec.edge, n);
      std::vector<int> sibs = tree.reachable_set(K, n);
      if (p == 1.0) {
        double m = grid_min_rho(W, K, cfg.N);
        for (int j : sibs) m = std::min(m, grid_min_rho(W, j, cfg.N));
        ec.ancestor[n - 1] = m;
      } else {
        double pstar = 1.0 / (p - 1.0);
        double worst = 0.0;
        for (int k = 0; k <= cfg.N; ++k) {
          double s = static_cast<double>(k) / cfg.N;
          worst = std::max(worst, std::pow(W.eval(K, s), -pstar) +
                                      holder_sum(W, sibs, s, pstar));
        }
        ec.ancestor[n - 1] = worst;
      }
    }
    ec.min_forward = *std::min_element(ec.forward.begin(), ec.forward.end());
    ec.slope = log_slope(ec.forward);
    ec.ancestor_slope = log_slope(ec.ancestor);
    rep.edges[idx] = std::move(ec);
  });

  auto anc_ok = [&](double v) {
    return p == 1.0 ? v < tol_dyn : v > 1.0 / tol_dyn;
  };
  for (int n = 1; n <= horizon; ++n) {
    bool ok = true;
    for (const EdgeCriterion& ec : rep.edges)
      if (ec.forward[n - 1] >= tol_dyn || !anc_ok(ec.ancestor[n - 1])) {
        ok = false;
        break;
      }
    if (ok) rep.subsequence.push_back(n);
  }
  if (static_cast<int>(rep.subsequence.size()) == horizon)
    rep.verdict = Verdict::mixing;
  else if (!rep.subsequence.empty())
    rep.verdict = Verdict::satisfied_on_subsequence;
  else
    rep.verdict = Verdict::not_satisfied;
  rep.global_min = std::numeric_limits<double>::infinity();
  for (const EdgeCriterion& ec : rep.edges)
    rep.global_min = std::min(rep.global_min, ec.min_forward);
  return rep;
}

CriterionReport evaluate_criterion(const DirectedTree& tree, const WeightFamily& W,
                                   double p, int horizon, const LpConfig& cfg,
                                   double tol_dyn) {
  if (auto leaf = tree.find_leaf()) {
    CriterionReport rep;
    rep.p = p;
    rep.kind = tree.kind();
    rep.horizon = horizon;
    rep.tol_dyn = tol_dyn;
    rep.verdict = Verdict::leaf_obstruction;
    rep.obstruction = leaf;
    return rep;
  }
  return tree.kind() == TreeKind::rooted
             ? rooted_criterion(tree, W, p, horizon, cfg, tol_dyn)
             : unrooted_criterion(tree, W, p, horizon, cfg, tol_dyn);
}

namespace {

// Worst-case cost of splitting one unit of target mass across `set`:
//   p > 1: sup_s of the attained optimal value (sum rho^{-1/(p-1)})^{1-p};
//   p = 1: the mass sits on one edge, so min_j sup_s rho_j, smallest index
//          winning ties (reported through *arg).
double placement_cost(const WeightFamily& W, const std::vector<int>& set,
                      double p, int N, int* arg = nullptr) {
  if (p == 1.0) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j : set) {
      double v = grid_max_rho(W, j, N);
      if (v < best) {
        best = v;
        best_j = j;
      }
    }
    if (arg) *arg = best_j;
    return best;
  }
  double pstar = 1.0 / (p - 1.0);
  double worst = 0.0;
  for (int k = 0; k <= N; ++k) {
    double s = static_cast<double>(k) / N;
    worst = std::max(worst, std::pow(holder_sum(W, set, s, pstar), 1.0 - p));
  }
  return worst;
}

std::vector<int> nonzero_support(const GridFunction& f) {
  std::vector<int> out;
  for (const auto& [e, row] : f.edges)
    for (double v : row)
      if (v != 0.0) {
        out.push_back(e);
        break;
      }
  return out;
}

// Plant f_src (one row) across `set` through the optimal split, pointwise in
// s for p > 1 and on the single cheapest edge for p = 1. Records the family.
void plant_mass(GridFunction& g, const WeightFamily& W,
                const std::vector<double>& src, const std::vector<int>& set,
                double p, const LpConfig& cfg,
                std::map<int, std::vector<double>>& family_out) {
  const int N = cfg.N;
  if (p == 1.0) {
    int jstar = -1;
    placement_cost(W, set, p, N, &jstar);
    auto& row = g.at(jstar);
    auto& fam = family_out[jstar];
    fam.assign(N, 1.0);
    for (int k = 0; k < N; ++k) row[k] += src[k];
    return;
  }
  std::vector<double> rho(set.size());
  for (int k = 0; k < N; ++k) {
    double s = cfg.s(k);
    for (size_t j = 0; j < set.size(); ++j) rho[j] = W.eval(set[j], s);
    HolderOptimum opt = holder_infimum(rho, p);
    for (size_t j = 0; j < set.size(); ++j) {
      auto& fam = family_out[set[j]];
      if (fam.empty()) fam.assign(N, 0.0);
      fam[k] = opt.family[j];
      g.at(set[j])[k] += src[k] * opt.family[j];
    }
  }
}

}  // namespace

Witness build_witness_rooted(const DirectedTree& tree, const WeightFamily& W,
                             double p, const GridFunction& f1,
                             const GridFunction& f2, double eps,
                             const LpConfig& cfg) {
  if (tree.kind() != TreeKind::rooted)
    fail(Errc::NotRooted, "build_witness_rooted needs a rooted tree");
  LpConfig lc = cfg;
  lc.p = p;
  lc.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("witness eps > 0");

  int N0 = -1;  // T_m f1 = 0 exactly when m > N0
  for (int e : nonzero_support(f1)) N0 = std::max(N0, tree.depth(e));
  std::vector<int> I2 = nonzero_support(f2);

  Witness wit;
  wit.unrooted = false;
  if (I2.empty()) {
    wit.g = f1;
    wit.n = N0 + 2;
    wit.steps_applied = N0 + 1;
    wit.achieved_closeness = 0.0;
    GridFunction img = translate(tree, wit.g, static_cast<double>(wit.steps_applied), lc);
    wit.achieved_target_error = norm(img, tree, W, lc);
    return wit;
  }

  double C = std::numeric_limits<double>::infinity();
  int deepest_target = 0;
  for (int l : I2) {
    C = std::min(C, grid_min_rho(W, l, lc.N));
    deepest_target = std::max(deepest_target, tree.depth(l));
  }
  double nf2 = norm(f2, tree, W, lc);
  double delta = std::pow(eps, p) * C / std::pow(nf2, p);

  const int m_lo = std::max(N0 + 1, 0);
  const int m_hi = tree.max_depth() - deepest_target;
  if (m_lo > m_hi)
    fail(Errc::TruncationExceeded,
         "no admissible depth left between supp(f1) and the frontier");

  for (int m = m_lo; m <= m_hi; ++m) {
    double worst = 0.0;
    for (int l : I2)
      worst = std::max(worst, placement_cost(W, tree.reachable_set(l, m), p, lc.N));
    if (!(worst < delta)) continue;

    GridFunction g = f1;
    std::map<int, std::vector<double>> nu;
    for (int l : I2)
      plant_mass(g, W, *f2.find(l), tree.reachable_set(l, m), p, lc, nu);
    double closeness = norm(subtract(g, f1), tree, W, lc);
    if (!(closeness < eps)) continue;  // quadrature-level guard; never expected
    GridFunction img = translate(tree, g, static_cast<double>(m), lc);
    wit.g = std::move(g);
    wit.n = m + 1;
    wit.steps_applied = m;
    wit.achieved_closeness = closeness;
    wit.achieved_target_error = norm(subtract(img, f2), tree, W, lc);
    wit.nu = std::move(nu);
    return wit;
  }
  fail(Errc::CriterionNotMet,
       "no depth within the truncation brings the split cost below delta");
}

namespace {

// Component classes among `edges`, each class sorted ascending. Classes that
// cannot be decided inside the truncation abort the normalization.
std::vector<std::vector<int>> class_groups(const DirectedTree& tree,
                                           const std::vector<int>& edges) {
  std::vector<std::vector<int>> groups;
  for (int e : edges) {
    bool placed = false;
    for (auto& grp : groups) {
      bool same = false;
      try {
        same = tree.same_component(grp.front(), e, tree.edge_count());
      } catch (const Error& err) {
        if (err.code() == Errc::TruncationExceeded)
          fail(Errc::SupportNormalizationFailed,
               "component classes undecidable within the truncation");
        throw;
      }
      if (same) {
        grp.push_back(e);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({e});
  }
  return groups;
}

// Round-robin inside each class: piece r takes the r-th member, so every
// piece holds at most one edge per class.
std::vector<std::vector<int>> split_support(const DirectedTree& tree,
                                            const std::vector<int>& edges) {
  std::vector<std::vector<int>> pieces;
  for (const auto& grp : class_groups(tree, edges)) {
    for (size_t r = 0; r < grp.size(); ++r) {
      if (pieces.size() <= r) pieces.emplace_back();
      pieces[r].push_back(grp[r]);
    }
  }
  return pieces;
}

}  // namespace

Witness build_witness_unrooted(const DirectedTree& tree, const WeightFamily& W,
                               double p, const GridFunction& f1,
                               const GridFunction& f2, double eps,
                               const LpConfig& cfg) {
  if (tree.kind() != TreeKind::unrooted)
    fail(Errc::NotUnrooted, "build_witness_unrooted needs an unrooted tree");
  LpConfig lc = cfg;
  lc.p = p;
  lc.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("witness eps > 0");

  std::vector<int> I1 = nonzero_support(f1);
  std::vector<int> I2 = nonzero_support(f2);

  Witness wit;
  wit.unrooted = true;
  if (I1.empty() && I2.empty()) {
    wit.g = GridFunction(lc.N);
    wit.n = 1;
    wit.steps_applied = 1;
    return wit;
  }

  std::vector<std::vector<int>> pieces1 = split_support(tree, I1);
  std::vector<std::vector<int>> pieces2 = split_support(tree, I2);
  const int R = static_cast<int>(std::max(pieces1.size(), pieces2.size()));
  pieces1.resize(R);
  pieces2.resize(R);
  const double eps_r = eps / R;

  double C1 = std::numeric_limits<double>::infinity();
  for (int e : I1) C1 = std::min(C1, grid_min_rho(W, e, lc.N));
  for (int e : I2) C1 = std::min(C1, grid_min_rho(W, e, lc.N));

  int n_cap = std::numeric_limits<int>::max();
  for (int l : I1) n_cap = std::min(n_cap, tree.depth(l) - tree.min_depth());
  for (int l : I2) n_cap = std::min(n_cap, tree.max_depth() - tree.depth(l));
  if (n_cap < 1)
    fail(Errc::TruncationExceeded,
         "support too close to the truncation boundary for any step count");

  for (int n = 1; n <= n_cap; ++n) {
    // Level-separation condition: forward images of the target support must
    // miss supp(f1), and ancestors of supp(f1) must miss the target support.
    std::set<int> fwd;
    for (int l : I2)
      for (int j : tree.reachable_set(l, n)) fwd.insert(j);
    std::set<int> anc;
    for (int l : I1) anc.insert(tree.ancestor(l, n));
    bool separated = true;
    for (int l : I1)
      if (fwd.count(l)) separated = false;
    for (int l : I2)
      if (anc.count(l)) separated = false;
    if (!separated) continue;

    GridFunction g = f1;
    std::map<int, std::vector<double>> nu, u;
    std::vector<int> J1, J2;
    for (int r = 0; r < R; ++r) {
      double nf1r_p = 0.0;
      for (int l : pieces1[r]) nf1r_p += edge_norm_pow(*f1.find(l), W, l, lc);
      double delta1 = nf1r_p > 0.0
                          ? std::pow(eps_r, p) * C1 / (4.0 * nf1r_p)
                          : std::numeric_limits<double>::infinity();
      for (int l : pieces1[r]) {
        int K = tree.ancestor(l, n);
        if (grid_max_rho(W, K, lc.N) < 2.0 * delta1) {
          J1.push_back(l);  // keep; the translated residual is already cheap
          continue;
        }
        J2.push_back(l);
        std::vector<int> sibs = tree.reachable_set(K, n);
        const std::vector<double>& src = *f1.find(l);
        // Freeze the split at the grid coordinate where it is cheapest.
        if (p == 1.0) {
          int jstar = -1;
          double best = std::numeric_limits<double>::infinity();
          for (int k = 0; k <= lc.N; ++k) {
            double s = static_cast<double>(k) / lc.N;
            for (int j : sibs) {
              double v = W.eval(j, s);
              if (v < best) {
                best = v;
                jstar = j;
              }
            }
          }
          auto& fam = u[jstar];
          fam.assign(lc.N, 1.0);
          auto& row = g.at(jstar);
          for (int k = 0; k < lc.N; ++k) row[k] -= src[k];
        } else {
          double pstar = 1.0 / (p - 1.0);
          int kstar = 0;
          double best = std::numeric_limits<double>::infinity();
          for (int k = 0; k <= lc.N; ++k) {
            double s = static_cast<double>(k) / lc.N;
            double v = std::pow(holder_sum(W, sibs, s, pstar), 1.0 - p);
            if (v < best) {
              best = v;
              kstar = k;
            }
          }
          std::vector<double> rho(sibs.size());
          double sstar = static_cast<double>(kstar) / lc.N;
          for (size_t j = 0; j < sibs.size(); ++j) rho[j] = W.eval(sibs[j], sstar);
          HolderOptimum opt = holder_infimum(rho, p);
          for (size_t j = 0; j < sibs.size(); ++j) {
            auto& fam = u[sibs[j]];
            if (fam.empty()) fam.assign(lc.N, 0.0);
            std::fill(fam.begin(), fam.end(), opt.family[j]);
            auto& row = g.at(sibs[j]);
            for (int k = 0; k < lc.N; ++k) row[k] -= src[k] * opt.family[j];
          }
        }
      }
      for (int l : pieces2[r])
        plant_mass(g, W, *f2.find(l), tree.reachable_set(l, n), p, lc, nu);
    }

    double closeness = norm(subtract(g, f1), tree, W, lc);
    GridFunction img = translate(tree, g, static_cast<double>(n), lc);
    double target_err = norm(subtract(img, f2), tree, W, lc);
    if (closeness < eps && target_err < eps) {
      wit.g = std::move(g);
      wit.n = n;
      wit.steps_applied = n;
      wit.achieved_closeness = closeness;
      wit.achieved_target_error = target_err;
      wit.nu = std::move(nu);
      wit.u = std::move(u);
      wit.J1 = std::move(J1);
      wit.J2 = std::move(J2);
      return wit;
    }
  }
  fail(Errc::CriterionNotMet,
       "no step count within the truncation meets both closeness targets");
}

NegativeCertificate negative_certificate(const DirectedTree& tree,
                                         const WeightFamily& W, double p, int i0,
                                         const std::vector<int>& subsequence,
                                         const LpConfig& cfg, double tol_dyn) {
  LpConfig lc = cfg;
  lc.p = p;
  lc.validate();
  if (i0 < 0 || i0 >= tree.edge_count())
    throw std::invalid_argument("negative_certificate: unknown edge");
  if (subsequence.empty())
    throw std::invalid_argument("negative_certificate: empty subsequence");

  double K = 0.0;
  for (int n : subsequence) {
    if (n < 1) throw std::invalid_argument("subsequence entries >= 1");
    double c = forward_value(tree, W, p, i0, n, lc.N);
    if (c < tol_dyn)
      fail(Errc::CriterionMet,
           "decay quantity dips below threshold at n = " + std::to_string(n));
    std::vector<int> set = tree.reachable_set(i0, n);
    for (int k = 0; k <= lc.N; ++k) {
      double s = static_cast<double>(k) / lc.N;
      double rho0 = W.eval(i0, s);
      if (p == 1.0) {
        double m = std::numeric_limits<double>::infinity();
        for (int j : set) m = std::min(m, W.eval(j, s));
        K = std::max(K, rho0 / m);
      } else {
        double pstar = 1.0 / (p - 1.0);
        K = std::max(K, rho0 * std::pow(holder_sum(W, set, s, pstar), p - 1.0));
      }
    }
  }

  NegativeCertificate cert;
  cert.K = K;
  cert.gap = 0.5;
  cert.g = GridFunction(lc.N);
  auto& row = cert.g.at(i0);
  const double amp = std::pow(2.0, 1.0 - 1.0 / p);
  for (int k = 0; k < lc.N; ++k)
    row[k] = amp / std::pow(W.eval(i0, lc.s(k)), 1.0 / p);
  return cert;
}

OrbitProbeResult orbit_density_probe(const DirectedTree& tree,
                                     const WeightFamily& W, double p,
                                     uint64_t seed,
                                     const std::vector<GridFunction>& targets,
                                     int horizon, const LpConfig& cfg,
                                     double tol_dyn) {
  LpConfig lc = cfg;
  lc.p = p;
  lc.validate();
  if (horizon < 1) throw std::invalid_argument("orbit probe horizon >= 1");
  CriterionReport rep = evaluate_criterion(tree, W, p, horizon, lc, tol_dyn);
  if (rep.verdict == Verdict::not_satisfied ||
      rep.verdict == Verdict::leaf_obstruction)
    fail(Errc::CriterionNotMet, "orbit probe needs a satisfied criterion");

  std::mt19937_64 rng(seed);
  auto unit = [&]() { return (rng() >> 11) * 0x1.0p-53; };
  GridFunction g(lc.N);
  auto& start = g.at(tree.base_edge());
  for (int k = 0; k < lc.N; ++k) start[k] = 0.2 * unit() - 0.1;

  for (size_t r = 0; r < targets.size(); ++r) {
    double eps_r = 0.25 * std::pow(2.0, -static_cast<double>(r));
    Witness wit = tree.kind() == TreeKind::rooted
                      ? build_witness_rooted(tree, W, p, g, targets[r], eps_r, lc)
                      : build_witness_unrooted(tree, W, p, g, targets[r], eps_r, lc);
    g = std::move(wit.g);
  }

  OrbitProbeResult result;
  result.approaches.resize(targets.size());
  for (size_t r = 0; r < targets.size(); ++r)
    result.approaches[r] = OrbitApproach{
        static_cast<int>(r), 0, std::numeric_limits<double>::infinity()};
  for (int t = 0; t <= horizon; ++t) {
    GridFunction img = translate(tree, g, static_cast<double>(t), lc);
    for (size_t r = 0; r < targets.size(); ++r) {
      double d = norm(subtract(img, targets[r]), tree, W, lc);
      if (d < result.approaches[r].distance) {
        result.approaches[r].distance = d;
        result.approaches[r].best_t = t;
      }
    }
  }
  result.g = std::move(g);
  return result;
}

}  // namespace treeflow
