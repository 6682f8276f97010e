#include "treeflow/chain_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "treeflow/errors.hpp"

namespace treeflow {

namespace {

void require_chain(const DirectedTree& tree) {
  if (!tree.is_chain())
    fail(Errc::NotAChain, "the concatenation isometry needs a chain tree");
}

}  // namespace

HalfLineFunction phi(const DirectedTree& tree, const GridFunction& f,
                     const LpConfig& cfg) {
  require_chain(tree);
  cfg.validate();
  if (f.N != cfg.N && !f.edges.empty())
    throw std::invalid_argument("phi: f sampled on a different grid");

  const int L = tree.max_depth() - tree.min_depth() + 1;
  HalfLineFunction F;
  F.start_level = tree.min_depth();  // depth on the chain is the line coordinate
  F.N = cfg.N;
  F.line = tree.kind() == TreeKind::unrooted;
  F.samples.assign(static_cast<size_t>(L) * cfg.N, 0.0);
  for (const auto& [edge, row] : f.edges) {
    int cell = tree.depth(edge) - tree.min_depth();
    for (int k = 0; k < cfg.N; ++k)
      F.samples[static_cast<size_t>(cell) * cfg.N + k] = row[k];
  }
  return F;
}

double classical_weight(const DirectedTree& tree, const WeightFamily& W,
                        double u) {
  require_chain(tree);
  int level = static_cast<int>(std::floor(u));
  if (level < tree.min_depth() || level > tree.max_depth())
    fail(Errc::TruncationExceeded, "coordinate outside the materialized chain");
  return W.eval(tree.edge_at_level(level), u - level);
}

double classical_norm(const HalfLineFunction& F, const DirectedTree& tree,
                      const WeightFamily& W, const LpConfig& cfg) {
  require_chain(tree);
  cfg.validate();
  const int N = F.N;
  if (N != cfg.N) throw std::invalid_argument("classical_norm: grid mismatch");
  double acc = 0.0;
  for (int cell = 0; cell < F.levels(); ++cell) {
    int depth = F.start_level + cell;
    for (int k = 0; k < N; ++k) {
      double w = 1.0 / N;
      if (cfg.quadrature == Quadrature::trapezoid)
        w = (k == 0 ? 0.5 : k == N - 1 ? 1.5 : 1.0) / N;
      double v = F.samples[static_cast<size_t>(cell) * N + k];
      double rho = W.eval(tree.edge_at_level(depth), static_cast<double>(k) / N);
      acc += w * std::pow(std::abs(v), cfg.p) * rho;
    }
  }
  return std::pow(acc, 1.0 / cfg.p);
}

HalfLineFunction classical_translate(const HalfLineFunction& F, double t) {
  if (t < 0.0) throw std::invalid_argument("classical_translate: t >= 0");
  const int N = F.N;
  double mN = t * N;
  if (std::abs(mN - std::llround(mN)) > 1e-12)
    throw std::invalid_argument("classical_translate: t must be grid-aligned");
  const long long m = std::llround(mN);
  if (F.line) {
    for (long long idx = 0; idx < m && idx < static_cast<long long>(F.samples.size()); ++idx)
      if (F.samples[idx] != 0.0)
        fail(Errc::TruncationExceeded,
             "mass would move below the materialized line segment");
  }
  HalfLineFunction G = F;
  const long long len = static_cast<long long>(F.samples.size());
  for (long long idx = 0; idx < len; ++idx)
    G.samples[idx] = idx + m < len ? F.samples[idx + m] : 0.0;
  return G;
}

namespace {

// Weight sample on the closed per-cell grid: k = 0..N, with k = N read as the
// left limit at the next vertex (the per-edge value at s = 1).
double cell_weight(const DirectedTree& tree, const WeightFamily& W, int depth,
                   int k, int N) {
  return W.eval(tree.edge_at_level(depth), static_cast<double>(k) / N);
}

}  // namespace

CriterionReport classical_criterion(const DirectedTree& tree,
                                    const WeightFamily& W, double p,
                                    int horizon, const LpConfig& cfg,
                                    double tol_dyn) {
  require_chain(tree);
  cfg.validate();
  if (!(p >= 1.0) || !std::isfinite(p))
    fail(Errc::InvalidExponent, "p must lie in [1, infinity)");
  if (horizon < 1) throw std::invalid_argument("criterion horizon >= 1");
  const int N = cfg.N;
  const bool unrooted = tree.kind() == TreeKind::unrooted;
  const double pstar = p > 1.0 ? 1.0 / (p - 1.0) : 0.0;

  auto window_min = [&](int depth) {
    double m = cell_weight(tree, W, depth, 0, N);
    for (int k = 1; k <= N; ++k) m = std::min(m, cell_weight(tree, W, depth, k, N));
    return m;
  };

  CriterionReport rep;
  rep.p = p;
  rep.kind = tree.kind();
  rep.horizon = horizon;
  rep.tol_dyn = tol_dyn;

  const int lo = tree.min_depth() + (unrooted ? horizon : 0);
  const int hi = tree.max_depth() - horizon;
  for (int depth = lo; depth <= hi; ++depth) {
    EdgeCriterion ec;
    ec.edge = tree.edge_at_level(depth);
    ec.forward.resize(horizon);
    if (unrooted) ec.ancestor.resize(horizon);
    for (int n = 1; n <= horizon; ++n) {
      double fmin = window_min(depth + n);
      ec.forward[n - 1] = p == 1.0 ? fmin : std::pow(fmin, pstar);
      if (!unrooted) continue;
      if (p == 1.0) {
        ec.ancestor[n - 1] = std::min(window_min(depth - n), window_min(depth));
      } else {
        double worst = 0.0;
        for (int k = 0; k <= N; ++k)
          worst = std::max(worst,
                           std::pow(cell_weight(tree, W, depth - n, k, N), -pstar) +
                               std::pow(cell_weight(tree, W, depth, k, N), -pstar));
        ec.ancestor[n - 1] = worst;
      }
    }
    ec.min_forward = *std::min_element(ec.forward.begin(), ec.forward.end());
    rep.edges.push_back(std::move(ec));
  }
  if (rep.edges.empty())
    fail(Errc::TruncationExceeded, "no window can see the full horizon");

  if (!unrooted) {
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
  } else {
    for (int n = 1; n <= horizon; ++n) {
      bool ok = true;
      for (const EdgeCriterion& ec : rep.edges) {
        bool anc_ok = p == 1.0 ? ec.ancestor[n - 1] < tol_dyn
                               : ec.ancestor[n - 1] > 1.0 / tol_dyn;
        if (ec.forward[n - 1] >= tol_dyn || !anc_ok) {
          ok = false;
          break;
        }
      }
      if (ok) rep.subsequence.push_back(n);
    }
    if (static_cast<int>(rep.subsequence.size()) == horizon)
      rep.verdict = Verdict::mixing;
    else if (!rep.subsequence.empty())
      rep.verdict = Verdict::satisfied_on_subsequence;
    else
      rep.verdict = Verdict::not_satisfied;
  }
  rep.global_min = std::numeric_limits<double>::infinity();
  for (const EdgeCriterion& ec : rep.edges)
    rep.global_min = std::min(rep.global_min, ec.min_forward);
  return rep;
}

}  // namespace treeflow
