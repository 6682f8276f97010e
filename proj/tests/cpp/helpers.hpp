#pragma once

// Shared fixtures and independent oracles for the unit tests. The oracles
// deliberately avoid the library's own traversal/quadrature code paths:
// ancestry is checked through raw parent links, norms through a fresh loop,
// and the optimal mass split through a derivative-free simplex minimizer.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "treeflow/lp_space.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace testutil {

using treeflow::DirectedTree;
using treeflow::GeneratorType;
using treeflow::GridFunction;
using treeflow::LpConfig;
using treeflow::Quadrature;
using treeflow::TreeKind;
using treeflow::TreeSpec;
using treeflow::WeightFamily;

inline DirectedTree make_chain(int forward_depth, int ancestor_depth = 0) {
  TreeSpec spec;
  spec.kind = ancestor_depth > 0 ? TreeKind::unrooted : TreeKind::rooted;
  spec.generator = GeneratorType::chain;
  spec.forward_depth = forward_depth;
  spec.ancestor_depth = ancestor_depth;
  return build_tree(spec);
}

inline DirectedTree make_regular(int branching, int forward_depth,
                                 int ancestor_depth = 0) {
  TreeSpec spec;
  spec.kind = ancestor_depth > 0 ? TreeKind::unrooted : TreeKind::rooted;
  spec.generator = GeneratorType::regular;
  spec.branching = branching;
  spec.forward_depth = forward_depth;
  spec.ancestor_depth = ancestor_depth;
  return build_tree(spec);
}

// Uniform double in [-1, 1) from the raw engine, bit-stable across platforms.
inline double unit(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

// True iff i is reached from j by exactly n parent steps.
inline bool is_n_step_ancestor(const DirectedTree& tree, int i, int j, int n) {
  int e = j;
  for (int step = 0; step < n; ++step) {
    e = tree.parent_raw(e);
    if (e < 0) return false;
  }
  return e == i;
}

// (T_t f)_i(s) straight from the definition, one destination sample at a
// time. Requires t * N integral and all needed ancestry materialized.
inline GridFunction oracle_translate(const DirectedTree& tree, const GridFunction& f,
                                     double t, const LpConfig& cfg) {
  GridFunction out(cfg.N);
  const long long m = std::llround(t * cfg.N);
  for (int i = 0; i < tree.edge_count(); ++i) {
    for (int k = 0; k < cfg.N; ++k) {
      long long pos = k + m;
      int n = static_cast<int>(pos / cfg.N);
      int u_idx = static_cast<int>(pos % cfg.N);
      double acc = 0.0;
      for (const auto& [j, row] : f.edges)
        if (is_n_step_ancestor(tree, i, j, n)) acc += row[u_idx];
      if (acc != 0.0) out.at(i)[k] = acc;
    }
  }
  return out;
}

inline double oracle_norm(const GridFunction& f, const WeightFamily& W, double p,
                          const LpConfig& cfg) {
  double acc = 0.0;
  for (const auto& [edge, row] : f.edges)
    for (int k = 0; k < cfg.N; ++k) {
      double w = 1.0 / cfg.N;
      if (cfg.quadrature == Quadrature::trapezoid)
        w = (k == 0 ? 0.5 : k == cfg.N - 1 ? 1.5 : 1.0) / cfg.N;
      acc += w * std::pow(std::abs(row[k]), p) *
             W.eval(edge, static_cast<double>(k) / cfg.N);
    }
  return std::pow(acc, 1.0 / p);
}

// Minimizes sum_j v_j^p rho_j over the simplex by repeated pairwise mass
// transfers, each solved by golden-section search. Convex objective, so the
// sweep converges to the global optimum; no stationarity formula involved.
inline double oracle_holder_value(const std::vector<double>& rho, double p,
                                  std::vector<double>* family_out = nullptr) {
  const int m = static_cast<int>(rho.size());
  std::vector<double> v(m, 1.0 / m);
  auto total = [&] {
    double c = 0.0;
    for (int j = 0; j < m; ++j) c += std::pow(v[j], p) * rho[j];
    return c;
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 600; ++sweep) {
    double before = total();
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        double c = v[a] + v[b];
        if (c <= 0.0) continue;
        auto g = [&](double x) {
          return std::pow(x, p) * rho[a] + std::pow(c - x, p) * rho[b];
        };
        double lo = 0.0, hi = c;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double g1 = g(x1), g2 = g(x2);
        for (int it = 0; it < 90; ++it) {
          if (g1 <= g2) {
            hi = x2; x2 = x1; g2 = g1;
            x1 = hi - gr * (hi - lo); g1 = g(x1);
          } else {
            lo = x1; x1 = x2; g1 = g2;
            x2 = lo + gr * (hi - lo); g2 = g(x2);
          }
        }
        double x = 0.5 * (lo + hi);
        // Endpoints matter when p = 1 (linear objective).
        if (g(0.0) < g(x)) x = 0.0;
        if (g(c) < g(x)) x = c;
        v[a] = x;
        v[b] = c - x;
      }
    double after = total();
    if (before - after < 1e-17 * std::max(1.0, before)) break;
  }
  if (family_out) *family_out = v;
  return total();
}

}  // namespace testutil
