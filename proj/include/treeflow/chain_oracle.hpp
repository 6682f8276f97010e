#pragma once

#include <vector>

#include "treeflow/dynamics.hpp"
#include "treeflow/lp_space.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace treeflow {

// A function on the concatenated chain domain, in absolute line coordinates:
// sample idx covers u = start_level + idx/N. Rooted chains live on [0, D);
// unrooted ones on [-A, D-A) with `line` semantics (mass pushed below the
// domain start is a truncation loss, not an exit).
struct HalfLineFunction {
  int start_level = 0;
  int N = 0;
  bool line = false;
  std::vector<double> samples;

  int levels() const { return N > 0 ? static_cast<int>(samples.size()) / N : 0; }
};

// The concatenation isometry: F(u) = f_{[u]}(u - [u]). Norm-preserving.
HalfLineFunction phi(const DirectedTree& tree, const GridFunction& f,
                     const LpConfig& cfg);

// The concatenated weight rho~(u) = rho_{[u]}(u - [u]), absolute coordinate.
double classical_weight(const DirectedTree& tree, const WeightFamily& W,
                        double u);

// Norm on the concatenated domain, computed from scratch against the
// classical formulas (no shared quadrature code).
double classical_norm(const HalfLineFunction& F, const DirectedTree& tree,
                      const WeightFamily& W, const LpConfig& cfg);

// Classical left translation G(u) = F(u + t), pure sample re-indexing for
// grid-aligned t. Half-line: mass crossing the origin exits. Line: nonzero
// mass pushed below the domain start cannot be represented.
HalfLineFunction classical_translate(const HalfLineFunction& F, double t);

// The hypercyclicity condition evaluated directly on rho~ with window
// arithmetic instead of tree walks; agreement with the tree-side criteria on
// chains is the oracle's evidence.
CriterionReport classical_criterion(const DirectedTree& tree,
                                    const WeightFamily& W, double p,
                                    int horizon, const LpConfig& cfg,
                                    double tol_dyn = 1e-3);

}  // namespace treeflow
