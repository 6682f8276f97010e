#pragma once

#include <utility>
#include <vector>

#include "treeflow/lp_space.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace treeflow {

// A time instant tagged with whether it sits on the sample grid. Grid-aligned
// times admit exact translation (pure re-indexing); everything else goes
// through translate_interp.
struct TimePoint {
  double t = 0.0;
  bool grid_aligned = false;

  static TimePoint at(double t, int N);
};

// n(t, s) = floor(s + t), the number of whole edges crossed.
int step_index(double t, double s);

// Left translation by a grid-aligned time: (T_t f)_i(s) sums f_j(s + t - n)
// over the n(t, s)-step descendants j of i. Exact re-indexing of samples.
// Mass translated past a rooted tree's base edge leaves the space; walking
// past an unrooted truncation's top is an error (the ancestor exists but is
// not materialized).
GridFunction translate(const DirectedTree& tree, const GridFunction& f,
                       TimePoint t, const LpConfig& cfg);
GridFunction translate(const DirectedTree& tree, const GridFunction& f,
                       double t, const LpConfig& cfg);

// Same operator for arbitrary t >= 0, with f read through linear
// interpolation of its samples; the last half-open cell extrapolates from the
// final two samples. O(1/N^2) off the exact operator for piecewise-C^2 data,
// exact for affine data and for grid-aligned t.
GridFunction translate_interp(const DirectedTree& tree, const GridFunction& f,
                              double t, const LpConfig& cfg);

// max |T_{t1}(T_{t2} f) - T_{t1+t2} f| over all edges and samples.
// Grid-aligned times make this exact re-indexing, so anything above 1e-12 is
// a logic error rather than discretization.
double check_semigroup_law(const DirectedTree& tree, const GridFunction& f,
                           double t1, double t2, const LpConfig& cfg);

// max over t in t_grid of ||T_t f|| / (M e^{w t} ||f||).
double check_norm_bound(const DirectedTree& tree, const WeightFamily& W,
                        const GridFunction& f, const std::vector<double>& t_grid,
                        double M, double w, const LpConfig& cfg);

// (t, ||T_t g - g||) at t = 1/N, 2/N, 4/N, ..., 1. Reported, not asserted:
// for continuous data the small-t entries shrink as N grows.
std::vector<std::pair<double, double>> strong_continuity_trend(
    const DirectedTree& tree, const WeightFamily& W, const GridFunction& g,
    const LpConfig& cfg);

}  // namespace treeflow
