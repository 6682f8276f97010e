#include "treeflow/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "treeflow/errors.hpp"
#include "treeflow/parallel.hpp"

namespace treeflow {

TimePoint TimePoint::at(double t, int N) {
  TimePoint tp;
  tp.t = t;
  tp.grid_aligned = std::abs(t * N - std::llround(t * N)) <= 1e-12;
  return tp;
}

int step_index(double t, double s) {
  return static_cast<int>(std::floor(s + t));
}

namespace {

// One source row feeding one output edge: samples k in [k_begin, k_end) of
// the output read source samples k + src_offset.
struct Feed {
  const std::vector<double>* src;
  int k_begin;
  int k_end;
  int src_offset;
};

bool any_nonzero(const std::vector<double>& v, int lo, int hi) {
  for (int l = lo; l < hi; ++l)
    if (v[l] != 0.0) return true;
  return false;
}

}  // namespace

GridFunction translate(const DirectedTree& tree, const GridFunction& f,
                       TimePoint t, const LpConfig& cfg) {
  cfg.validate();
  if (!t.grid_aligned)
    throw std::invalid_argument(
        "translate needs a grid-aligned time; use translate_interp");
  if (t.t < 0.0) throw std::invalid_argument("translate: t >= 0");
  if (f.N != cfg.N && !f.edges.empty())
    throw std::invalid_argument("translate: f sampled on a different grid");
  const int N = cfg.N;
  const long long m = std::llround(t.t * N);
  const int n0 = static_cast<int>(m / N);
  const int r = static_cast<int>(m % N);

  // Output support is the ancestor closure of the input support at the one or
  // two step counts n(t, s) takes; each output row then accumulates its feeds
  // in source-id order, independent of scheduling.
  std::map<int, std::vector<Feed>> plan;
  for (const auto& [j, row] : f.edges) {
    // Block n0 serves output samples [0, N-r) from source samples [r, N);
    // block n0+1 serves [N-r, N) from [0, r). An all-zero source range does
    // not need its ancestor (keeps unrooted truncation errors honest).
    if (any_nonzero(row, r, N)) {
      if (auto i = tree.ancestor_or_exit(j, n0))
        plan[*i].push_back(Feed{&row, 0, N - r, r});
    }
    if (r != 0 && any_nonzero(row, 0, r)) {
      if (auto i = tree.ancestor_or_exit(j, n0 + 1))
        plan[*i].push_back(Feed{&row, N - r, N, r - N});
    }
  }

  GridFunction out(N);
  std::vector<std::pair<const std::vector<Feed>*, std::vector<double>*>> slots;
  slots.reserve(plan.size());
  for (const auto& [i, feeds] : plan) slots.emplace_back(&feeds, &out.at(i));
  parallel_for(static_cast<int>(slots.size()), [&](int idx) {
    auto& row = *slots[idx].second;
    for (const Feed& fd : *slots[idx].first)
      for (int k = fd.k_begin; k < fd.k_end; ++k)
        row[k] += (*fd.src)[k + fd.src_offset];
  });
  return out;
}

GridFunction translate(const DirectedTree& tree, const GridFunction& f,
                       double t, const LpConfig& cfg) {
  return translate(tree, f, TimePoint::at(t, cfg.N), cfg);
}

namespace {

// Piecewise-linear read of a sample row at u in [0, 1): interior cells
// interpolate between adjacent samples, the last half-open cell extrapolates
// the final segment (there is no sample at u = 1).
double interp_at(const std::vector<double>& row, double u, int N) {
  double pos = u * N;
  int l0 = static_cast<int>(std::floor(pos));
  if (l0 >= N - 1) {
    if (N == 1) return row[0];
    return row[N - 1] + (pos - (N - 1)) * (row[N - 1] - row[N - 2]);
  }
  if (l0 < 0) l0 = 0;
  double frac = pos - l0;
  return row[l0] + frac * (row[l0 + 1] - row[l0]);
}

}  // namespace

GridFunction translate_interp(const DirectedTree& tree, const GridFunction& f,
                              double t, const LpConfig& cfg) {
  cfg.validate();
  if (t < 0.0) throw std::invalid_argument("translate_interp: t >= 0");
  if (f.N != cfg.N && !f.edges.empty())
    throw std::invalid_argument("translate_interp: f sampled on a different grid");
  const int N = cfg.N;

  GridFunction out(N);
  for (const auto& [j, row] : f.edges) {
    // Cache the (at most two) ancestors; nullopt-with-flag marks "exited the
    // rooted tree" so the walk runs once per block.
    const int n_base = step_index(t, 0.0);
    std::optional<int> anc[2];
    bool anc_known[2] = {false, false};
    for (int k = 0; k < N; ++k) {
      double s = cfg.s(k);
      int n = step_index(t, s);
      double u = s + t - n;
      double v = interp_at(row, u, N);
      if (v == 0.0) continue;
      int slot = n - n_base;
      if (slot < 0 || slot > 1) continue;  // floating fringe at the breakpoint
      if (!anc_known[slot]) {
        anc[slot] = tree.ancestor_or_exit(j, n);
        anc_known[slot] = true;
      }
      if (anc[slot]) out.at(*anc[slot])[k] += v;
    }
  }
  return out;
}

double check_semigroup_law(const DirectedTree& tree, const GridFunction& f,
                           double t1, double t2, const LpConfig& cfg) {
  GridFunction inner = translate(tree, f, t2, cfg);
  GridFunction two_step = translate(tree, inner, t1, cfg);
  GridFunction one_step = translate(tree, f, t1 + t2, cfg);
  return max_abs_difference(two_step, one_step);
}

double check_norm_bound(const DirectedTree& tree, const WeightFamily& W,
                        const GridFunction& f, const std::vector<double>& t_grid,
                        double M, double w, const LpConfig& cfg) {
  double base = norm(f, tree, W, cfg);
  if (base == 0.0) fail(Errc::ZeroFunction, "check_norm_bound needs ||f|| > 0");
  double worst = 0.0;
  for (double t : t_grid) {
    GridFunction Tf = translate(tree, f, t, cfg);
    double ratio = norm(Tf, tree, W, cfg) / (M * std::exp(w * t) * base);
    worst = std::max(worst, ratio);
  }
  return worst;
}

std::vector<std::pair<double, double>> strong_continuity_trend(
    const DirectedTree& tree, const WeightFamily& W, const GridFunction& g,
    const LpConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<double, double>> out;
  for (int step = 1; step <= cfg.N; step *= 2) {
    double t = static_cast<double>(step) / cfg.N;
    GridFunction diff = subtract(translate(tree, g, t, cfg), g);
    out.emplace_back(t, norm(diff, tree, W, cfg));
  }
  return out;
}

}  // namespace treeflow
