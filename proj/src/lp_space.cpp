#include "treeflow/lp_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "treeflow/weights.hpp"

namespace treeflow {

void LpConfig::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p))
    fail(Errc::InvalidExponent, "p must lie in [1, infinity)");
  if (N < 2 || (N & (N - 1)) != 0)
    fail(Errc::InvalidSpec, "N must be a power of two >= 2");
  if (!(tol > 0.0)) fail(Errc::InvalidSpec, "tol must be positive");
}

std::vector<double>& GridFunction::at(int edge) {
  auto it = edges.find(edge);
  if (it == edges.end())
    it = edges.emplace(edge, std::vector<double>(N, 0.0)).first;
  return it->second;
}

const std::vector<double>* GridFunction::find(int edge) const {
  auto it = edges.find(edge);
  return it == edges.end() ? nullptr : &it->second;
}

bool GridFunction::is_zero() const {
  for (const auto& [e, v] : edges)
    for (double x : v)
      if (x != 0.0) return false;
  return true;
}

void GridFunction::prune() {
  for (auto it = edges.begin(); it != edges.end();) {
    bool all_zero = std::all_of(it->second.begin(), it->second.end(),
                                [](double x) { return x == 0.0; });
    it = all_zero ? edges.erase(it) : std::next(it);
  }
}

GridFunction add_scaled(const GridFunction& x, double a, const GridFunction& y) {
  if (x.N != y.N && !x.edges.empty() && !y.edges.empty())
    throw std::invalid_argument("grid mismatch in add_scaled");
  GridFunction out(x.N ? x.N : y.N);
  out.edges = x.edges;
  for (const auto& [e, v] : y.edges) {
    auto& row = out.at(e);
    for (int k = 0; k < out.N; ++k) row[k] += a * v[k];
  }
  return out;
}

double max_abs_difference(const GridFunction& x, const GridFunction& y) {
  double worst = 0.0;
  auto scan = [&](const GridFunction& f, const GridFunction& g) {
    for (const auto& [e, v] : f.edges) {
      const std::vector<double>* other = g.find(e);
      for (size_t k = 0; k < v.size(); ++k) {
        double d = std::abs(v[k] - (other ? (*other)[k] : 0.0));
        worst = std::max(worst, d);
      }
    }
  };
  scan(x, y);
  scan(y, x);
  return worst;
}

double max_abs(const GridFunction& x) {
  double worst = 0.0;
  for (const auto& [e, v] : x.edges)
    for (double t : v) worst = std::max(worst, std::abs(t));
  return worst;
}

namespace {

// Trapezoid nodes close the panels between samples and fall back to a left
// rectangle on the final half-open cell [1-1/N, 1).
double node_weight(Quadrature q, int k, int N) {
  if (q == Quadrature::rectangle) return 1.0 / N;
  if (k == 0) return 0.5 / N;
  if (k == N - 1) return 1.5 / N;
  return 1.0 / N;
}

}  // namespace

double edge_norm_pow(const std::vector<double>& samples, const WeightFamily& W,
                     int edge, const LpConfig& cfg) {
  double acc = 0.0;
  for (int k = 0; k < cfg.N; ++k) {
    double v = std::abs(samples[k]);
    if (v == 0.0) continue;
    acc += node_weight(cfg.quadrature, k, cfg.N) * std::pow(v, cfg.p) *
           W.eval(edge, cfg.s(k));
  }
  return acc;
}

double norm(const GridFunction& f, const DirectedTree& tree, const WeightFamily& W,
            const LpConfig& cfg) {
  (void)tree;  // norms are supportwise; the tree parameter keeps call sites uniform
  cfg.validate();
  if (!f.edges.empty() && f.N != cfg.N)
    throw std::invalid_argument("GridFunction N does not match LpConfig N");
  double acc = 0.0;
  for (const auto& [e, v] : f.edges) acc += edge_norm_pow(v, W, e, cfg);
  return std::pow(acc, 1.0 / cfg.p);
}

bool check_disnorm(const GridFunction& f, const DirectedTree& tree,
                   const WeightFamily& W, int n, const LpConfig& cfg) {
  cfg.validate();
  if (n < 0) throw std::invalid_argument("check_disnorm: n must be >= 0");
  double total = 0.0, split = 0.0;
  for (const auto& [e, v] : f.edges) {
    double part = edge_norm_pow(v, W, e, cfg);
    total += part;
    bool has_ancestor = tree.kind() == TreeKind::unrooted
                            ? true
                            : tree.depth(e) >= n;
    if (has_ancestor) split += part;
  }
  return total >= split - cfg.tol;
}

GridFunction random_test_function(const DirectedTree& tree, uint64_t seed,
                                  int max_support, const LpConfig& cfg) {
  cfg.validate();
  if (max_support < 1)
    throw std::invalid_argument("random_test_function: max_support >= 1");
  std::mt19937_64 rng(seed);
  // Platform-stable uniforms: top 53 bits -> [0,1).
  auto next01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  int m = tree.edge_count();
  int support = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_support));
  support = std::min(support, m);
  GridFunction f(cfg.N);
  int placed = 0;
  while (placed < support) {
    int e = static_cast<int>(rng() % static_cast<uint64_t>(m));
    if (f.edges.count(e)) continue;
    auto& row = f.at(e);
    for (int k = 0; k < cfg.N; ++k) row[k] = 2.0 * next01() - 1.0;
    ++placed;
  }
  return f;
}

}  // namespace treeflow
