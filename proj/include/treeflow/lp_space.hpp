#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "treeflow/errors.hpp"
#include "treeflow/tree.hpp"

namespace treeflow {

class WeightFamily;

enum class Quadrature : uint8_t { rectangle, trapezoid };

// Discretization contract shared by every operation: each edge carries N
// samples at s = k/N, k = 0..N-1 (half-open grid), N a power of two so that
// dyadic times re-index exactly. Suprema/infima scans over s additionally
// look at s = 1 through the weight rules, which extend to the closed edge.
struct LpConfig {
  double p = 2.0;
  int N = 64;
  Quadrature quadrature = Quadrature::rectangle;
  double tol = 1e-12;

  void validate() const;
  // 1/(p-1); only meaningful for p > 1.
  double pstar() const { return 1.0 / (p - 1.0); }
  double s(int k) const { return static_cast<double>(k) / N; }
};

// Finitely supported sampled function: edge id -> N samples. Absent edges are
// identically zero. The map keeps iteration deterministic.
struct GridFunction {
  int N = 0;
  std::map<int, std::vector<double>> edges;

  explicit GridFunction(int n = 0) : N(n) {}

  std::vector<double>& at(int edge);             // creates a zero row
  const std::vector<double>* find(int edge) const;
  bool is_zero() const;                          // every sample exactly 0
  void prune();                                  // drop all-zero rows
  int support_size() const { return static_cast<int>(edges.size()); }
};

GridFunction add_scaled(const GridFunction& x, double a, const GridFunction& y);  // x + a*y
inline GridFunction subtract(const GridFunction& x, const GridFunction& y) {
  return add_scaled(x, -1.0, y);
}
double max_abs_difference(const GridFunction& x, const GridFunction& y);
double max_abs(const GridFunction& x);

// Quadrature of |f_i|^p rho_i over one edge (no 1/p root).
double edge_norm_pow(const std::vector<double>& samples, const WeightFamily& W,
                     int edge, const LpConfig& cfg);

// || f ||_{p,rho} over the whole tree.
double norm(const GridFunction& f, const DirectedTree& tree, const WeightFamily& W,
            const LpConfig& cfg);

// Checks the norm-splitting inequality ||f||^p >= sum_i sum_{j in M_n(i)}
// ||f_j||^p at quadrature level (within cfg.tol). Each supported j enters the
// right side exactly when its n-step ancestor exists: always for unrooted
// trees, depth(j) >= n for rooted ones.
bool check_disnorm(const GridFunction& f, const DirectedTree& tree,
                   const WeightFamily& W, int n, const LpConfig& cfg);

// Deterministic finitely-supported test function: 1..max_support distinct
// edges, samples uniform in [-1,1]. Identical output for identical inputs on
// every platform (no std::distribution involved).
GridFunction random_test_function(const DirectedTree& tree, uint64_t seed,
                                  int max_support, const LpConfig& cfg);

}  // namespace treeflow
