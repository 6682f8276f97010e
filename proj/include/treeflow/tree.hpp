#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treeflow/errors.hpp"

namespace treeflow {

enum class TreeKind : uint8_t { rooted, unrooted };

enum class GeneratorType : uint8_t { chain, regular, explicit_list };

// Finite description of a directed metric tree truncation. Every edge is a
// copy of [0,1); flow runs from an edge toward its parent (toward the root
// side). forward_depth counts materialized levels at and below the base edge;
// ancestor_depth counts levels strictly above it (unrooted trees only).
struct TreeSpec {
  TreeKind kind = TreeKind::rooted;
  GeneratorType generator = GeneratorType::chain;
  int branching = 1;  // regular generator only
  // explicit generator only: (edge id, parent id) with parent -1 for the top.
  std::vector<std::pair<int, int>> edges;
  int forward_depth = 1;
  int ancestor_depth = 0;

  void validate() const;  // throws Error(InvalidSpec/UnrootedWithoutAncestors)
};

class DirectedTree;

namespace detail {
DirectedTree build_generated(const TreeSpec& spec);
DirectedTree build_explicit(const TreeSpec& spec);
}  // namespace detail

// Materialized truncation. Edge ids are dense 0..edge_count()-1, assigned
// level-major (topmost level first), breadth-first within a level; for rooted
// trees this is exactly breadth-first from the base edge. depth() is relative
// to the base edge, negative for ancestors.
class DirectedTree {
 public:
  TreeKind kind() const { return kind_; }
  int edge_count() const { return static_cast<int>(parent_.size()); }
  int base_edge() const { return base_edge_; }
  int depth(int i) const { check_id(i); return depth_[i]; }
  int min_depth() const { return min_depth_; }
  int max_depth() const { return max_depth_; }

  // -1 when no parent is materialized (root edge, or truncated top).
  int parent_raw(int i) const { check_id(i); return parent_[i]; }
  const std::vector<int>& children(int i) const { check_id(i); return children_[i]; }

  // True when the edge's children exist in the infinite tree but were cut by
  // the truncation; such an edge is never a leaf.
  bool is_frontier(int i) const { check_id(i); return frontier_[i]; }

  // A leaf is a non-frontier edge whose head vertex has no outgoing edges.
  bool is_leaf(int i) const { check_id(i); return !frontier_[i] && children_[i].empty(); }

  // M_n(i): edges reachable from i in exactly n steps, ascending ids.
  // n = 0 gives {i}. May be empty below a leaf. Throws TruncationExceeded
  // when the answer depends on edges past the frontier.
  std::vector<int> reachable_set(int i, int n) const;

  // True when reachable_set(i, n) is fully determined by the truncation.
  bool reachable_within_truncation(int i, int n) const;

  // K_n(j): the unique edge with j in M_n(K_n(j)). Throws NoAncestor when a
  // rooted tree runs out of ancestry, TruncationExceeded when an unrooted
  // walk passes the materialized top.
  int ancestor(int j, int n) const;

  // Same walk, but a rooted walk past the root yields nullopt (mass flowing
  // out through the root); the unrooted truncated case still throws.
  std::optional<int> ancestor_or_exit(int j, int n) const;

  // True iff j2 lies in M_n(K_n(j1)) for some 1 <= n <= horizon (plus the
  // reflexive case). Only same-depth edges can be related. Throws
  // TruncationExceeded when the walk leaves the materialized range with the
  // answer still open.
  bool same_component(int j1, int j2, int horizon) const;

  std::optional<int> find_leaf() const;  // smallest id, if any

  const std::vector<int>& edges_at_depth(int d) const;

  // Chain shape: single edge per level across the whole depth range.
  bool is_chain() const;
  int edge_at_level(int level) const;  // requires is_chain()

 private:
  friend DirectedTree detail::build_generated(const TreeSpec& spec);
  friend DirectedTree detail::build_explicit(const TreeSpec& spec);

  void check_id(int i) const {
    if (i < 0 || i >= edge_count())
      throw std::invalid_argument("edge id out of range: " + std::to_string(i));
  }

  TreeKind kind_ = TreeKind::rooted;
  int base_edge_ = 0;
  int min_depth_ = 0;
  int max_depth_ = 0;
  bool top_truncated_ = false;  // unrooted: parent of the top edge is cut off
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  std::vector<bool> frontier_;
  std::vector<std::vector<int>> by_depth_;  // index: depth - min_depth_
};

DirectedTree build_tree(const TreeSpec& spec);

}  // namespace treeflow
