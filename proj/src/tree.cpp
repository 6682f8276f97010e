#include "treeflow/tree.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace treeflow {

namespace {

// Guard against runaway regular generators before allocating anything.
constexpr long kMaxEdges = 1 << 22;

long generated_edge_count(const TreeSpec& s) {
  long per_level = 1, total = 0;
  const long b = s.generator == GeneratorType::chain ? 1 : s.branching;
  int lo = s.kind == TreeKind::unrooted ? -s.ancestor_depth : 0;
  for (int d = lo; d <= s.forward_depth - 1; ++d) {
    total += per_level;
    if (total > kMaxEdges) return kMaxEdges + 1;
    per_level *= b;
    if (per_level > kMaxEdges) return kMaxEdges + 1;
  }
  return total;
}

}  // namespace

void TreeSpec::validate() const {
  if (forward_depth < 1)
    fail(Errc::InvalidSpec, "forward_depth must be >= 1");
  if (ancestor_depth < 0)
    fail(Errc::InvalidSpec, "ancestor_depth must be >= 0");
  if (kind == TreeKind::unrooted && ancestor_depth == 0)
    fail(Errc::UnrootedWithoutAncestors,
         "unrooted spec needs ancestor_depth >= 1");
  if (kind == TreeKind::rooted && ancestor_depth != 0)
    fail(Errc::InvalidSpec, "rooted spec cannot carry ancestors");
  switch (generator) {
    case GeneratorType::chain:
      if (!edges.empty())
        fail(Errc::InvalidSpec, "chain generator takes no edge list");
      break;
    case GeneratorType::regular:
      if (branching < 1)
        fail(Errc::InvalidSpec, "regular generator needs branching >= 1");
      if (!edges.empty())
        fail(Errc::InvalidSpec, "regular generator takes no edge list");
      if (generated_edge_count(*this) > kMaxEdges)
        fail(Errc::InvalidSpec, "tree too large to materialize");
      break;
    case GeneratorType::explicit_list:
      if (edges.empty())
        fail(Errc::InvalidSpec, "explicit generator needs a nonempty edge list");
      if (static_cast<long>(edges.size()) > kMaxEdges)
        fail(Errc::InvalidSpec, "tree too large to materialize");
      break;
  }
}

namespace detail {

DirectedTree build_generated(const TreeSpec& spec) {
  DirectedTree t;
  t.kind_ = spec.kind;
  const int A = spec.kind == TreeKind::unrooted ? spec.ancestor_depth : 0;
  const int top = -A, bottom = spec.forward_depth - 1;
  const int b = spec.generator == GeneratorType::chain ? 1 : spec.branching;

  t.min_depth_ = top;
  t.max_depth_ = bottom;
  t.top_truncated_ = spec.kind == TreeKind::unrooted;

  std::vector<int> level;  // ids of the current depth, breadth-first
  int next_id = 0;
  auto new_edge = [&](int parent, int depth) {
    t.parent_.push_back(parent);
    t.children_.emplace_back();
    t.depth_.push_back(depth);
    t.frontier_.push_back(depth == bottom);
    if (parent >= 0) t.children_[parent].push_back(next_id);
    return next_id++;
  };

  int chain_edge = new_edge(-1, top);  // the topmost edge
  level = {chain_edge};
  t.by_depth_.push_back(level);
  for (int d = top; d < bottom; ++d) {
    std::vector<int> next;
    for (int e : level) {
      // Below the base level every vertex fans out with b children; on the
      // ancestor chain the continuation edge comes first so the base edge is
      // the first id of level 0.
      int fanout = b;
      if (e == chain_edge && d < 0) {
        chain_edge = new_edge(e, d + 1);
        next.push_back(chain_edge);
        fanout = b - 1;
      }
      for (int c = 0; c < fanout; ++c) next.push_back(new_edge(e, d + 1));
    }
    level = std::move(next);
    t.by_depth_.push_back(level);
  }
  t.base_edge_ = A == 0 ? 0 : t.by_depth_[A].front();
  return t;
}

DirectedTree build_explicit(const TreeSpec& spec) {
  // First pass over the raw ids: uniqueness, parent existence, single top.
  std::map<int, int> parent_of;
  for (auto [id, par] : spec.edges) {
    if (id < 0) fail(Errc::InvalidSpec, "negative edge id in explicit list");
    if (!parent_of.emplace(id, par).second)
      fail(Errc::MultipleParents,
           "edge " + std::to_string(id) + " listed twice");
  }
  int top_raw = -1;
  for (auto [id, par] : parent_of) {
    if (par < 0) {
      if (top_raw >= 0)
        fail(Errc::InvalidSpec, "explicit list has more than one top edge");
      top_raw = id;
    } else if (!parent_of.count(par)) {
      fail(Errc::InvalidSpec, "edge " + std::to_string(id) +
                                  " has unknown parent " + std::to_string(par));
    }
  }
  if (top_raw < 0) fail(Errc::CycleDetected, "no top edge: parent links close a cycle");

  // Depth via breadth-first walk from the top. Children keep list order.
  std::map<int, std::vector<int>> kids_ordered;
  for (auto [id, par] : spec.edges)
    if (par >= 0) kids_ordered[par].push_back(id);

  const int A = spec.kind == TreeKind::unrooted ? spec.ancestor_depth : 0;
  const int top_depth = -A;
  std::map<int, int> depth_raw;
  std::deque<int> queue{top_raw};
  depth_raw[top_raw] = top_depth;
  std::vector<std::vector<int>> levels_raw;
  while (!queue.empty()) {
    std::vector<int> level(queue.begin(), queue.end());
    queue.clear();
    for (int e : level)
      for (int c : kids_ordered[e]) {
        depth_raw[c] = depth_raw[e] + 1;
        queue.push_back(c);
      }
    levels_raw.push_back(std::move(level));
  }
  if (depth_raw.size() != parent_of.size())
    fail(Errc::CycleDetected, "edges unreachable from the top edge");

  const int bottom = spec.forward_depth - 1;
  const int deepest = top_depth + static_cast<int>(levels_raw.size()) - 1;
  if (deepest > bottom)
    fail(Errc::InvalidSpec, "explicit edges deeper than forward_depth allows");
  if (spec.kind == TreeKind::unrooted && deepest < 0)
    fail(Errc::InvalidSpec, "explicit unrooted list never reaches the base level");

  DirectedTree t;
  t.kind_ = spec.kind;
  t.min_depth_ = top_depth;
  t.max_depth_ = deepest;
  t.top_truncated_ = spec.kind == TreeKind::unrooted;

  std::map<int, int> id_of;  // raw -> dense, level-major
  int next_id = 0;
  for (const auto& level : levels_raw)
    for (int e : level) id_of[e] = next_id++;
  t.parent_.resize(next_id);
  t.children_.resize(next_id);
  t.depth_.resize(next_id);
  t.frontier_.resize(next_id);
  for (const auto& level : levels_raw)
    for (int e : level) {
      int i = id_of[e];
      int par = parent_of[e];
      t.parent_[i] = par < 0 ? -1 : id_of[par];
      t.depth_[i] = depth_raw[e];
      t.frontier_[i] = depth_raw[e] == bottom;
      for (int c : kids_ordered[e]) t.children_[i].push_back(id_of[c]);
    }
  t.by_depth_.resize(deepest - top_depth + 1);
  for (int i = 0; i < next_id; ++i)
    t.by_depth_[t.depth_[i] - top_depth].push_back(i);

  t.base_edge_ = -1;
  for (int i = 0; i < next_id; ++i)
    if (t.depth_[i] == 0) { t.base_edge_ = i; break; }
  return t;
}

}  // namespace detail

DirectedTree build_tree(const TreeSpec& spec) {
  spec.validate();
  if (spec.generator == GeneratorType::explicit_list)
    return detail::build_explicit(spec);
  return detail::build_generated(spec);
}

std::vector<int> DirectedTree::reachable_set(int i, int n) const {
  check_id(i);
  if (n < 0) throw std::invalid_argument("reachable_set: n must be >= 0");
  std::vector<int> cur{i};
  for (int step = 0; step < n; ++step) {
    std::vector<int> next;
    for (int e : cur) {
      if (frontier_[e])
        fail(Errc::TruncationExceeded,
             "reachable_set(" + std::to_string(i) + ", " + std::to_string(n) +
                 ") needs edges past the frontier");
      next.insert(next.end(), children_[e].begin(), children_[e].end());
    }
    cur = std::move(next);
    if (cur.empty()) break;  // genuinely empty below leaves
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

bool DirectedTree::reachable_within_truncation(int i, int n) const {
  check_id(i);
  std::vector<int> cur{i};
  for (int step = 0; step < n; ++step) {
    std::vector<int> next;
    for (int e : cur) {
      if (frontier_[e]) return false;
      next.insert(next.end(), children_[e].begin(), children_[e].end());
    }
    cur = std::move(next);
    if (cur.empty()) return true;
  }
  return true;
}

int DirectedTree::ancestor(int j, int n) const {
  check_id(j);
  if (n < 0) throw std::invalid_argument("ancestor: n must be >= 0");
  int e = j;
  for (int step = 0; step < n; ++step) {
    int p = parent_[e];
    if (p < 0) {
      if (kind_ == TreeKind::unrooted && top_truncated_)
        fail(Errc::TruncationExceeded,
             "ancestor(" + std::to_string(j) + ", " + std::to_string(n) +
                 ") passes the materialized top");
      fail(Errc::NoAncestor,
           "ancestor(" + std::to_string(j) + ", " + std::to_string(n) +
               ") walks past the root edge");
    }
    e = p;
  }
  return e;
}

std::optional<int> DirectedTree::ancestor_or_exit(int j, int n) const {
  check_id(j);
  int e = j;
  for (int step = 0; step < n; ++step) {
    int p = parent_[e];
    if (p < 0) {
      if (kind_ == TreeKind::unrooted && top_truncated_)
        fail(Errc::TruncationExceeded,
             "translation needs ancestors past the materialized top");
      return std::nullopt;  // rooted: mass leaves through the root
    }
    e = p;
  }
  return e;
}

bool DirectedTree::same_component(int j1, int j2, int horizon) const {
  check_id(j1);
  check_id(j2);
  if (horizon < 1) throw std::invalid_argument("same_component: horizon >= 1");
  if (j1 == j2) return true;
  if (depth_[j1] != depth_[j2]) return false;  // classes are level-homogeneous
  int a = j1, b = j2;
  for (int n = 1; n <= horizon; ++n) {
    int pa = parent_[a], pb = parent_[b];
    if (pa < 0 || pb < 0) {
      if (kind_ == TreeKind::unrooted && top_truncated_)
        fail(Errc::TruncationExceeded,
             "same_component undecided within the materialized ancestry");
      return false;  // full ancestry known, never merged
    }
    a = pa;
    b = pb;
    if (a == b) return true;
  }
  return false;
}

std::optional<int> DirectedTree::find_leaf() const {
  for (int i = 0; i < edge_count(); ++i)
    if (is_leaf(i)) return i;
  return std::nullopt;
}

const std::vector<int>& DirectedTree::edges_at_depth(int d) const {
  static const std::vector<int> empty;
  if (d < min_depth_ || d > max_depth_) return empty;
  return by_depth_[d - min_depth_];
}

bool DirectedTree::is_chain() const {
  for (int d = min_depth_; d <= max_depth_; ++d)
    if (edges_at_depth(d).size() != 1) return false;
  return true;
}

int DirectedTree::edge_at_level(int level) const {
  if (!is_chain()) fail(Errc::NotAChain, "edge_at_level needs a chain tree");
  if (level < min_depth_ || level > max_depth_)
    fail(Errc::TruncationExceeded,
         "level " + std::to_string(level) + " not materialized");
  return edges_at_depth(level).front();
}

}  // namespace treeflow
