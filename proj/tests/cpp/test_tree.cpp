#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "treeflow/errors.hpp"
#include "treeflow/tree.hpp"

using namespace treeflow;
using testutil::make_chain;
using testutil::make_regular;

namespace {

TreeSpec explicit_spec(std::vector<std::pair<int, int>> edges, int forward_depth,
                       TreeKind kind = TreeKind::rooted, int ancestor_depth = 0) {
  TreeSpec spec;
  spec.kind = kind;
  spec.generator = GeneratorType::explicit_list;
  spec.edges = std::move(edges);
  spec.forward_depth = forward_depth;
  spec.ancestor_depth = ancestor_depth;
  return spec;
}

bool throws_code(Errc want, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == want;
  }
  return false;
}

}  // namespace

TEST_CASE("rooted chain layout") {
  DirectedTree t = make_chain(5);
  CHECK(t.kind() == TreeKind::rooted);
  CHECK(t.edge_count() == 5);
  CHECK(t.base_edge() == 0);
  CHECK(t.min_depth() == 0);
  CHECK(t.max_depth() == 4);
  CHECK(t.is_chain());
  for (int i = 0; i < 5; ++i) {
    CHECK(t.depth(i) == i);
    CHECK(t.edge_at_level(i) == i);
    CHECK(t.parent_raw(i) == i - 1);
  }
  CHECK(t.is_frontier(4));
  CHECK_FALSE(t.is_leaf(4));  // frontier edges are cut, not leaves
  CHECK_FALSE(t.find_leaf().has_value());
}

TEST_CASE("regular binary tree layout is level-major") {
  DirectedTree t = make_regular(2, 4);
  CHECK(t.edge_count() == 15);
  for (int d = 0; d <= 3; ++d) {
    const auto& lvl = t.edges_at_depth(d);
    CHECK(static_cast<int>(lvl.size()) == (1 << d));
    // ids are contiguous per level: [2^d - 1, 2^{d+1} - 2]
    CHECK(lvl.front() == (1 << d) - 1);
    CHECK(lvl.back() == (1 << (d + 1)) - 2);
  }
  CHECK_FALSE(t.is_chain());
  CHECK(throws_code(Errc::NotAChain, [&] { t.edge_at_level(1); }));
  for (int i = 0; i < 7; ++i) CHECK(t.children(i).size() == 2);
}

TEST_CASE("unrooted generated tree puts the base edge at depth zero") {
  DirectedTree t = make_regular(3, 3, 2);
  CHECK(t.kind() == TreeKind::unrooted);
  CHECK(t.min_depth() == -2);
  CHECK(t.max_depth() == 2);
  CHECK(t.depth(t.base_edge()) == 0);
  CHECK(t.edges_at_depth(-2).size() == 1);
  CHECK(t.edges_at_depth(-1).size() == 3);
  CHECK(t.edges_at_depth(0).size() == 9);
  // Sole top edge has no materialized parent.
  CHECK(t.parent_raw(t.edges_at_depth(-2).front()) == -1);
}

TEST_CASE("explicit list is validated") {
  SUBCASE("well-formed with a leaf") {
    DirectedTree t =
        build_tree(explicit_spec({{0, -1}, {1, 0}, {2, 0}, {3, 1}, {4, 3}}, 4));
    CHECK(t.edge_count() == 5);
    // raw id 2 has no children and depth 1 < bottom: a leaf
    REQUIRE(t.find_leaf().has_value());
    CHECK(t.is_leaf(*t.find_leaf()));
  }
  SUBCASE("duplicate edge") {
    CHECK(throws_code(Errc::MultipleParents, [&] {
      build_tree(explicit_spec({{0, -1}, {1, 0}, {1, 0}}, 3));
    }));
  }
  SUBCASE("two tops") {
    CHECK(throws_code(Errc::InvalidSpec, [&] {
      build_tree(explicit_spec({{0, -1}, {1, -1}}, 2));
    }));
  }
  SUBCASE("unknown parent") {
    CHECK(throws_code(Errc::InvalidSpec, [&] {
      build_tree(explicit_spec({{0, -1}, {1, 9}}, 3));
    }));
  }
  SUBCASE("cycle") {
    CHECK(throws_code(Errc::CycleDetected, [&] {
      build_tree(explicit_spec({{0, 1}, {1, 0}}, 3));
    }));
  }
  SUBCASE("deeper than forward_depth") {
    CHECK(throws_code(Errc::InvalidSpec, [&] {
      build_tree(explicit_spec({{0, -1}, {1, 0}, {2, 1}}, 2));
    }));
  }
}

TEST_CASE("spec validation") {
  TreeSpec spec;
  spec.forward_depth = 0;
  CHECK(throws_code(Errc::InvalidSpec, [&] { spec.validate(); }));
  spec.forward_depth = 3;
  spec.kind = TreeKind::unrooted;
  spec.ancestor_depth = 0;
  CHECK(throws_code(Errc::UnrootedWithoutAncestors, [&] { spec.validate(); }));
  spec.kind = TreeKind::rooted;
  spec.ancestor_depth = 2;
  CHECK(throws_code(Errc::InvalidSpec, [&] { spec.validate(); }));
  spec.ancestor_depth = 0;
  spec.generator = GeneratorType::regular;
  spec.branching = 0;
  CHECK(throws_code(Errc::InvalidSpec, [&] { spec.validate(); }));
}

TEST_CASE("reachable_set matches the parent-walk oracle") {
  for (const DirectedTree& t : {make_regular(2, 5), make_regular(3, 4, 2)}) {
    for (int i = 0; i < t.edge_count(); ++i)
      for (int n = 0; n <= 3; ++n) {
        if (!t.reachable_within_truncation(i, n)) continue;
        std::vector<int> got = t.reachable_set(i, n);
        std::vector<int> want;
        for (int j = 0; j < t.edge_count(); ++j)
          if (testutil::is_n_step_ancestor(t, i, j, n)) want.push_back(j);
        CHECK(got == want);  // both ascending
      }
  }
}

TEST_CASE("reachability is cut at the frontier") {
  DirectedTree t = make_chain(4);
  CHECK(t.reachable_set(0, 3) == std::vector<int>{3});
  CHECK_FALSE(t.reachable_within_truncation(0, 4));
  CHECK(throws_code(Errc::TruncationExceeded, [&] { t.reachable_set(0, 4); }));
  // below a leaf the set is genuinely empty, not truncated
  DirectedTree leafy =
      build_tree(explicit_spec({{0, -1}, {1, 0}, {2, 0}, {3, 1}}, 3));
  int leaf = *leafy.find_leaf();
  CHECK(leafy.reachable_within_truncation(leaf, 10));
  CHECK(leafy.reachable_set(leaf, 10).empty());
}

TEST_CASE("ancestor walks") {
  DirectedTree t = make_regular(2, 4);
  CHECK(t.ancestor(7, 3) == 0);
  CHECK(t.ancestor(7, 0) == 7);
  CHECK(throws_code(Errc::NoAncestor, [&] { t.ancestor(7, 4); }));
  CHECK(t.ancestor_or_exit(7, 4) == std::nullopt);
  CHECK(t.ancestor_or_exit(7, 2).value() == t.ancestor(7, 2));

  DirectedTree u = make_chain(3, 2);
  int top = u.edges_at_depth(-2).front();
  CHECK(u.ancestor(u.base_edge(), 2) == top);
  CHECK(throws_code(Errc::TruncationExceeded, [&] { u.ancestor(u.base_edge(), 3); }));
  CHECK(throws_code(Errc::TruncationExceeded,
                    [&] { u.ancestor_or_exit(u.base_edge(), 3); }));
}

TEST_CASE("same_component semantics") {
  DirectedTree t = make_regular(2, 4);
  const auto& lvl2 = t.edges_at_depth(2);
  CHECK(t.same_component(lvl2[0], lvl2[0], 5));
  CHECK(t.same_component(lvl2[0], lvl2[3], 5));  // merge at the root
  // different depths are never related
  CHECK_FALSE(t.same_component(0, 1, 5));
  CHECK_FALSE(t.same_component(1, t.children(1)[0], 5));
  // horizon too short to reach the merge point
  CHECK_FALSE(t.same_component(lvl2[0], lvl2[3], 1));

  DirectedTree u = make_regular(2, 2, 1);
  const auto& base = u.edges_at_depth(0);
  REQUIRE(base.size() == 2);
  CHECK(u.same_component(base[0], base[1], 4));
}

TEST_CASE("oversized regular generators are rejected") {
  TreeSpec spec;
  spec.generator = GeneratorType::regular;
  spec.branching = 2;
  spec.forward_depth = 40;
  CHECK(throws_code(Errc::InvalidSpec, [&] { spec.validate(); }));
}
