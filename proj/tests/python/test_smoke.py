"""End-to-end smoke of the python bindings: build, translate, check, report."""

import json
import math

import pytest

import treeflow as tf

CHAIN = '{"kind": "rooted", "generator": {"type": "chain"}, "forward_depth": 12}'
BINARY = '{"kind": "rooted", "generator": {"type": "regular", "branching": 2}, "forward_depth": 11}'
EXP_DECAY = '{"rule": "exponential", "a": -1.0, "b": 0.0}'
CONST1 = '{"rule": "constant", "value": 1.0}'


def make_cfg(N=16, p=2.0):
    cfg = tf.LpConfig()
    cfg.N = N
    cfg.p = p
    return cfg


def test_build_tree_and_introspect():
    tree = tf.build_tree(CHAIN)
    assert tree.kind == "rooted"
    assert tree.edge_count() == 12
    assert tree.is_chain()
    assert tree.depth(3) == 3
    assert tree.find_leaf() is None

    binary = tf.build_tree(BINARY)
    assert binary.edge_count() == 2**11 - 1
    assert sorted(binary.children(0)) == [1, 2]
    assert binary.reachable_set(0, 2) == [3, 4, 5, 6]


def test_invalid_spec_raises_base_error():
    with pytest.raises(tf.TreeflowError):
        tf.build_tree('{"kind": "sideways"}')


def test_weights_and_norm():
    tree = tf.build_tree(CHAIN)
    W = tf.build_weights(EXP_DECAY, tree)
    assert W.eval(2, 0.5) == pytest.approx(math.exp(-2.5), rel=1e-15)

    cfg = make_cfg(N=16, p=1.0)
    f = tf.GridFunction(cfg.N)
    f.set_row(0, [1.0] * cfg.N)
    # sum over k of exp(-k/16)/16
    expected = sum(math.exp(-k / 16.0) for k in range(16)) / 16.0
    assert tf.norm(f, tree, W, cfg) == pytest.approx(expected, rel=1e-14)


def test_translate_moves_mass_toward_root():
    tree = tf.build_tree(CHAIN)
    cfg = make_cfg()
    f = tf.GridFunction(cfg.N)
    f.set_row(3, [float(k) for k in range(cfg.N)])
    g = tf.translate(tree, f, 1.0, cfg)
    assert g.row(2) == f.row(3)
    assert g.row(3) == [0.0] * cfg.N
    law = tf.check_semigroup_law(tree, f, 0.5, 1.25, cfg)
    assert law <= 1e-13


def test_truncation_error_is_raised_and_subclasses_base():
    tree = tf.build_tree(CHAIN)
    W = tf.build_weights(CONST1, tree)
    cfg = make_cfg()
    with pytest.raises(tf.TruncationError):
        tf.evaluate_criterion(tree, W, 2.0, 64, cfg)
    assert issubclass(tf.TruncationError, tf.TreeflowError)


def test_criterion_verdict_and_json_round_trip():
    tree = tf.build_tree(BINARY)
    W = tf.build_weights(CONST1, tree)
    cfg = make_cfg()
    rep = tf.evaluate_criterion(tree, W, 2.0, 10, cfg)
    assert rep.verdict == "satisfied-on-full-sequence"
    assert rep.subsequence[-1] == 10
    assert rep.edges[0].forward[0] == pytest.approx(0.5, abs=1e-14)
    parsed = json.loads(rep.json())
    assert parsed["verdict"] == "satisfied-on-full-sequence"
    assert rep.csv().startswith("edge_id,n,value\n")


def test_holder_infimum_tuple():
    value, family = tf.holder_infimum([1.0, 1.0], 2.0)
    assert value == pytest.approx(0.5, rel=1e-15)
    assert family == pytest.approx([0.5, 0.5])


def test_witness_playback():
    tree = tf.build_tree(BINARY)
    W = tf.build_weights(CONST1, tree)
    cfg = make_cfg()
    f1 = tf.GridFunction(cfg.N)
    f2 = tf.GridFunction(cfg.N)
    f2.set_row(0, [1.0] * cfg.N)
    w = tf.build_witness_rooted(tree, W, 2.0, f1, f2, 0.5, cfg)
    assert w.n == 4 and w.steps_applied == 3
    assert w.achieved_target_error <= 1e-12
    replay = tf.translate(tree, w.g, float(w.steps_applied), cfg)
    assert tf.max_abs_difference(replay, f2) <= 1e-12
    json.loads(w.json())


def test_admissibility_and_violator():
    tree = tf.build_tree(CHAIN)
    W = tf.build_weights(EXP_DECAY, tree)
    cfg = make_cfg(N=16, p=1.0)
    grid = [j / 16.0 for j in range(1, 65)]
    rep = tf.check_admissibility(tree, W, 1.0, 1.0, 1.0, grid, cfg)
    assert rep.admissible and rep.worst_ratio <= 1.0 + 1e-9
    bad = tf.check_admissibility(tree, W, 1.0, 1.0, 0.0, grid, cfg)
    assert not bad.admissible and bad.violation is not None
    f = tf.build_norm_violator(tree, W, 1.0, 1.0, 0.0, 0, 1.0, cfg)
    ratio = tf.norm(tf.translate(tree, f, 1.0, cfg), tree, W, cfg) / tf.norm(
        f, tree, W, cfg
    )
    assert ratio == pytest.approx(math.e, rel=1e-12)


def test_chain_oracle_agreement():
    tree = tf.build_tree(CHAIN)
    W = tf.build_weights(EXP_DECAY, tree)
    cfg = make_cfg()
    f = tf.random_test_function(tree, 7, 4, cfg)
    F = tf.phi(tree, f, cfg)
    assert F.levels() == 12
    assert tf.classical_norm(F, tree, W, cfg) == pytest.approx(
        tf.norm(f, tree, W, cfg), rel=1e-13
    )
    a = tf.evaluate_criterion(tree, W, 2.0, 8, cfg)
    b = tf.classical_criterion(tree, W, 2.0, 8, cfg)
    assert a.verdict == b.verdict
    assert list(a.subsequence) == list(b.subsequence)


def test_random_function_is_deterministic():
    tree = tf.build_tree(CHAIN)
    cfg = make_cfg()
    f = tf.random_test_function(tree, 42, 5, cfg)
    g = tf.random_test_function(tree, 42, 5, cfg)
    assert f.json() == g.json()
    assert not f.is_zero()
