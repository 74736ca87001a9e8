"""Tidy layout: hand-checked examples plus the geometric properties."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from adtrees.layout import LayoutConfig, LayoutResult, layout
from adtrees.model import AdtNode, Player, clone_tree, iter_nodes

from strategies import adt_trees

P = Player.PROPONENT
O = Player.OPPONENT


def leaf(node_id, label, player=P, **kw):
    return AdtNode(id=node_id, label=label, player=player, **kw)


def two_leaves():
    root = leaf("n1", "goal")
    root.children = [leaf("n2", "a"), leaf("n3", "b")]
    return root


def full_binary(depth):
    counter = [0]

    def build(d):
        counter[0] += 1
        node = leaf(f"n{counter[0]}", f"x{d}")
        if d > 0:
            node.children = [build(d - 1), build(d - 1)]
        return node

    return build(depth)


def test_single_node_at_origin():
    result = layout(leaf("n1", "only"))
    assert result.positions == {"n1": (0.0, 0.0)}
    assert result.bounds == (-60.0, -20.0, 60.0, 20.0)


def test_two_leaves_hand_computed():
    result = layout(two_leaves())
    assert result.positions["n1"] == (0.0, 0.0)
    assert result.positions["n2"] == (-70.0, 100.0)
    assert result.positions["n3"] == (70.0, 100.0)


def test_depth_drives_y():
    root = two_leaves()
    root.children[0].children = [leaf("n4", "deep")]
    config = LayoutConfig()
    result = layout(root)
    assert result.positions["n4"][1] == 2 * (config.node_height + config.level_gap)


def test_counter_is_laid_out_as_last_child():
    root = leaf("n1", "goal")
    root.children = [leaf("n2", "a")]
    root.counter = leaf("n3", "block", O)
    result = layout(root)
    assert result.positions["n3"][0] > result.positions["n2"][0]
    assert result.positions["n3"][1] == result.positions["n2"][1]


def test_fold_excludes_subtree_but_not_node():
    root = two_leaves()
    root.children[0].children = [leaf("n4", "hidden")]
    root.children[0].folded = True
    folded = layout(root, respect_fold=True)
    full = layout(root, respect_fold=False)
    assert "n4" not in folded.positions
    assert "n2" in folded.positions
    assert len(full.positions) == len(folded.positions) + 1


def test_config_validation():
    with pytest.raises(ValueError):
        LayoutConfig(node_width=0)


def test_mirror_symmetric_binary_tree():
    result = layout(full_binary(3))
    xs = sorted(x for x, _ in result.positions.values())
    assert all(a + b == pytest.approx(0.0, abs=1e-9) for a, b in zip(xs, reversed(xs)))


def assert_no_overlaps(root, result: LayoutResult, config: LayoutConfig):
    parents = {}
    depths = {}

    def record(node, parent_id, depth):
        parents[node.id] = parent_id
        depths[node.id] = depth
        for child in node.children + ([node.counter] if node.counter else []):
            record(child, node.id, depth + 1)

    record(root, None, 0)
    by_depth: dict[int, list[str]] = {}
    for node_id in result.positions:
        by_depth.setdefault(depths[node_id], []).append(node_id)
    for nodes in by_depth.values():
        for i, a in enumerate(nodes):
            for b in nodes[i + 1:]:
                gap = abs(result.positions[a][0] - result.positions[b][0])
                if parents[a] == parents[b]:
                    assert gap >= config.node_width + config.sibling_gap - 1e-6
                else:
                    assert gap >= config.node_width + config.subtree_gap - 1e-6


@settings(max_examples=150, deadline=None)
@given(adt_trees(max_depth=4))
def test_overlap_freedom(root):
    config = LayoutConfig()
    assert_no_overlaps(root, layout(root, config), config)


@settings(max_examples=150, deadline=None)
@given(adt_trees(max_depth=4))
def test_parent_centered_over_extreme_children(root):
    result = layout(root)
    for node in iter_nodes(root):
        kids = node.children + ([node.counter] if node.counter else [])
        if not kids:
            continue
        xs = [result.positions[k.id][0] for k in kids]
        assert xs == sorted(xs)  # children keep their order
        center = (xs[0] + xs[-1]) / 2
        assert result.positions[node.id][0] == pytest.approx(center, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(adt_trees(max_depth=4))
def test_determinism(root):
    assert layout(root) == layout(root)


def mirror(node):
    twin = clone_tree(node)

    def flip(n):
        n.children.reverse()
        for c in n.children:
            flip(c)

    flip(twin)
    return twin


@settings(max_examples=100, deadline=None)
@given(adt_trees(max_depth=4, counter_chance=0))
def test_mirroring_negates_x(root):
    original = layout(root)
    mirrored = layout(mirror(root))
    for node in iter_nodes(root):
        assert mirrored.positions[node.id][0] == pytest.approx(
            -original.positions[node.id][0], abs=1e-6
        )
        assert mirrored.positions[node.id][1] == original.positions[node.id][1]


@settings(max_examples=100, deadline=None)
@given(adt_trees(max_depth=4))
def test_bounds_enclose_all_rectangles(root):
    config = LayoutConfig()
    result = layout(root, config)
    min_x, min_y, max_x, max_y = result.bounds
    for x, y in result.positions.values():
        assert min_x <= x - config.node_width / 2
        assert max_x >= x + config.node_width / 2
        assert min_y <= y - config.node_height / 2
        assert max_y >= y + config.node_height / 2
