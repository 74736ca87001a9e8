"""Seeded random instances for experiments and the acceptance suite.

Trees grow by attaching each new node under a uniformly random existing
node (expected depth grows logarithmically, so 10k-node instances stay
recursion-friendly); a slot becomes a countermeasure when the host has
none yet and the coin says so. Labels are drawn from a bounded pool so
shared actions occur, or made unique on request.
"""

from __future__ import annotations

import random
from dataclasses import replace
from typing import Optional

from .document import AdtDocument, attach_domain, new_document
from .domains import DEFAULT_REGISTRY, INF, AttributeDomain, DomainRegistry, ValueKind
from .evaluation import Provenance
from .model import AdtNode, Player, Refinement, iter_nodes
from .terms import Apply, Basic, TermNode, TermOp


def random_tree(
    rng: random.Random,
    n_nodes: int,
    counter_chance: float = 0.2,
    label_pool: Optional[int] = None,
    fold_chance: float = 0.0,
) -> AdtNode:
    """Uniform-attachment random tree with exactly ``n_nodes`` nodes."""
    pool = label_pool if label_pool is not None else max(2, n_nodes // 2)
    labels = [f"a{i}" for i in range(pool)]
    root = AdtNode(id="n1", label=rng.choice(labels), player=Player.PROPONENT,
                   refinement=rng.choice((Refinement.AND, Refinement.OR)))
    nodes = [root]
    for k in range(2, n_nodes + 1):
        host = nodes[rng.randrange(len(nodes))]
        as_counter = host.counter is None and rng.random() < counter_chance
        player = host.player.opposite if as_counter else host.player
        node = AdtNode(
            id=f"n{k}",
            label=rng.choice(labels),
            player=player,
            refinement=rng.choice((Refinement.AND, Refinement.OR)),
            folded=rng.random() < fold_chance,
        )
        if as_counter:
            host.counter = node
        else:
            host.children.append(node)
        nodes.append(node)
    return root


def make_labels_unique(root: AdtNode) -> AdtNode:
    """Give every basic action its own label (world-enumeration oracles)."""
    i = 0
    for node in iter_nodes(root):
        if not node.children:
            i += 1
            node.label = f"u{i}"
    return root


def random_value(rng: random.Random, kind: ValueKind):
    if kind is ValueKind.BOOLEAN:
        return rng.random() < 0.5
    if kind is ValueKind.UNIT_INTERVAL:
        return rng.choice([0.0, 1.0, round(rng.random(), 6), round(rng.random(), 6)])
    if kind is ValueKind.EXTENDED_NATURAL_LEVEL:
        return INF if rng.random() < 0.15 else rng.randint(0, 12)
    # integer-valued floats keep min/plus folds exact across fold orders
    return INF if rng.random() < 0.15 else float(rng.randint(0, 40))


def random_valuation_overrides(
    rng: random.Random,
    doc: AdtDocument,
    instance_id: str,
    domain: AttributeDomain,
    fraction: float = 0.8,
) -> AdtDocument:
    """Overwrite a random subset of entries in place, in one pass (the
    per-edit document snapshotting would be quadratic on large instances)."""
    inst = doc.instance(instance_id)
    entries = dict(inst.valuation.entries)
    provenance = dict(inst.valuation.provenance)
    for key in entries:
        if rng.random() < fraction:
            value = random_value(rng, domain.value_kind)
            entries[key] = domain.value_kind.normalize(value)
            provenance[key] = Provenance.USER_SET
    inst.valuation = replace(inst.valuation, entries=entries, provenance=provenance)
    return doc


def random_document(
    rng: random.Random,
    n_nodes: int,
    domain_ids: tuple[str, ...] = ("min-cost",),
    counter_chance: float = 0.2,
    fold_chance: float = 0.05,
    registry: Optional[DomainRegistry] = None,
) -> AdtDocument:
    registry = registry or DEFAULT_REGISTRY
    doc = new_document()
    doc.root = random_tree(rng, n_nodes, counter_chance=counter_chance, fold_chance=fold_chance)
    for domain_id in domain_ids:
        params = {"k": float(rng.randint(0, 60))} if domain_id == "reachability-within-k" else {}
        doc, instance_id = attach_domain(doc, registry, domain_id, params)
        domain = registry.instantiate(domain_id, params)
        doc = random_valuation_overrides(rng, doc, instance_id, domain)
    return doc


def random_term(rng: random.Random, max_depth: int = 5, fan_out: int = 3) -> TermNode:
    """Well-typed random term; labels mix identifier and free-text shapes."""

    def label() -> str:
        if rng.random() < 0.5:
            return "act" + str(rng.randint(0, 99))
        alphabet = "ab c_d-e'f\"g\\hé世"
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6))).strip() or "x"

    def term(player: Player, depth: int, no_counter_head: bool) -> TermNode:
        roll = rng.random()
        if depth >= max_depth or roll < 0.4:
            return Basic(player, label())
        if roll < 0.55 and not no_counter_head:
            op = TermOp.C_P if player is Player.PROPONENT else TermOp.C_O
            return Apply(op, (
                term(player, depth + 1, no_counter_head=True),
                term(player.opposite, depth + 1, no_counter_head=False),
            ))
        if player is Player.PROPONENT:
            op = rng.choice((TermOp.OR_P, TermOp.AND_P))
        else:
            op = rng.choice((TermOp.OR_O, TermOp.AND_O))
        args = tuple(
            term(player, depth + 1, no_counter_head=False)
            for _ in range(rng.randint(1, fan_out))
        )
        return Apply(op, args)

    return term(Player.PROPONENT, 0, no_counter_head=False)


def all_tree_shapes(n_nodes: int) -> list[AdtNode]:
    """Every ordered tree shape with exactly ``n_nodes`` nodes (Catalan many),
    labeled alternately a/b by preorder position, all proponent."""

    def shapes(n: int) -> list[tuple]:
        if n == 1:
            return [()]
        out = []
        for first in range(1, n):
            for head in shapes(first):
                for rest in forests(n - 1 - first):
                    out.append((head,) + rest)
        return out

    def forests(n: int) -> list[tuple]:
        if n == 0:
            return [()]
        out = []
        for first in range(1, n + 1):
            for head in shapes(first):
                for rest in forests(n - first):
                    out.append((head,) + rest)
        return out

    def build(shape: tuple, counter: list[int]) -> AdtNode:
        counter[0] += 1
        node = AdtNode(
            id=f"n{counter[0]}",
            label="a" if counter[0] % 2 else "b",
            player=Player.PROPONENT,
        )
        node.children = [build(sub, counter) for sub in shape]
        return node

    return [build(shape, [0]) for shape in shapes(n_nodes)]
