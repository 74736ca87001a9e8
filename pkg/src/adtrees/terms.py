"""Algebraic term representation of attack-defense trees.

A term is either a basic action constant or an operator application over
``or_p``/``and_p``/``or_o``/``and_o`` (refinements) and ``c_p``/``c_o``
(countermeasure attachment). Terms carry no inner-node labels; converting a
tree to its term therefore also yields a sidecar map from term paths to the
labels of refined nodes, which makes the conversion invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import InvalidTreeError, PlayerTypeError, StructureError
from .model import AdtNode, Player, Refinement, iter_nodes, validate_tree


class TermOp(Enum):
    OR_P = "or_p"
    AND_P = "and_p"
    OR_O = "or_o"
    AND_O = "and_o"
    C_P = "c_p"
    C_O = "c_o"

    @property
    def player(self) -> Player:
        """Player of the operator's result."""
        return Player.PROPONENT if self in (TermOp.OR_P, TermOp.AND_P, TermOp.C_P) else Player.OPPONENT

    @property
    def is_counter(self) -> bool:
        return self in (TermOp.C_P, TermOp.C_O)

    @property
    def refinement(self) -> Optional[Refinement]:
        if self in (TermOp.AND_P, TermOp.AND_O):
            return Refinement.AND
        if self in (TermOp.OR_P, TermOp.OR_O):
            return Refinement.OR
        return None


@dataclass(frozen=True)
class Basic:
    player: Player
    label: str


@dataclass(frozen=True)
class Apply:
    op: TermOp
    args: tuple["TermNode", ...]


TermNode = Union[Basic, Apply]

#: Position of a subterm: argument indices from the term root.
TermPath = tuple[int, ...]

#: Sidecar carrying labels of refined nodes, keyed by the node's term path.
LabelSidecar = dict[TermPath, str]


def refinement_op(player: Player, refinement: Refinement) -> TermOp:
    if player is Player.PROPONENT:
        return TermOp.AND_P if refinement is Refinement.AND else TermOp.OR_P
    return TermOp.AND_O if refinement is Refinement.AND else TermOp.OR_O


def counter_op(player: Player) -> TermOp:
    return TermOp.C_P if player is Player.PROPONENT else TermOp.C_O


def check_term(term: TermNode, expected: Player = Player.PROPONENT) -> None:
    """Enforce the typing rules; raises PlayerTypeError or StructureError.

    Refinement operators take one or more arguments of their own player;
    counter operators take exactly two (own player, then the opposite one)
    and their first argument may not itself be headed by the same counter
    operator.
    """
    stack: list[tuple[TermNode, Player]] = [(term, expected)]
    while stack:
        t, want = stack.pop()
        if isinstance(t, Basic):
            if t.player is not want:
                raise PlayerTypeError(
                    f"basic action {t.label!r} is {t.player.value}-typed where "
                    f"{want.value} is required"
                )
            continue
        if t.op.player is not want:
            raise PlayerTypeError(
                f"{t.op.value} yields a {t.op.player.value}-typed term where "
                f"{want.value} is required"
            )
        if t.op.is_counter:
            if len(t.args) != 2:
                raise StructureError(f"{t.op.value} takes exactly 2 arguments, got {len(t.args)}")
            first = t.args[0]
            if isinstance(first, Apply) and first.op is t.op:
                raise StructureError(f"{t.op.value} may not be applied directly to a {t.op.value} term")
            stack.append((t.args[1], want.opposite))
            stack.append((first, want))
        else:
            if not t.args:
                raise StructureError(f"{t.op.value} needs at least one argument")
            for arg in reversed(t.args):
                stack.append((arg, want))


def term_player(term: TermNode) -> Player:
    return term.player if isinstance(term, Basic) else term.op.player


def tree_to_term(root: AdtNode) -> TermNode:
    term, _ = tree_to_term_with_labels(root)
    return term


def tree_to_term_with_labels(root: AdtNode) -> tuple[TermNode, LabelSidecar]:
    """Map a valid tree to its term plus the refined-node label sidecar.

    Basic action without counter -> constant; refined node -> or/and of the
    children's images; a counter wraps the node's image in c_p/c_o with the
    counter's image as second argument.
    """
    violations = validate_tree(root)
    if violations:
        raise InvalidTreeError(violations)

    order = list(iter_nodes(root))  # preorder: parents before descendants
    paths: dict[str, TermPath] = {root.id: ()}
    for node in order:
        base = paths[node.id]
        core = base + (0,) if node.counter is not None else base
        for i, child in enumerate(node.children):
            paths[child.id] = core + (i,)
        if node.counter is not None:
            paths[node.counter.id] = base + (1,)

    sidecar: LabelSidecar = {}
    terms: dict[str, TermNode] = {}
    for node in reversed(order):  # descendants are ready before their parent
        if node.children:
            op = refinement_op(node.player, node.refinement)
            image: TermNode = Apply(op, tuple(terms[c.id] for c in node.children))
            sidecar[paths[node.id]] = node.label
        else:
            image = Basic(node.player, node.label)
        if node.counter is not None:
            image = Apply(counter_op(node.player), (image, terms[node.counter.id]))
        terms[node.id] = image
    return terms[root.id], sidecar


def term_to_tree(term: TermNode, labels: Optional[LabelSidecar] = None) -> AdtNode:
    root, _ = term_to_tree_with_info(term, labels)
    return root


def term_to_tree_with_info(
    term: TermNode, labels: Optional[LabelSidecar] = None
) -> tuple[AdtNode, frozenset[str]]:
    """Left inverse of tree_to_term; also reports which node ids received
    synthesized ``node_<k>`` placeholder labels (refined nodes absent from
    the sidecar). Node ids are ``n1, n2, ...`` in preorder.
    """
    check_term(term)
    labels = labels or {}
    synthesized: set[str] = set()
    counters = {"id": 0, "k": 0}

    def next_id() -> str:
        counters["id"] += 1
        return f"n{counters['id']}"

    def make_node(t: TermNode, path: TermPath) -> tuple[AdtNode, list]:
        """Build the node for the image rooted at t; return pending sub-images."""
        pending = []
        if isinstance(t, Apply) and t.op.is_counter:
            core_term, counter_term = t.args
            core_path = path + (0,)
        else:
            core_term, counter_term = t, None
            core_path = path
        node = make_core(core_term, path)
        if isinstance(core_term, Apply):
            for i, arg in enumerate(core_term.args):
                pending.append((arg, core_path + (i,), node, "child"))
        if counter_term is not None:
            pending.append((counter_term, path + (1,), node, "counter"))
        return node, pending

    def make_core(core: TermNode, path: TermPath) -> AdtNode:
        node_id = next_id()
        if isinstance(core, Basic):
            if not core.label.strip():
                raise StructureError("basic actions must carry a non-empty label")
            return AdtNode(id=node_id, label=core.label, player=core.player)
        label = labels.get(path)
        if label is None:
            counters["k"] += 1
            label = f"node_{counters['k']}"
            synthesized.add(node_id)
        return AdtNode(
            id=node_id, label=label, player=core.op.player, refinement=core.op.refinement
        )

    root, pending = make_node(term, ())
    # Stack discipline keeps preorder numbering: children are pushed reversed
    # (counter first) so they pop left to right with the counter last.
    stack = list(reversed(pending))
    while stack:
        sub, path, parent, slot = stack.pop()
        node, pending = make_node(sub, path)
        if slot == "counter":
            parent.counter = node
        else:
            parent.children.append(node)
        stack.extend(reversed(pending))
    return root, frozenset(synthesized)
