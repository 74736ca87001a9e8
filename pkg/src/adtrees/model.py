"""Tree model for attack-defense trees.

A tree is a rooted structure of :class:`AdtNode`. Each node belongs to a
player (proponent or opponent), may be refined into AND/OR children of the
same player, and may carry at most one countermeasure subtree rooted in a
node of the opposite player. A non-refined node is a *basic action* even
when it carries a counter.

Trees are treated as immutable snapshots: every edit operation clones the
tree, applies the change to the clone and returns it together with a
:class:`ChangeRecord`. Snapshots can therefore be shared freely between
threads; serialization of concurrent edits is the document store's job.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from .errors import (
    DoubleCounterError,
    EmptyDocumentError,
    EmptyLabelError,
    UnknownNodeError,
)


class Player(Enum):
    PROPONENT = "p"
    OPPONENT = "o"

    @property
    def opposite(self) -> "Player":
        return Player.OPPONENT if self is Player.PROPONENT else Player.PROPONENT


class RootRole(Enum):
    """Real-world role of the proponent: the root goal's owner."""

    ATTACKER = "attacker"
    DEFENDER = "defender"


class Refinement(Enum):
    AND = "AND"
    OR = "OR"


@dataclass
class AdtNode:
    """One node of an attack-defense tree.

    ``refinement`` is meaningful only while ``children`` is non-empty; it is
    stored but inert on basic actions. ``folded`` is pure view state and never
    affects evaluation or term conversion. ``extra`` holds unknown fields from
    loaded files so they survive a save/load round-trip; it is never
    interpreted.
    """

    id: str
    label: str
    player: Player
    refinement: Refinement = Refinement.OR
    children: list["AdtNode"] = field(default_factory=list)
    counter: Optional["AdtNode"] = None
    folded: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def is_basic(self) -> bool:
        return not self.children


class ViolationCode(Enum):
    DUPLICATE_ID = "DuplicateId"
    EMPTY_LABEL = "EmptyLabel"
    DOUBLE_COUNTER = "DoubleCounter"
    PLAYER_MISMATCH = "PlayerMismatch"


@dataclass(frozen=True)
class StructureViolation:
    node_id: str
    code: ViolationCode
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.code.value} at node {self.node_id!r}"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass(frozen=True)
class ChangeRecord:
    """What an edit did, for undo bookkeeping and service change feeds."""

    op: str
    target: str
    created: tuple[str, ...] = ()
    removed: tuple[str, ...] = ()
    updated: tuple[str, ...] = ()

    @property
    def changed_ids(self) -> tuple[str, ...]:
        seen = dict.fromkeys(self.updated)
        seen.update(dict.fromkeys(self.created))
        seen.update(dict.fromkeys(self.removed))
        return tuple(seen)


def iter_nodes(root: AdtNode) -> Iterator[AdtNode]:
    """Preorder walk: node, refining subtrees left to right, counter subtree."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if node.counter is not None:
            stack.append(node.counter)
        for child in reversed(node.children):
            stack.append(child)


def node_count(root: AdtNode) -> int:
    return sum(1 for _ in iter_nodes(root))


def find_node(root: AdtNode, node_id: str) -> AdtNode:
    for node in iter_nodes(root):
        if node.id == node_id:
            return node
    raise UnknownNodeError(node_id)


def find_parent(root: AdtNode, node_id: str) -> Optional[AdtNode]:
    """Parent of the node (via refinement or counter edge), None for the root."""
    for node in iter_nodes(root):
        for child in node.children:
            if child.id == node_id:
                return node
        if node.counter is not None and node.counter.id == node_id:
            return node
    return None


def basic_actions(root: AdtNode) -> list[tuple[Player, str]]:
    """Distinct (player, label) keys of the tree's basic actions, in preorder."""
    seen: dict[tuple[Player, str], None] = {}
    for node in iter_nodes(root):
        if node.is_basic:
            seen.setdefault((node.player, node.label), None)
    return list(seen)


def validate_tree(root: AdtNode) -> list[StructureViolation]:
    """Check every node invariant; violations are data, not failures.

    Player consistency is checked relative to the root's stored player:
    refining children keep their parent's player, a counter flips it. The
    walk is cycle-safe: a node object reached twice is reported as a
    duplicate id and not descended into again.
    """
    violations: list[StructureViolation] = []
    seen_ids: set[str] = set()
    seen_objects: set[int] = set()
    stack: list[tuple[AdtNode, Player]] = [(root, root.player)]
    while stack:
        node, expected = stack.pop()
        if id(node) in seen_objects:
            violations.append(
                StructureViolation(node.id, ViolationCode.DUPLICATE_ID, "node reachable twice")
            )
            continue
        seen_objects.add(id(node))
        if node.id in seen_ids:
            violations.append(StructureViolation(node.id, ViolationCode.DUPLICATE_ID))
        seen_ids.add(node.id)
        if not node.label.strip():
            violations.append(StructureViolation(node.id, ViolationCode.EMPTY_LABEL))
        if node.player is not expected:
            violations.append(
                StructureViolation(
                    node.id,
                    ViolationCode.PLAYER_MISMATCH,
                    f"stored {node.player.value}, expected {expected.value}",
                )
            )
        # Descend with the *stored* player so one mismatch is reported once,
        # not repeated for the whole subtree underneath.
        if node.counter is not None:
            stack.append((node.counter, node.player.opposite))
        for child in reversed(node.children):
            stack.append((child, node.player))
    return violations


def clone_tree(root: AdtNode) -> AdtNode:
    def shallow(node: AdtNode) -> AdtNode:
        return AdtNode(
            id=node.id,
            label=node.label,
            player=node.player,
            refinement=node.refinement,
            children=[],
            counter=None,
            folded=node.folded,
            extra=dict(node.extra),
        )

    new_root = shallow(root)
    stack = [(root, new_root)]
    while stack:
        old, new = stack.pop()
        for child in old.children:
            twin = shallow(child)
            new.children.append(twin)
            stack.append((child, twin))
        if old.counter is not None:
            twin = shallow(old.counter)
            new.counter = twin
            stack.append((old.counter, twin))
    return new_root


def isomorphic(a: AdtNode, b: AdtNode, include_fold: bool = False) -> bool:
    """Node-by-node equality of shape, label, player, refinement and child order.

    Ids are ignored. Refinement is compared only where it is meaningful
    (nodes with refining children); the inert mark on basic actions is not
    observable through terms and does not count.
    """
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x.label != y.label or x.player is not y.player:
            return False
        if x.children and x.refinement is not y.refinement:
            return False
        if include_fold and x.folded != y.folded:
            return False
        if len(x.children) != len(y.children):
            return False
        if (x.counter is None) != (y.counter is None):
            return False
        stack.extend(zip(x.children, y.children))
        if x.counter is not None and y.counter is not None:
            stack.append((x.counter, y.counter))
    return True


def equal_modulo_child_order(a: AdtNode, b: AdtNode) -> bool:
    """Isomorphism up to permutation of refining children.

    The storage model keeps child order significant; this predicate provides
    the unordered view of equality for callers that want the formal reading.
    """

    def key(node: AdtNode) -> tuple:
        child_keys = sorted(key(c) for c in node.children)
        counter_key = key(node.counter) if node.counter is not None else None
        refinement = node.refinement.value if node.children else "-"
        return (node.label, node.player.value, refinement, tuple(child_keys), counter_key)

    return key(a) == key(b)


_NUMERIC_ID = re.compile(r"^n(\d+)$")


def fresh_node_ids(root: AdtNode, count: int) -> list[str]:
    """Ids of the form ``n<k>`` guaranteed absent from the tree."""
    taken = {node.id for node in iter_nodes(root)}
    start = 0
    for node_id in taken:
        match = _NUMERIC_ID.match(node_id)
        if match:
            start = max(start, int(match.group(1)))
    out: list[str] = []
    k = start
    while len(out) < count:
        k += 1
        candidate = f"n{k}"
        if candidate not in taken:
            out.append(candidate)
    return out


# --- edit operations --------------------------------------------------------
#
# Every edit returns (new_root, ChangeRecord); the input tree is untouched.


def _checked_label(label: str) -> str:
    if not label.strip():
        raise EmptyLabelError("node labels must be non-empty")
    return label


def refine(
    root: AdtNode, node_id: str, refinement: Refinement, label: str
) -> tuple[AdtNode, ChangeRecord]:
    """Add one refining child with the given label and set the refinement type."""
    label = _checked_label(label)
    new_root = clone_tree(root)
    node = find_node(new_root, node_id)
    (child_id,) = fresh_node_ids(new_root, 1)
    node.children.append(AdtNode(id=child_id, label=label, player=node.player))
    node.refinement = refinement
    record = ChangeRecord("refine", node_id, created=(child_id,), updated=(node_id,))
    return new_root, record


def add_counter(root: AdtNode, node_id: str, label: str) -> tuple[AdtNode, ChangeRecord]:
    label = _checked_label(label)
    new_root = clone_tree(root)
    node = find_node(new_root, node_id)
    if node.counter is not None:
        raise DoubleCounterError(f"node {node_id!r} already has a countermeasure")
    (counter_id,) = fresh_node_ids(new_root, 1)
    node.counter = AdtNode(id=counter_id, label=label, player=node.player.opposite)
    record = ChangeRecord("addCounter", node_id, created=(counter_id,), updated=(node_id,))
    return new_root, record


def relabel(root: AdtNode, node_id: str, label: str) -> tuple[AdtNode, ChangeRecord]:
    label = _checked_label(label)
    new_root = clone_tree(root)
    node = find_node(new_root, node_id)
    node.label = label
    return new_root, ChangeRecord("relabel", node_id, updated=(node_id,))


def delete_subtree(root: AdtNode, node_id: str) -> tuple[AdtNode, ChangeRecord]:
    """Remove the node and everything below it. The root itself is protected."""
    if root.id == node_id:
        raise EmptyDocumentError("the root cannot be deleted; relabel it instead")
    new_root = clone_tree(root)
    node = find_node(new_root, node_id)
    parent = find_parent(new_root, node_id)
    if parent is None:
        raise UnknownNodeError(node_id)
    removed = tuple(n.id for n in iter_nodes(node))
    if parent.counter is not None and parent.counter.id == node_id:
        parent.counter = None
    else:
        parent.children = [c for c in parent.children if c.id != node_id]
    record = ChangeRecord("delete", node_id, removed=removed, updated=(parent.id,))
    return new_root, record


def set_refinement(
    root: AdtNode, node_id: str, refinement: Refinement
) -> tuple[AdtNode, ChangeRecord]:
    new_root = clone_tree(root)
    node = find_node(new_root, node_id)
    node.refinement = refinement
    return new_root, ChangeRecord("setRefinement", node_id, updated=(node_id,))


def toggle_fold(root: AdtNode, node_id: str) -> tuple[AdtNode, ChangeRecord]:
    new_root = clone_tree(root)
    node = find_node(new_root, node_id)
    node.folded = not node.folded
    return new_root, ChangeRecord("toggleFold", node_id, updated=(node_id,))
