"""Shortest edit distance between ordered trees, and term-edit reconciliation.

The distance is the Zhang-Shasha keyroot dynamic program over postorder
enumerations; backtracking through the forest tables recovers the realizing
node mapping (injective, ancestor- and sibling-order preserving). For
matching purposes a countermeasure subtree counts as an extra last child.

``reconcile`` is the consumer: when the user rewrites the term view, the
old tree is matched against the tree built from the new term so that
surviving nodes keep their ids, labels, fold state and valuation entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .document import AdtDocument, copy_document, refresh_valuations
from .domains import DomainRegistry
from .errors import TooLargeError
from .model import AdtNode, clone_tree, iter_nodes
from .terms import TermNode, term_to_tree_with_info

INFINITE_COST = math.inf


@dataclass(frozen=True)
class Relabel:
    node_a: str
    node_b: str


@dataclass(frozen=True)
class Delete:
    node_a: str


@dataclass(frozen=True)
class Insert:
    node_b: str
    parent_b: Optional[str]
    position: int


EditOp = object  # Relabel | Delete | Insert


@dataclass(frozen=True)
class CostModel:
    """Per-operation costs; relabel may return INFINITE_COST to forbid a match."""

    relabel: Callable[[AdtNode, AdtNode], float]
    insert: Callable[[AdtNode], float]
    delete: Callable[[AdtNode], float]


def default_relabel_cost(a: AdtNode, b: AdtNode) -> float:
    """0 for identical (label, player, refinement), 1 otherwise; matching
    across players is forbidden so valuations never switch sides."""
    if a.player is not b.player:
        return INFINITE_COST
    return 0.0 if (a.label == b.label and a.refinement is b.refinement) else 1.0


def default_costs() -> CostModel:
    return CostModel(relabel=default_relabel_cost, insert=lambda _: 1.0, delete=lambda _: 1.0)


@dataclass(frozen=True)
class DiffResult:
    cost: float
    script: tuple[EditOp, ...]
    mapping: dict[str, str]  # idA -> idB over kept/relabeled nodes


def _ordered_children(node: AdtNode) -> list[AdtNode]:
    return node.children + ([node.counter] if node.counter is not None else [])


class _Flat:
    """Postorder enumeration with leftmost-leaf-descendants and keyroots."""

    def __init__(self, root: AdtNode):
        self.nodes: list[AdtNode] = []
        self.lmd: list[int] = []
        index: dict[int, int] = {}
        stack: list[tuple[AdtNode, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                kids = _ordered_children(node)
                i = len(self.nodes)
                index[id(node)] = i
                self.nodes.append(node)
                self.lmd.append(self.lmd[index[id(kids[0])]] if kids else i)
            else:
                stack.append((node, True))
                for child in reversed(_ordered_children(node)):
                    stack.append((child, False))
        roots: dict[int, int] = {}
        for i, l in enumerate(self.lmd):
            roots[l] = i  # the last postorder index per lmd is the keyroot
        self.keyroots = sorted(i + 1 for i in roots.values())
        self.size = len(self.nodes)


def _close(a: float, b: float) -> bool:
    return a == b or math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


class _Matcher:
    def __init__(self, a: AdtNode, b: AdtNode, costs: CostModel):
        self.A = _Flat(a)
        self.B = _Flat(b)
        self.costs = costs
        n, m = self.A.size + 1, self.B.size + 1
        self.td = [[0.0] * m for _ in range(n)]
        self.fd = [[0.0] * m for _ in range(n)]

    def forest_dist(self, i: int, j: int) -> None:
        A, B, costs, fd, td = self.A, self.B, self.costs, self.fd, self.td
        li, lj = A.lmd[i - 1], B.lmd[j - 1]
        fd[li][lj] = 0.0
        for di in range(li + 1, i + 1):
            fd[di][lj] = fd[di - 1][lj] + costs.delete(A.nodes[di - 1])
        for dj in range(lj + 1, j + 1):
            fd[li][dj] = fd[li][dj - 1] + costs.insert(B.nodes[dj - 1])
        for di in range(li + 1, i + 1):
            for dj in range(lj + 1, j + 1):
                del_cost = fd[di - 1][dj] + costs.delete(A.nodes[di - 1])
                ins_cost = fd[di][dj - 1] + costs.insert(B.nodes[dj - 1])
                if A.lmd[di - 1] == li and B.lmd[dj - 1] == lj:
                    rel = fd[di - 1][dj - 1] + costs.relabel(A.nodes[di - 1], B.nodes[dj - 1])
                    fd[di][dj] = min(del_cost, ins_cost, rel)
                    td[di][dj] = fd[di][dj]
                else:
                    sub = fd[A.lmd[di - 1]][B.lmd[dj - 1]] + td[di][dj]
                    fd[di][dj] = min(del_cost, ins_cost, sub)

    def distance(self) -> float:
        for i in self.A.keyroots:
            for j in self.B.keyroots:
                self.forest_dist(i, j)
        return self.td[self.A.size][self.B.size]

    def mapping(self) -> list[tuple[int, int]]:
        """Backtrack one optimal mapping as postorder index pairs."""
        pairs: list[tuple[int, int]] = []
        A, B, costs, fd = self.A, self.B, self.costs, self.fd
        queue = [(A.size, B.size)]
        first = True
        while queue:
            last_row, last_col = queue.pop()
            if not first:
                self.forest_dist(last_row, last_col)
            first = False
            first_row, first_col = A.lmd[last_row - 1], B.lmd[last_col - 1]
            row, col = last_row, last_col
            while row > first_row or col > first_col:
                here = fd[row][col]
                if row > first_row and _close(
                    fd[row - 1][col] + costs.delete(A.nodes[row - 1]), here
                ):
                    row -= 1
                elif col > first_col and _close(
                    fd[row][col - 1] + costs.insert(B.nodes[col - 1]), here
                ):
                    col -= 1
                elif A.lmd[row - 1] == first_row and B.lmd[col - 1] == first_col:
                    pairs.append((row - 1, col - 1))
                    row -= 1
                    col -= 1
                else:
                    queue.append((row, col))
                    row, col = A.lmd[row - 1], B.lmd[col - 1]
        return pairs


def tree_edit_distance(
    a: AdtNode, b: AdtNode, costs: Optional[CostModel] = None
) -> DiffResult:
    """Minimal-cost edit script between two ordered trees plus the node
    mapping that realizes it."""
    costs = costs or default_costs()
    matcher = _Matcher(a, b, costs)
    cost = matcher.distance()
    pairs = matcher.mapping()

    a_nodes, b_nodes = matcher.A.nodes, matcher.B.nodes
    mapping = {a_nodes[i].id: b_nodes[j].id for i, j in pairs}
    matched_a = {i for i, _ in pairs}
    matched_b = {j for _, j in pairs}

    script: list[EditOp] = []
    for i, j in sorted(pairs):
        if costs.relabel(a_nodes[i], b_nodes[j]) > 0:
            script.append(Relabel(a_nodes[i].id, b_nodes[j].id))
    for i, node in enumerate(a_nodes):  # postorder: children removed first
        if i not in matched_a:
            script.append(Delete(node.id))
    inserted_ids = {b_nodes[j].id for j in range(len(b_nodes)) if j not in matched_b}
    parent_of: dict[str, tuple[Optional[str], int]] = {b.id: (None, 0)}
    for node in iter_nodes(b):
        for pos, child in enumerate(_ordered_children(node)):
            parent_of[child.id] = (node.id, pos)
    for node in iter_nodes(b):  # preorder: parents inserted first
        if node.id in inserted_ids:
            parent, pos = parent_of[node.id]
            script.append(Insert(node.id, parent, pos))
    return DiffResult(cost=cost, script=tuple(script), mapping=mapping)


def script_accounts_for_both_trees(a: AdtNode, b: AdtNode, result: DiffResult) -> bool:
    """Sanity predicate: every node is mapped, deleted or inserted exactly once."""
    a_ids = {n.id for n in iter_nodes(a)}
    b_ids = {n.id for n in iter_nodes(b)}
    deleted = {op.node_a for op in result.script if isinstance(op, Delete)}
    inserted = {op.node_b for op in result.script if isinstance(op, Insert)}
    mapped_a = set(result.mapping)
    mapped_b = set(result.mapping.values())
    return (
        len(mapped_b) == len(mapped_a)
        and mapped_a | deleted == a_ids
        and not (mapped_a & deleted)
        and mapped_b | inserted == b_ids
        and not (mapped_b & inserted)
    )


MAX_BRUTE_FORCE_NODES = 10


def brute_force_distance(
    a: AdtNode, b: AdtNode, costs: Optional[CostModel] = None
) -> float:
    """Test oracle: exhaustive minimum over all valid ordered-tree mappings.

    Enumerates every injective, preorder-monotone, ancestor-consistent set
    of node pairs and charges relabel costs for pairs plus delete/insert
    costs for the unmatched rest. Exponential; capped at
    MAX_BRUTE_FORCE_NODES nodes per tree.
    """
    costs = costs or default_costs()
    a_nodes = list(iter_nodes(a))
    b_nodes = list(iter_nodes(b))
    if len(a_nodes) > MAX_BRUTE_FORCE_NODES or len(b_nodes) > MAX_BRUTE_FORCE_NODES:
        raise TooLargeError("brute-force oracle is exponential; trees too large")

    def ancestor_masks(nodes: list[AdtNode]) -> list[int]:
        index = {id(node): i for i, node in enumerate(nodes)}
        masks = [0] * len(nodes)
        stack: list[tuple[AdtNode, int]] = [(nodes[0], 0)]
        while stack:
            node, mask = stack.pop()
            i = index[id(node)]
            masks[i] = mask
            child_mask = mask | (1 << i)
            for child in _ordered_children(node):
                stack.append((child, child_mask))
        return masks

    anc_a = ancestor_masks(a_nodes)
    anc_b = ancestor_masks(b_nodes)
    del_total = sum(costs.delete(n) for n in a_nodes)
    ins_total = sum(costs.insert(n) for n in b_nodes)
    best = del_total + ins_total  # the empty mapping

    def extend(i_from: int, j_from: int, chosen: list[tuple[int, int]], saved: float, rel: float):
        nonlocal best
        candidate = del_total + ins_total - saved + rel
        if candidate < best:
            best = candidate
        for i in range(i_from, len(a_nodes)):
            for j in range(j_from, len(b_nodes)):
                r = costs.relabel(a_nodes[i], b_nodes[j])
                if r == INFINITE_COST:
                    continue
                ok = True
                for pi, pj in chosen:
                    if ((anc_a[i] >> pi) & 1) != ((anc_b[j] >> pj) & 1):
                        ok = False
                        break
                if not ok:
                    continue
                chosen.append((i, j))
                extend(
                    i + 1,
                    j + 1,
                    chosen,
                    saved + costs.delete(a_nodes[i]) + costs.insert(b_nodes[j]),
                    rel + r,
                )
                chosen.pop()

    extend(0, 0, [], 0.0, 0.0)
    return best


# --- reconciliation after a term edit ----------------------------------------


@dataclass(frozen=True)
class ReconcileSummary:
    matched: int
    inserted: int
    deleted: int
    distance: float


def _reconcile_costs(synthesized: frozenset[str]) -> CostModel:
    """Matching costs for candidate trees built from a term.

    Placeholder-labeled candidate nodes (the term cannot express inner-node
    names) match any same-player node whose effective refinement agrees at
    cost 0, so term edits do not shred inner labels.
    """

    def rel(a: AdtNode, b: AdtNode) -> float:
        if a.player is not b.player:
            return INFINITE_COST
        ra = a.refinement if a.children else None
        rb = b.refinement if b.children else None
        if b.id in synthesized:
            return 0.0 if ra is rb else 1.0
        return 0.0 if (a.label == b.label and ra is rb) else 1.0

    return CostModel(relabel=rel, insert=lambda _: 1.0, delete=lambda _: 1.0)


def reconcile(
    doc: AdtDocument, new_term: TermNode, registry: DomainRegistry
) -> tuple[AdtDocument, ReconcileSummary]:
    """Reshape the document's tree to the new term, preserving what survives.

    Matched nodes keep their old id, fold state and extra fields; their label
    follows the term where the term can express it (basic actions) and stays
    otherwise. Inserted nodes get fresh ids and default valuations; valuation
    entries whose (player, label) key disappears are dropped.
    """
    candidate, synthesized = term_to_tree_with_info(new_term)
    diff = tree_edit_distance(doc.root, candidate, costs=_reconcile_costs(synthesized))
    back = {b_id: a_id for a_id, b_id in diff.mapping.items()}

    old_by_id = {node.id: node for node in iter_nodes(doc.root)}
    taken = set(old_by_id)
    new_root = clone_tree(candidate)
    serial = 0
    inserted = 0
    for node in iter_nodes(new_root):
        old_id = back.get(node.id)
        if old_id is not None:
            old = old_by_id[old_id]
            if node.id in synthesized:
                node.label = old.label
            if not node.children:
                node.refinement = old.refinement  # keep the inert mark
            node.id = old_id
            node.folded = old.folded
            node.extra = dict(old.extra)
        else:
            inserted += 1
            while True:
                serial += 1
                fresh = f"n{serial}"
                if fresh not in taken:
                    break
            taken.add(fresh)
            node.id = fresh

    new_doc = copy_document(doc)
    new_doc.root = new_root
    refresh_valuations(new_doc, registry, doc)
    summary = ReconcileSummary(
        matched=len(diff.mapping),
        inserted=inserted,
        deleted=len(old_by_id) - len(diff.mapping),
        distance=diff.cost,
    )
    return new_doc, summary
