"""Bottom-up attribute evaluation.

The quantitative layer: a valuation assigns domain values to basic actions
keyed by (player, label) — nodes sharing a label denote the same action and
automatically share the value. Evaluation walks the tree in post-order,
folding each node's children with the operator its player and refinement
select, then applying the counter operator when a countermeasure is
attached. Runtime is linear in the node count.

``interpret_term`` is a deliberately separate reference path over the term
image, and the two ``oracle_*`` functions are brute-force checkers for small
instances; they exist so the engine can be cross-validated, not for
production use.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from functools import reduce
from typing import Optional

import numpy as np

from .domains import AttributeDomain, Value, apply_root_predicate, named_op
from .errors import (
    IncompleteValuationError,
    SharedLabelError,
    TooLargeError,
    UnknownActionError,
    ValueOutOfDomainError,
)
from .model import AdtNode, Player, Refinement, basic_actions, iter_nodes
from .terms import Basic, TermNode, TermOp

ActionKey = tuple[Player, str]

MAX_ORACLE_ACTIONS = 20


class Provenance(Enum):
    DEFAULT = "Default"
    USER_SET = "UserSet"


@dataclass(frozen=True)
class ValuationMap:
    """Assignment of domain values to basic actions; updated functionally."""

    domain_instance_id: str
    entries: dict[ActionKey, Value]
    provenance: dict[ActionKey, Provenance]

    def value_of(self, player: Player, label: str) -> Value:
        return self.entries[(player, label)]


@dataclass(frozen=True)
class EvaluationResult:
    """Per-node values plus the root value and its predicate image.

    ``per_node`` holds each node's own value: the valuation entry for a
    basic action, the refinement fold for a refined node. Countermeasures
    act on the way up — the combined c-operator value feeds the parent (and
    ``root_value`` for the root) but is not what the node displays, so nodes
    sharing an action label always show the same value.

    ``dependence_warning`` flags probability results on trees where one
    action label appears at several nodes: the bottom-up fold assumes
    independent actions and silently ignores the dependence.
    """

    per_node: dict[str, Value]
    root_value: Value
    root_display: Value
    dependence_warning: bool = False


def init_valuation(
    tree: AdtNode, domain: AttributeDomain, instance_id: str = ""
) -> ValuationMap:
    """Worst-case defaults for every distinct basic action of the tree."""
    entries: dict[ActionKey, Value] = {}
    provenance: dict[ActionKey, Provenance] = {}
    for player, label in basic_actions(tree):
        entries[(player, label)] = domain.default_for(player)
        provenance[(player, label)] = Provenance.DEFAULT
    return ValuationMap(instance_id, entries, provenance)


def set_value(
    valuation: ValuationMap,
    domain: AttributeDomain,
    player: Player,
    label: str,
    value: Value,
) -> ValuationMap:
    """Replace one action's value; every node bearing the same (player, label)
    observes it on the next evaluation."""
    key = (player, label)
    if key not in valuation.entries:
        raise UnknownActionError(f"{player.value}:{label}")
    if not domain.value_kind.contains(value):
        raise ValueOutOfDomainError(
            f"{value!r} is outside {domain.value_kind.value} for {player.value}:{label}"
        )
    entries = dict(valuation.entries)
    provenance = dict(valuation.provenance)
    entries[key] = domain.value_kind.normalize(value)
    provenance[key] = Provenance.USER_SET
    return replace(valuation, entries=entries, provenance=provenance)


def carry_over_valuation(
    tree: AdtNode, domain: AttributeDomain, old: ValuationMap
) -> ValuationMap:
    """Re-initialize coverage for a (possibly reshaped) tree, keeping the old
    value and provenance wherever the action key survived."""
    fresh = init_valuation(tree, domain, old.domain_instance_id)
    entries = dict(fresh.entries)
    provenance = dict(fresh.provenance)
    for key in entries:
        if key in old.entries:
            entries[key] = old.entries[key]
            provenance[key] = old.provenance[key]
    return replace(fresh, entries=entries, provenance=provenance)


def evaluate(tree: AdtNode, domain: AttributeDomain, valuation: ValuationMap) -> EvaluationResult:
    """Post-order bottom-up computation over the tree's term image."""
    order = list(iter_nodes(tree))
    per_node: dict[str, Value] = {}
    image: dict[str, Value] = {}  # value including the node's counter, fed upward
    entries = valuation.entries
    basic_seen: dict[ActionKey, int] = {}
    for node in reversed(order):  # children and counters before their parent
        if node.children:
            op = domain.refinement_op(node.player, node.refinement)
            value = reduce(op, (image[c.id] for c in node.children))
        else:
            key = (node.player, node.label)
            basic_seen[key] = basic_seen.get(key, 0) + 1
            try:
                value = entries[key]
            except KeyError:
                raise IncompleteValuationError(f"{node.player.value}:{node.label}") from None
        per_node[node.id] = value
        if node.counter is not None:
            value = domain.counter_op(node.player)(value, image[node.counter.id])
        image[node.id] = value
    root_value = image[tree.id]
    warn = domain.value_kind.value == "unit-interval" and any(
        count > 1 for count in basic_seen.values()
    )
    return EvaluationResult(
        per_node=per_node,
        root_value=root_value,
        root_display=apply_root_predicate(domain, root_value),
        dependence_warning=warn,
    )


def recompute_after_change(
    tree: AdtNode,
    domain: AttributeDomain,
    valuation: ValuationMap,
    changed_key: Optional[ActionKey] = None,
) -> EvaluationResult:
    """Reactive entry point after a valuation change.

    Full recomputation is linear, so no dirty-subtree tracking: the result is
    identical to a fresh ``evaluate``.
    """
    del changed_key  # the full pass does not need it
    return evaluate(tree, domain, valuation)


_TERM_OP_SLOT = {
    TermOp.OR_P: "op_or_p",
    TermOp.AND_P: "op_and_p",
    TermOp.OR_O: "op_or_o",
    TermOp.AND_O: "op_and_o",
    TermOp.C_P: "op_c_p",
    TermOp.C_O: "op_c_o",
}


def interpret_term(term: TermNode, domain: AttributeDomain, valuation: ValuationMap) -> Value:
    """Direct recursive interpreter over the term; the reference the engine's
    node-table evaluation is checked against."""
    if isinstance(term, Basic):
        key = (term.player, term.label)
        try:
            return valuation.entries[key]
        except KeyError:
            raise IncompleteValuationError(f"{term.player.value}:{term.label}") from None
    op = getattr(domain, _TERM_OP_SLOT[term.op])
    values = [interpret_term(arg, domain, valuation) for arg in term.args]
    return reduce(op, values)


# --- verification oracles ---------------------------------------------------

_MIN = named_op("min")
_PLUS = named_op("plus")
_MAX = named_op("max")

_RESOLUTION_CAP = 1 << 21


def _is_min_family(domain: AttributeDomain) -> bool:
    """Shape check: choice by minimum, one monotone combining operator."""
    return (
        domain.op_or_p is _MIN
        and domain.op_and_o is _MIN
        and domain.op_c_o is _MIN
        and domain.op_and_p in (_PLUS, _MAX)
        and domain.op_or_o is domain.op_and_p
        and domain.op_c_p is domain.op_and_p
    )


def oracle_strategy_min(
    tree: AdtNode, domain: AttributeDomain, valuation: ValuationMap
) -> Value:
    """Exhaustive strategy enumeration for the min-family domains.

    A resolution picks one child at each proponent-OR and each opponent-AND,
    keeps all children at proponent-AND and opponent-OR, combines both
    operands at proponent counters, and may either fight or ignore the
    counter at opponent nodes. The oracle returns the minimum over all
    resolutions of the combined chosen-leaf values.
    """
    if not _is_min_family(domain):
        raise ValueError(f"domain {domain.id!r} is not a min-family domain")
    if len(basic_actions(tree)) > MAX_ORACLE_ACTIONS:
        raise TooLargeError(f"more than {MAX_ORACLE_ACTIONS} basic actions")
    combine = domain.op_and_p
    entries = valuation.entries

    def resolutions(node: AdtNode) -> list[Value]:
        if node.children:
            parts = [resolutions(child) for child in node.children]
            chooses = (node.player is Player.PROPONENT) == (node.refinement is Refinement.OR)
            if chooses:
                core = [v for part in parts for v in part]
            else:
                core = parts[0]
                for part in parts[1:]:
                    core = [combine(a, b) for a in core for b in part]
                    if len(core) > _RESOLUTION_CAP:
                        raise TooLargeError("resolution set exceeds the enumeration cap")
        else:
            key = (node.player, node.label)
            try:
                core = [entries[key]]
            except KeyError:
                raise IncompleteValuationError(f"{node.player.value}:{node.label}") from None
        if node.counter is not None:
            counter_values = resolutions(node.counter)
            if node.player is Player.PROPONENT:
                core = [combine(a, b) for a in core for b in counter_values]
            else:
                core = core + counter_values
            if len(core) > _RESOLUTION_CAP:
                raise TooLargeError("resolution set exceeds the enumeration cap")
        return core

    return min(resolutions(tree))


def oracle_world_probability(tree: AdtNode, valuation: ValuationMap) -> float:
    """World-enumeration oracle for the independent-probability domain.

    Sums, over all 2^n possible outcomes of the n basic actions (weighted by
    independent Bernoulli draws with the valuation's probabilities), the
    satisfiability of the root in that outcome. Requires pairwise distinct
    action keys; with shared labels the world weights would double-count.
    """
    actions = basic_actions(tree)
    occurrences: dict[ActionKey, int] = {}
    for node in iter_nodes(tree):
        if node.is_basic:
            key = (node.player, node.label)
            occurrences[key] = occurrences.get(key, 0) + 1
    shared = [key for key, count in occurrences.items() if count > 1]
    if shared:
        player, label = shared[0]
        raise SharedLabelError(f"{player.value}:{label} occurs at several nodes")
    n = len(actions)
    if n > MAX_ORACLE_ACTIONS:
        raise TooLargeError(f"more than {MAX_ORACLE_ACTIONS} basic actions")

    index = {key: i for i, key in enumerate(actions)}
    worlds = np.arange(1 << n, dtype=np.uint32)
    truth = [(worlds >> i) & 1 == 1 for i in range(n)]
    weights = np.ones(1 << n, dtype=np.float64)
    for key, i in index.items():
        try:
            p = float(valuation.entries[key])
        except KeyError:
            raise IncompleteValuationError(f"{key[0].value}:{key[1]}") from None
        weights *= np.where(truth[i], p, 1.0 - p)

    def satisfied(node: AdtNode) -> np.ndarray:
        if node.children:
            parts = [satisfied(child) for child in node.children]
            value = parts[0]
            if node.refinement is Refinement.AND:
                for part in parts[1:]:
                    value = value & part
            else:
                for part in parts[1:]:
                    value = value | part
        else:
            value = truth[index[(node.player, node.label)]]
        if node.counter is not None:
            value = value & ~satisfied(node.counter)
        return value

    return float(weights[satisfied(tree)].sum())
