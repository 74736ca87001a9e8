"""Documents: one tree plus any number of attached attribute-domain instances.

A domain instance pairs a registered domain id (and parameter values, e.g.
the time bound k) with a valuation covering the tree's basic actions. Edits
go through :func:`apply_edit`, which keeps every instance's valuation
coverage in step with the tree: entries whose (player, label) key survives
the edit are kept, keys that disappear are dropped, and newly appearing
actions start at the domain's worst-case default.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .domains import DomainRegistry, AttributeDomain, Value
from .errors import UnknownInstanceError
from .evaluation import (
    EvaluationResult,
    ValuationMap,
    carry_over_valuation,
    evaluate,
    init_valuation,
    set_value,
)
from .model import (
    AdtNode,
    ChangeRecord,
    Player,
    Refinement,
    RootRole,
    add_counter,
    clone_tree,
    delete_subtree,
    refine,
    relabel,
    set_refinement,
    toggle_fold,
)


@dataclass
class DomainInstance:
    instance_id: str
    domain_id: str
    params: dict[str, Value]
    valuation: ValuationMap
    extra: dict = field(default_factory=dict)


@dataclass
class AdtDocument:
    root_role: RootRole
    root: AdtNode
    instances: list[DomainInstance] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def instance(self, instance_id: str) -> DomainInstance:
        for inst in self.instances:
            if inst.instance_id == instance_id:
                return inst
        raise UnknownInstanceError(instance_id)

    def resolve_domain(self, registry: DomainRegistry, instance_id: str) -> AttributeDomain:
        inst = self.instance(instance_id)
        return registry.instantiate(inst.domain_id, inst.params)


def new_document(label: str = "Root", root_role: RootRole = RootRole.ATTACKER) -> AdtDocument:
    return AdtDocument(root_role=root_role, root=AdtNode(id="n1", label=label, player=Player.PROPONENT))


def copy_document(doc: AdtDocument) -> AdtDocument:
    return AdtDocument(
        root_role=doc.root_role,
        root=clone_tree(doc.root),
        instances=[replace(inst, params=dict(inst.params)) for inst in doc.instances],
        extra=dict(doc.extra),
    )


def _fresh_instance_id(doc: AdtDocument) -> str:
    taken = {inst.instance_id for inst in doc.instances}
    k = len(taken)
    while True:
        k += 1
        candidate = f"i{k}"
        if candidate not in taken:
            return candidate


def attach_domain(
    doc: AdtDocument,
    registry: DomainRegistry,
    domain_id: str,
    params: dict[str, Value] | None = None,
) -> tuple[AdtDocument, str]:
    """Attach a new instance with worst-case defaults; returns its id."""
    params = dict(params or {})
    domain = registry.instantiate(domain_id, params)  # validates id and params
    new_doc = copy_document(doc)
    instance_id = _fresh_instance_id(new_doc)
    valuation = init_valuation(new_doc.root, domain, instance_id)
    new_doc.instances.append(
        DomainInstance(instance_id=instance_id, domain_id=domain_id, params=params, valuation=valuation)
    )
    return new_doc, instance_id


def set_valuation_value(
    doc: AdtDocument,
    registry: DomainRegistry,
    instance_id: str,
    player: Player,
    label: str,
    value: Value,
) -> AdtDocument:
    new_doc = copy_document(doc)
    inst = new_doc.instance(instance_id)
    domain = registry.instantiate(inst.domain_id, inst.params)
    inst.valuation = set_value(inst.valuation, domain, player, label, value)
    return new_doc


def evaluate_instance(
    doc: AdtDocument, registry: DomainRegistry, instance_id: str
) -> EvaluationResult:
    inst = doc.instance(instance_id)
    domain = registry.instantiate(inst.domain_id, inst.params)
    return evaluate(doc.root, domain, inst.valuation)


def refresh_valuations(
    doc: AdtDocument, registry: DomainRegistry, old: AdtDocument
) -> AdtDocument:
    """Realign every instance's valuation with the document's current tree."""
    for inst in doc.instances:
        domain = registry.instantiate(inst.domain_id, inst.params)
        source = old.instance(inst.instance_id).valuation
        inst.valuation = carry_over_valuation(doc.root, domain, source)
    return doc


_EDITS = {
    "refine": lambda root, args: refine(
        root, args["nodeId"], Refinement(args["refinement"]), args["label"]
    ),
    "addCounter": lambda root, args: add_counter(root, args["nodeId"], args["label"]),
    "relabel": lambda root, args: relabel(root, args["nodeId"], args["label"]),
    "delete": lambda root, args: delete_subtree(root, args["nodeId"]),
    "setRefinement": lambda root, args: set_refinement(
        root, args["nodeId"], Refinement(args["refinement"])
    ),
    "toggleFold": lambda root, args: toggle_fold(root, args["nodeId"]),
}

EDIT_OPS = tuple(_EDITS)


def apply_edit(
    doc: AdtDocument, registry: DomainRegistry, op: str, args: dict
) -> tuple[AdtDocument, ChangeRecord]:
    """Run one named edit against the tree and realign all valuations."""
    try:
        edit = _EDITS[op]
    except KeyError:
        raise ValueError(f"unknown edit op {op!r}") from None
    new_root, record = edit(doc.root, args)
    new_doc = copy_document(doc)
    new_doc.root = new_root
    refresh_valuations(new_doc, registry, doc)
    return new_doc, record
