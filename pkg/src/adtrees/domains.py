"""Attribute domains: value kinds, the six per-constructor operators and the
built-in security measures, plus a registry for user-defined domains.

A domain assigns one binary operator to each term constructor; n-ary
refinements are folded left, which the registry's randomized associativity
self-check makes well-defined. Defaults encode the worst case for the
proponent (infinite cost, zero success probability, unsatisfiable) and the
strongest case for the opponent.

Infinity is represented by ``math.inf`` and serialized as the string
``"inf"``; arithmetic saturates naturally (``inf + x == inf``,
``min(inf, x) == x``).
"""

from __future__ import annotations

import json
import math
import random
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Mapping, Optional, Union

from .errors import (
    DomainCheckError,
    DuplicateDomainIdError,
    FormatError,
    UnknownDomainError,
)
from .model import Player, Refinement

Value = Union[bool, int, float]

INF = math.inf


class ValueKind(Enum):
    EXTENDED_NON_NEGATIVE_REAL = "extended-non-negative-real"
    UNIT_INTERVAL = "unit-interval"
    EXTENDED_NATURAL_LEVEL = "extended-natural-level"
    BOOLEAN = "boolean"

    def contains(self, value: Value) -> bool:
        if self is ValueKind.BOOLEAN:
            return isinstance(value, bool)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        if math.isnan(value):
            return False
        if self is ValueKind.UNIT_INTERVAL:
            return 0.0 <= value <= 1.0
        if self is ValueKind.EXTENDED_NON_NEGATIVE_REAL:
            return value >= 0
        # extended natural level: non-negative integer or infinity
        return value == INF or (value >= 0 and float(value).is_integer())

    def normalize(self, value: Value) -> Value:
        """Canonical in-kind representation (e.g. 3.0 -> 3 for levels)."""
        if self is ValueKind.BOOLEAN:
            return bool(value)
        if self is ValueKind.EXTENDED_NATURAL_LEVEL:
            return value if value == INF else int(value)
        return float(value)

    def random_value(self, rng: random.Random) -> Value:
        if self is ValueKind.BOOLEAN:
            return rng.random() < 0.5
        if self is ValueKind.UNIT_INTERVAL:
            return rng.choice([0.0, 1.0, round(rng.random(), 6)])
        if self is ValueKind.EXTENDED_NATURAL_LEVEL:
            return rng.choice([0, INF, rng.randint(0, 30)])
        return rng.choice([0.0, INF, round(rng.uniform(0.0, 50.0), 4)])

    def approx_equal(self, a: Value, b: Value) -> bool:
        if self is ValueKind.BOOLEAN or self is ValueKind.EXTENDED_NATURAL_LEVEL:
            return a == b
        return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def encode_value(value: Value) -> object:
    """JSON-safe encoding; infinity becomes the string "inf"."""
    if isinstance(value, bool):
        return value
    if value == INF:
        return "inf"
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def decode_value(raw: object) -> Value:
    """Inverse of encode_value; raises FormatError on non-values."""
    if isinstance(raw, bool):
        return raw
    if raw == "inf":
        return INF
    if isinstance(raw, (int, float)):
        return raw
    raise FormatError(f"not an attribute value: {raw!r}")


def format_value(value: Value) -> str:
    """Human-readable rendering used by the CLI and exports."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value == INF:
        return "inf"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


# Named binary operators; the declarative custom-domain format may only
# reference these.
_REFINEMENT_OPS: dict[str, Callable[[Value, Value], Value]] = {
    "min": min,
    "max": max,
    "plus": lambda x, y: x + y,
    "times": lambda x, y: x * y,
    # clamped: x+y-xy can overshoot 1.0 by one rounding ulp
    "prob-or": lambda x, y: min(1.0, x + y - x * y),
    "and": lambda x, y: x and y,
    "or": lambda x, y: x or y,
}
_COUNTER_ONLY_OPS: dict[str, Callable[[Value, Value], Value]] = {
    "inhibit": lambda x, y: x and not y,
    "prob-inhibit": lambda x, y: x * (1.0 - y),
}
_COUNTER_OPS = {**_REFINEMENT_OPS, **_COUNTER_ONLY_OPS}


def named_op(name: str) -> Callable[[Value, Value], Value]:
    """Resolve a whitelist operator by name (shared with custom domains)."""
    try:
        return _COUNTER_OPS[name]
    except KeyError:
        raise UnknownDomainError(f"no operator named {name!r}") from None


@dataclass(frozen=True, eq=False)
class AttributeDomain:
    """Value carrier plus the six operators and per-player worst-case defaults.

    ``root_predicate``, when present, post-maps the root value to a Boolean
    (e.g. reachability within ``params["k"]`` time units).
    """

    id: str
    display_name: str
    value_kind: ValueKind
    op_or_p: Callable[[Value, Value], Value]
    op_and_p: Callable[[Value, Value], Value]
    op_or_o: Callable[[Value, Value], Value]
    op_and_o: Callable[[Value, Value], Value]
    op_c_p: Callable[[Value, Value], Value]
    op_c_o: Callable[[Value, Value], Value]
    default_proponent: Value
    default_opponent: Value
    params: Mapping[str, Value] = field(default_factory=dict)
    param_names: tuple[str, ...] = ()
    root_predicate: Optional[Callable[[Value, Mapping[str, Value]], bool]] = None

    def refinement_op(self, player: Player, refinement: Refinement):
        if player is Player.PROPONENT:
            return self.op_and_p if refinement is Refinement.AND else self.op_or_p
        return self.op_and_o if refinement is Refinement.AND else self.op_or_o

    def counter_op(self, player: Player):
        return self.op_c_p if player is Player.PROPONENT else self.op_c_o

    def default_for(self, player: Player) -> Value:
        return self.default_proponent if player is Player.PROPONENT else self.default_opponent

    def with_params(self, params: Optional[Mapping[str, Value]]) -> "AttributeDomain":
        if not params:
            return self
        for name, value in params.items():
            if name not in self.param_names:
                raise DomainCheckError(f"domain {self.id!r} has no parameter {name!r}")
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
                raise DomainCheckError(f"parameter {name!r} must be a non-negative number")
        return replace(self, params={**self.params, **params})

    def describe(self) -> dict:
        return {
            "id": self.id,
            "displayName": self.display_name,
            "valueKind": self.value_kind.value,
            "params": {k: encode_value(v) for k, v in self.params.items()},
            "hasRootPredicate": self.root_predicate is not None,
        }


def apply_root_predicate(domain: AttributeDomain, value: Value) -> Value:
    """Boolean post-map when the domain declares one, identity otherwise."""
    if domain.root_predicate is None:
        return value
    return bool(domain.root_predicate(value, domain.params))


def _reaches_within(value: Value, params: Mapping[str, Value]) -> bool:
    # strict: the goal must be reached in *less than* k units
    return value < params["k"]


def builtin_domains() -> list[AttributeDomain]:
    """The shipped measures; operator order is (orP, andP, orO, andO, cP, cO)."""
    real = ValueKind.EXTENDED_NON_NEGATIVE_REAL
    ops = _REFINEMENT_OPS
    cops = _COUNTER_OPS
    return [
        AttributeDomain(
            id="satisfiability",
            display_name="Satisfiability of the scenario",
            value_kind=ValueKind.BOOLEAN,
            op_or_p=ops["or"],
            op_and_p=ops["and"],
            op_or_o=ops["or"],
            op_and_o=ops["and"],
            op_c_p=cops["inhibit"],
            op_c_o=cops["inhibit"],
            default_proponent=False,
            default_opponent=True,
        ),
        AttributeDomain(
            id="min-cost",
            display_name="Minimal cost for the proponent",
            value_kind=real,
            op_or_p=ops["min"],
            op_and_p=ops["plus"],
            op_or_o=ops["plus"],
            op_and_o=ops["min"],
            op_c_p=cops["plus"],
            op_c_o=cops["min"],
            default_proponent=INF,
            default_opponent=INF,
        ),
        AttributeDomain(
            id="min-time-sequential",
            display_name="Minimal time, actions executed sequentially",
            value_kind=real,
            op_or_p=ops["min"],
            op_and_p=ops["plus"],
            op_or_o=ops["plus"],
            op_and_o=ops["min"],
            op_c_p=cops["plus"],
            op_c_o=cops["min"],
            default_proponent=INF,
            default_opponent=INF,
        ),
        AttributeDomain(
            id="min-time-parallel",
            display_name="Minimal time, actions executed simultaneously",
            value_kind=real,
            op_or_p=ops["min"],
            op_and_p=ops["max"],
            op_or_o=ops["max"],
            op_and_o=ops["min"],
            op_c_p=cops["max"],
            op_c_o=cops["min"],
            default_proponent=INF,
            default_opponent=INF,
        ),
        AttributeDomain(
            id="min-skill-level",
            display_name="Minimal required skill level",
            value_kind=ValueKind.EXTENDED_NATURAL_LEVEL,
            op_or_p=ops["min"],
            op_and_p=ops["max"],
            op_or_o=ops["max"],
            op_and_o=ops["min"],
            op_c_p=cops["max"],
            op_c_o=cops["min"],
            default_proponent=INF,
            default_opponent=INF,
        ),
        AttributeDomain(
            id="probability-of-success",
            display_name="Success probability (independent actions)",
            value_kind=ValueKind.UNIT_INTERVAL,
            op_or_p=ops["prob-or"],
            op_and_p=ops["times"],
            op_or_o=ops["prob-or"],
            op_and_o=ops["times"],
            op_c_p=cops["prob-inhibit"],
            op_c_o=cops["prob-inhibit"],
            default_proponent=0.0,
            default_opponent=1.0,
        ),
        AttributeDomain(
            id="reachability-within-k",
            display_name="Goal reachable in less than k time units",
            value_kind=real,
            op_or_p=ops["min"],
            op_and_p=ops["max"],
            op_or_o=ops["max"],
            op_and_o=ops["min"],
            op_c_p=cops["max"],
            op_c_o=cops["min"],
            default_proponent=INF,
            default_opponent=INF,
            params={"k": INF},
            param_names=("k",),
            root_predicate=_reaches_within,
        ),
        AttributeDomain(
            id="max-power-consumption",
            display_name="Overall maximum power consumption",
            value_kind=real,
            op_or_p=ops["max"],
            op_and_p=ops["plus"],
            op_or_o=ops["max"],
            op_and_o=ops["plus"],
            op_c_p=cops["plus"],
            op_c_o=cops["plus"],
            default_proponent=0.0,
            default_opponent=0.0,
        ),
    ]


def check_domain(domain: AttributeDomain, triples: int = 1000, seed: int = 0x5EED) -> None:
    """Randomized self-check run on registration.

    Every refinement operator must be associative (and commutative) over the
    declared value kind so that n-ary folds are well-defined, must keep
    results inside the kind, and the defaults must lie in the kind.
    """
    kind = domain.value_kind
    for which, default in (("proponent", domain.default_proponent),
                           ("opponent", domain.default_opponent)):
        if not kind.contains(default):
            raise DomainCheckError(
                f"domain {domain.id!r}: {which} default {default!r} outside {kind.value}"
            )
    rng = random.Random(seed)
    named_ops = [
        ("orP", domain.op_or_p),
        ("andP", domain.op_and_p),
        ("orO", domain.op_or_o),
        ("andO", domain.op_and_o),
    ]
    for name, op in named_ops:
        for _ in range(triples):
            a, b, c = (kind.random_value(rng) for _ in range(3))
            try:
                left = op(op(a, b), c)
                right = op(a, op(b, c))
                forward = op(a, b)
                backward = op(b, a)
            except Exception as exc:
                raise DomainCheckError(f"domain {domain.id!r}: {name} failed on samples: {exc}")
            if not kind.contains(kind.normalize(left)):
                raise DomainCheckError(
                    f"domain {domain.id!r}: {name} leaves {kind.value} on ({a!r},{b!r},{c!r})"
                )
            if not kind.approx_equal(left, right):
                raise DomainCheckError(
                    f"domain {domain.id!r}: {name} is not associative on ({a!r},{b!r},{c!r})"
                )
            if not kind.approx_equal(forward, backward):
                raise DomainCheckError(
                    f"domain {domain.id!r}: {name} is not commutative on ({a!r},{b!r})"
                )


class DomainRegistry:
    """Id-indexed domain store; built-ins are always present.

    Registration is serialized and append-only; lookups hand out immutable
    domain objects and need no locking discipline from callers.
    """

    def __init__(self, include_builtins: bool = True):
        self._lock = threading.Lock()
        self._domains: dict[str, AttributeDomain] = {}
        if include_builtins:
            for domain in builtin_domains():
                self.register(domain, check=False)

    def register(self, domain: AttributeDomain, check: bool = True) -> None:
        if check:
            check_domain(domain)
        with self._lock:
            if domain.id in self._domains:
                raise DuplicateDomainIdError(domain.id)
            self._domains[domain.id] = domain

    def get(self, domain_id: str) -> AttributeDomain:
        try:
            return self._domains[domain_id]
        except KeyError:
            raise UnknownDomainError(domain_id) from None

    def instantiate(
        self, domain_id: str, params: Optional[Mapping[str, Value]] = None
    ) -> AttributeDomain:
        return self.get(domain_id).with_params(params)

    def ids(self) -> list[str]:
        return sorted(self._domains)

    def all(self) -> list[AttributeDomain]:
        return [self._domains[i] for i in self.ids()]

    def __contains__(self, domain_id: str) -> bool:
        return domain_id in self._domains


DEFAULT_REGISTRY = DomainRegistry()


def register_domain(domain: AttributeDomain) -> None:
    """Register with the process-wide registry (self-checked)."""
    DEFAULT_REGISTRY.register(domain)


_KIND_ALIASES = {kind.value: kind for kind in ValueKind}
_SLOT_NAMES = ("orP", "andP", "orO", "andO", "cP", "cO")


def domain_from_definition(obj: dict) -> AttributeDomain:
    """Build a domain from the declarative JSON form.

    Expected shape::

        {"id": "...", "valueKind": "extended-non-negative-real",
         "ops": {"orP": "min", "andP": "plus", "orO": "plus",
                 "andO": "min", "cP": "plus", "cO": "min"},
         "defaults": {"p": "inf", "o": "inf"}}

    Refinement slots accept {min,max,plus,times,prob-or,and,or}; counter
    slots additionally accept {inhibit,prob-inhibit}.
    """
    if not isinstance(obj, dict):
        raise FormatError("domain definition must be a JSON object")
    try:
        domain_id = obj["id"]
        kind_name = obj["valueKind"]
        ops = obj["ops"]
        defaults = obj["defaults"]
    except KeyError as exc:
        raise FormatError(f"domain definition lacks {exc.args[0]!r}") from None
    if not isinstance(domain_id, str) or not domain_id.strip():
        raise FormatError("domain id must be a non-empty string")
    kind = _KIND_ALIASES.get(kind_name)
    if kind is None:
        raise FormatError(f"unknown value kind {kind_name!r}")
    resolved: dict[str, Callable[[Value, Value], Value]] = {}
    for slot in _SLOT_NAMES:
        name = ops.get(slot)
        table = _COUNTER_OPS if slot in ("cP", "cO") else _REFINEMENT_OPS
        if name not in table:
            allowed = ", ".join(sorted(table))
            raise FormatError(f"op {slot}={name!r} not in the whitelist ({allowed})")
        resolved[slot] = table[name]
    try:
        default_p = decode_value(defaults["p"])
        default_o = decode_value(defaults["o"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad defaults: {exc}") from None
    return AttributeDomain(
        id=domain_id,
        display_name=obj.get("displayName", domain_id),
        value_kind=kind,
        op_or_p=resolved["orP"],
        op_and_p=resolved["andP"],
        op_or_o=resolved["orO"],
        op_and_o=resolved["andO"],
        op_c_p=resolved["cP"],
        op_c_o=resolved["cO"],
        default_proponent=kind.normalize(default_p) if kind.contains(default_p) else default_p,
        default_opponent=kind.normalize(default_o) if kind.contains(default_o) else default_o,
    )


def load_domain_definitions(path: str, registry: Optional[DomainRegistry] = None) -> list[str]:
    """Read one definition or a list of them from a JSON file and register
    each; returns the registered ids."""
    registry = registry or DEFAULT_REGISTRY
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, ValueError) as exc:
        raise FormatError(f"cannot read domain definitions from {path}: {exc}") from None
    entries = data if isinstance(data, list) else [data]
    registered: list[str] = []
    for entry in entries:
        domain = domain_from_definition(entry)
        registry.register(domain)
        registered.append(domain.id)
    return registered
