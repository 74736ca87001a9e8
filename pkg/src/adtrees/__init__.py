"""Attack-defense tree modeling and bottom-up quantitative analysis.

The pieces, bottom to top: ``model`` (the tree structure and edits),
``terms``/``termtext`` (the algebraic view and its textual syntax),
``domains`` (attribute domains and the registry), ``evaluation`` (the
bottom-up algorithm plus verification oracles), ``treediff`` (shortest
edit distance and term-edit reconciliation), ``layout`` (tidy positioning),
``document``/``ioexport`` (persistence and rendering), ``service`` (the
HTTP boundary) and ``cli``.
"""

from .document import (
    AdtDocument,
    DomainInstance,
    apply_edit,
    attach_domain,
    evaluate_instance,
    new_document,
    set_valuation_value,
)
from .domains import (
    AttributeDomain,
    DEFAULT_REGISTRY,
    DomainRegistry,
    ValueKind,
    apply_root_predicate,
    builtin_domains,
    load_domain_definitions,
    register_domain,
)
from .errors import AdtError
from .evaluation import (
    EvaluationResult,
    Provenance,
    ValuationMap,
    evaluate,
    init_valuation,
    interpret_term,
    oracle_strategy_min,
    oracle_world_probability,
    recompute_after_change,
    set_value,
)
from .ioexport import export_svg, export_tikz, load, save
from .layout import LayoutConfig, LayoutResult, layout
from .model import (
    AdtNode,
    ChangeRecord,
    Player,
    Refinement,
    RootRole,
    StructureViolation,
    ViolationCode,
    add_counter,
    basic_actions,
    delete_subtree,
    isomorphic,
    refine,
    relabel,
    set_refinement,
    toggle_fold,
    validate_tree,
)
from .service import DocumentStore, create_app, run_server
from .terms import (
    Apply,
    Basic,
    TermNode,
    TermOp,
    check_term,
    term_to_tree,
    tree_to_term,
    tree_to_term_with_labels,
)
from .termtext import SourceSpan, lint_term, parse_term, print_term
from .treediff import (
    CostModel,
    DiffResult,
    brute_force_distance,
    default_costs,
    reconcile,
    tree_edit_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
