"""Bottom-up evaluation against its three independent checking routes:
strategy enumeration, world enumeration, and the term interpreter."""

from __future__ import annotations

import pytest
from hypothesis import assume, given, settings, strategies as st

from adtrees.domains import DEFAULT_REGISTRY, INF
from adtrees.errors import (
    IncompleteValuationError,
    SharedLabelError,
    TooLargeError,
    UnknownActionError,
    ValueOutOfDomainError,
)
from adtrees.evaluation import (
    Provenance,
    carry_over_valuation,
    evaluate,
    init_valuation,
    interpret_term,
    oracle_strategy_min,
    oracle_world_probability,
    recompute_after_change,
    set_value,
)
from adtrees.model import Player, basic_actions, iter_nodes
from adtrees.terms import tree_to_term
from adtrees.termtext import parse_term
from adtrees.terms import term_to_tree

from strategies import adt_trees, domain_values, make_basic_labels_distinct

P = Player.PROPONENT
O = Player.OPPONENT

MIN_FAMILY = ("min-cost", "min-time-sequential", "min-time-parallel", "min-skill-level")


def dom(domain_id):
    return DEFAULT_REGISTRY.get(domain_id)


def tree_of(text):
    return term_to_tree(parse_term(text))


def valued(tree, domain, assignments=None):
    valuation = init_valuation(tree, domain)
    for (player, label), value in (assignments or {}).items():
        valuation = set_value(valuation, domain, player, label, value)
    return valuation


def fill_valuation(draw_value, tree, domain):
    valuation = init_valuation(tree, domain)
    for player, label in list(valuation.entries):
        valuation = set_value(valuation, domain, player, label, draw_value())
    return valuation


def test_init_min_cost_defaults_are_infinite():
    tree = tree_of("or_p(a, b, c)")
    valuation = init_valuation(tree, dom("min-cost"))
    assert set(valuation.entries.values()) == {INF}
    assert set(valuation.provenance.values()) == {Provenance.DEFAULT}


def test_init_defender_leaf_defaults_true():
    tree = tree_of("c_p(a, d)")
    valuation = init_valuation(tree, dom("satisfiability"))
    assert valuation.entries[(O, "d")] is True
    assert valuation.entries[(P, "a")] is False


def test_init_probability_defaults_zero():
    tree = tree_of("and_p(a, b)")
    valuation = init_valuation(tree, dom("probability-of-success"))
    assert valuation.entries[(P, "a")] == 0.0


def test_set_value_out_of_kind():
    tree = tree_of("a")
    valuation = init_valuation(tree, dom("probability-of-success"))
    with pytest.raises(ValueOutOfDomainError):
        set_value(valuation, dom("probability-of-success"), P, "a", 1.2)


def test_set_value_unknown_action():
    tree = tree_of("a")
    valuation = init_valuation(tree, dom("min-cost"))
    with pytest.raises(UnknownActionError):
        set_value(valuation, dom("min-cost"), P, "bribe", 1.0)


def test_shared_label_nodes_share_the_value():
    tree = tree_of("and_p(bribe, or_p(bribe, c))")
    domain = dom("min-cost")
    valuation = valued(tree, domain, {(P, "bribe"): 100.0, (P, "c"): 1.0})
    result = evaluate(tree, domain, valuation)
    values = [result.per_node[n.id] for n in iter_nodes(tree) if n.label == "bribe"]
    assert values == [100.0, 100.0]


def test_min_cost_example_root_13():
    tree = tree_of("and_p(a, or_p(b, c))")
    domain = dom("min-cost")
    valuation = valued(tree, domain, {(P, "a"): 10.0, (P, "b"): 5.0, (P, "c"): 3.0})
    result = evaluate(tree, domain, valuation)
    assert result.root_value == 13.0
    assert oracle_strategy_min(tree, domain, valuation) == 13.0


def test_satisfiability_counter_example():
    tree = tree_of("c_p(a, d)")
    domain = dom("satisfiability")
    valuation = valued(tree, domain, {(P, "a"): True, (O, "d"): False})
    assert evaluate(tree, domain, valuation).root_value is True


def test_probability_counter_example():
    tree = tree_of("c_p(a, d)")
    domain = dom("probability-of-success")
    valuation = valued(tree, domain, {(P, "a"): 0.8, (O, "d"): 0.5})
    result = evaluate(tree, domain, valuation)
    assert result.root_value == pytest.approx(0.4, abs=1e-12)
    assert oracle_world_probability(tree, valuation) == pytest.approx(0.4, abs=1e-12)


def test_per_node_covers_every_node_and_counters_apply():
    tree = tree_of("c_p(or_p(a, b), d)")
    domain = dom("satisfiability")
    valuation = valued(tree, domain, {(P, "a"): True, (O, "d"): True})
    result = evaluate(tree, domain, valuation)
    assert set(result.per_node) == {n.id for n in iter_nodes(tree)}
    assert result.root_value is False  # the counter defeats the or


def test_incomplete_valuation_detected():
    tree = tree_of("or_p(a, b)")
    domain = dom("min-cost")
    valuation = init_valuation(tree, domain)
    valuation.entries.pop((P, "b"))
    with pytest.raises(IncompleteValuationError):
        evaluate(tree, domain, valuation)


def test_recompute_equals_fresh_evaluate():
    tree = tree_of("and_p(a, or_p(b, c))")
    domain = dom("min-cost")
    valuation = valued(tree, domain, {(P, "a"): 4.0})
    assert recompute_after_change(tree, domain, valuation, (P, "a")) == evaluate(
        tree, domain, valuation
    )


def test_carry_over_keeps_surviving_entries():
    old_tree = tree_of("or_p(a, b)")
    domain = dom("min-cost")
    old = valued(old_tree, domain, {(P, "a"): 7.0})
    new_tree = tree_of("or_p(a, c)")
    merged = carry_over_valuation(new_tree, domain, old)
    assert merged.entries[(P, "a")] == 7.0
    assert merged.provenance[(P, "a")] is Provenance.USER_SET
    assert merged.entries[(P, "c")] == INF
    assert (P, "b") not in merged.entries


def test_oracle_single_leaf_and_idempotent_or():
    domain = dom("min-cost")
    tree = tree_of("a")
    assert oracle_strategy_min(tree, domain, valued(tree, domain, {(P, "a"): 7.0})) == 7.0
    tree2 = tree_of("or_p(a, a)")
    assert oracle_strategy_min(tree2, domain, valued(tree2, domain, {(P, "a"): 4.0})) == 4.0


def test_oracle_world_examples():
    tree = tree_of("or_p(a, b)")
    valuation = valued(tree, dom("probability-of-success"), {(P, "a"): 0.5, (P, "b"): 0.5})
    assert oracle_world_probability(tree, valuation) == pytest.approx(0.75, abs=1e-12)
    leaf = tree_of("a")
    v2 = valued(leaf, dom("probability-of-success"), {(P, "a"): 0.3})
    assert oracle_world_probability(leaf, v2) == pytest.approx(0.3, abs=1e-12)
    countered = tree_of("c_p(a, d)")
    v3 = valued(countered, dom("probability-of-success"), {(P, "a"): 1.0, (O, "d"): 1.0})
    assert oracle_world_probability(countered, v3) == 0.0


def test_oracle_guards():
    tree = tree_of("or_p(a, a)")
    valuation = init_valuation(tree, dom("probability-of-success"))
    with pytest.raises(SharedLabelError):
        oracle_world_probability(tree, valuation)
    wide = tree_of("or_p(%s)" % ", ".join(f"x{i}" for i in range(25)))
    with pytest.raises(TooLargeError):
        oracle_strategy_min(wide, dom("min-cost"), init_valuation(wide, dom("min-cost")))
    with pytest.raises(ValueError):
        oracle_strategy_min(tree, dom("satisfiability"), valuation)


def test_dependence_warning_only_for_shared_probability():
    shared = tree_of("or_p(a, a)")
    domain = dom("probability-of-success")
    assert evaluate(shared, domain, init_valuation(shared, domain)).dependence_warning
    distinct = tree_of("or_p(a, b)")
    assert not evaluate(distinct, domain, init_valuation(distinct, domain)).dependence_warning
    assert not evaluate(
        shared, dom("min-cost"), init_valuation(shared, dom("min-cost"))
    ).dependence_warning


def test_folded_nodes_evaluate_normally():
    tree = tree_of("and_p(a, b)")
    tree.children[0].folded = True
    domain = dom("min-cost")
    valuation = valued(tree, domain, {(P, "a"): 1.0, (P, "b"): 2.0})
    assert evaluate(tree, domain, valuation).root_value == 3.0


# --- randomized equivalence properties ---------------------------------------

small_trees = adt_trees(max_depth=3, max_children=3, label_source=st.sampled_from(
    ["a", "b", "c", "d", "e", "f"]
), with_fold=False)


@settings(max_examples=120, deadline=None)
@given(st.data(), st.sampled_from(MIN_FAMILY), small_trees)
def test_engine_matches_strategy_oracle(data, domain_id, tree):
    domain = dom(domain_id)
    valuation = fill_valuation(
        lambda: data.draw(domain_values(domain.value_kind.value)), tree, domain
    )
    assert evaluate(tree, domain, valuation).root_value == oracle_strategy_min(
        tree, domain, valuation
    )


@settings(max_examples=120, deadline=None)
@given(st.data(), small_trees)
def test_engine_matches_world_oracle_on_distinct_labels(data, tree):
    tree = make_basic_labels_distinct(tree)
    assume(len(basic_actions(tree)) <= 14)  # 2^n worlds
    domain = dom("probability-of-success")
    valuation = fill_valuation(lambda: data.draw(domain_values("unit-interval")), tree, domain)
    engine = evaluate(tree, domain, valuation).root_value
    assert engine == pytest.approx(oracle_world_probability(tree, valuation), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.data(), st.sampled_from(MIN_FAMILY + ("satisfiability", "probability-of-success",
                                                "max-power-consumption")), small_trees)
def test_engine_matches_term_interpreter(data, domain_id, tree):
    domain = dom(domain_id)
    valuation = fill_valuation(
        lambda: data.draw(domain_values(domain.value_kind.value)), tree, domain
    )
    engine = evaluate(tree, domain, valuation).root_value
    reference = interpret_term(tree_to_term(tree), domain, valuation)
    assert engine == reference


@settings(max_examples=100, deadline=None)
@given(st.data(), small_trees)
def test_decreasing_a_cost_never_raises_the_root(data, tree):
    domain = dom("min-cost")
    valuation = fill_valuation(
        lambda: data.draw(domain_values(domain.value_kind.value)), tree, domain
    )
    before = evaluate(tree, domain, valuation).root_value
    proponent_keys = [k for k in valuation.entries if k[0] is P]
    key = proponent_keys[data.draw(st.integers(0, len(proponent_keys) - 1))]
    current = valuation.entries[key]
    lower = 0.0 if current == INF else current / 2
    lowered = set_value(valuation, domain, key[0], key[1], lower)
    after = evaluate(tree, domain, lowered).root_value
    assert after <= before


@settings(max_examples=100, deadline=None)
@given(st.data(), small_trees)
def test_enabling_an_opponent_action_never_helps_the_proponent(data, tree):
    domain = dom("satisfiability")
    valuation = fill_valuation(lambda: data.draw(st.booleans()), tree, domain)
    opponent_keys = [k for k in valuation.entries if k[0] is O]
    if not opponent_keys:
        return
    key = opponent_keys[data.draw(st.integers(0, len(opponent_keys) - 1))]
    forced = set_value(valuation, domain, key[0], key[1], True)
    before = evaluate(tree, domain, valuation).root_value
    after = evaluate(tree, domain, forced).root_value
    assert not (before is False and after is True)


@settings(max_examples=80, deadline=None)
@given(st.data(), small_trees)
def test_shared_label_coherence(data, tree):
    domain = dom("min-cost")
    valuation = fill_valuation(
        lambda: data.draw(domain_values(domain.value_kind.value)), tree, domain
    )
    result = evaluate(tree, domain, valuation)
    by_key = {}
    for node in iter_nodes(tree):
        if node.is_basic:  # countered basics included: the counter acts upward
            by_key.setdefault((node.player, node.label), set()).add(result.per_node[node.id])
    assert all(len(values) == 1 for values in by_key.values())
