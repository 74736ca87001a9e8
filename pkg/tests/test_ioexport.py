"""Persistence round-trips and structural checks on the rendered output."""

from __future__ import annotations

import json
from xml.etree import ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from adtrees.document import attach_domain, new_document, set_valuation_value
from adtrees.domains import DEFAULT_REGISTRY, INF
from adtrees.errors import FormatError, IntegrityError
from adtrees.evaluation import Provenance, evaluate, init_valuation
from adtrees.ioexport import export_svg, export_tikz, load, save, tex_escape
from adtrees.layout import LayoutConfig, layout
from adtrees.model import AdtNode, Player, iter_nodes
from adtrees.terms import term_to_tree
from adtrees.termtext import parse_term

from strategies import adt_trees, domain_values

P = Player.PROPONENT
O = Player.OPPONENT


def sample_document():
    doc = new_document()
    doc.root = term_to_tree(parse_term('c_p(and_p("break in", alarm), or_o(guard, lock))'))
    doc, i1 = attach_domain(doc, DEFAULT_REGISTRY, "min-cost")
    doc, i2 = attach_domain(doc, DEFAULT_REGISTRY, "reachability-within-k", {"k": 30})
    doc = set_valuation_value(doc, DEFAULT_REGISTRY, i1, P, "break in", 100.0)
    doc = set_valuation_value(doc, DEFAULT_REGISTRY, i1, O, "guard", INF)
    doc = set_valuation_value(doc, DEFAULT_REGISTRY, i2, P, "alarm", 12)
    return doc


def test_save_load_round_trip_rich_document():
    doc = sample_document()
    doc.root.children[0].folded = True
    assert load(save(doc)) == doc


def test_save_is_deterministic():
    doc = sample_document()
    assert save(doc) == save(doc)


def test_unknown_fields_survive_round_trip():
    doc = sample_document()
    raw = json.loads(save(doc).decode())
    raw["x-author"] = "alice"
    raw["root"]["x-note"] = {"color": "blue"}
    raw["domains"][0]["x-hidden"] = True
    data = json.dumps(raw).encode()
    reloaded = load(data)
    assert reloaded.extra == {"x-author": "alice"}
    assert reloaded.root.extra == {"x-note": {"color": "blue"}}
    assert reloaded.instances[0].extra == {"x-hidden": True}
    again = json.loads(save(reloaded).decode())
    assert again["x-author"] == "alice"
    assert again["root"]["x-note"] == {"color": "blue"}
    assert again["domains"][0]["x-hidden"] is True


def test_version_two_rejected():
    raw = json.loads(save(new_document()).decode())
    raw["version"] = 2
    with pytest.raises(FormatError) as err:
        load(json.dumps(raw).encode())
    assert "version" in str(err.value)


def test_wrong_tag_and_bad_json_rejected():
    with pytest.raises(FormatError):
        load(b"{not json")
    raw = json.loads(save(new_document()).decode())
    raw["format"] = "something-else"
    with pytest.raises(FormatError):
        load(json.dumps(raw).encode())


def test_valuation_for_absent_label_rejected_whole():
    raw = json.loads(save(sample_document()).decode())
    raw["domains"][0]["valuations"]["p:no such action"] = 5
    with pytest.raises(IntegrityError):
        load(json.dumps(raw).encode())


def test_out_of_kind_value_rejected():
    doc = new_document()
    doc, _ = attach_domain(doc, DEFAULT_REGISTRY, "probability-of-success")
    raw = json.loads(save(doc).decode())
    raw["domains"][0]["valuations"]["p:Root"] = 1.5
    with pytest.raises(IntegrityError):
        load(json.dumps(raw).encode())


def test_invalid_tree_rejected_as_integrity_error():
    raw = json.loads(save(new_document()).decode())
    raw["root"]["children"] = [
        {"id": "n1", "label": "dup", "refinement": "OR", "children": [], "counter": None,
         "folded": False}
    ]
    with pytest.raises(IntegrityError):
        load(json.dumps(raw).encode())


def test_defaults_are_not_written_but_user_values_are():
    doc = sample_document()
    raw = json.loads(save(doc).decode())
    valuations = raw["domains"][0]["valuations"]
    assert valuations == {"o:guard": "inf", "p:break in": 100}
    reloaded = load(save(doc))
    inst = reloaded.instances[0]
    assert inst.valuation.provenance[(P, "break in")] is Provenance.USER_SET
    assert inst.valuation.provenance[(P, "alarm")] is Provenance.DEFAULT


@settings(max_examples=80, deadline=None)
@given(adt_trees(max_depth=3), st.data())
def test_round_trip_property(root, data):
    doc = new_document()
    doc.root = root
    doc, inst = attach_domain(doc, DEFAULT_REGISTRY, "min-cost")
    keys = list(doc.instance(inst).valuation.entries)
    for key in keys[: min(3, len(keys))]:
        value = data.draw(domain_values("extended-non-negative-real"))
        doc = set_valuation_value(doc, DEFAULT_REGISTRY, inst, key[0], key[1], value)
    assert load(save(doc)) == doc


# --- SVG ----------------------------------------------------------------------


def svg_of(tree, overlay=None, respect_fold=False):
    result = layout(tree, respect_fold=respect_fold)
    return ET.fromstring(export_svg(tree, result, LayoutConfig(), overlay))


def shapes(svg):
    return [el for el in svg.iter() if "data-node-id" in el.attrib]


def test_single_node_svg():
    svg = svg_of(AdtNode(id="n1", label="only", player=P))
    assert len(shapes(svg)) == 1
    assert not [el for el in svg.iter() if el.tag.endswith("line")]


def test_counter_edge_is_dashed():
    tree = term_to_tree(parse_term("c_p(a, d)"))
    svg = svg_of(tree)
    lines = [el for el in svg.iter() if el.tag.endswith("line")]
    dashed = [el for el in lines if el.get("stroke-dasharray")]
    assert len(lines) == 1 and len(dashed) == 1
    assert dashed[0].get("class") == "counter-edge"


def test_and_node_gets_three_edges_and_one_arc():
    tree = term_to_tree(parse_term("and_p(a, b, c)"))
    svg = svg_of(tree)
    lines = [el for el in svg.iter() if el.tag.endswith("line")]
    arcs = [el for el in svg.iter() if el.get("class") == "and-arc"]
    assert len(lines) == 3
    assert len(arcs) == 1


def test_or_node_has_no_arc():
    tree = term_to_tree(parse_term("or_p(a, b)"))
    svg = svg_of(tree)
    assert not [el for el in svg.iter() if el.get("class") == "and-arc"]


def test_shape_classes_by_player():
    tree = term_to_tree(parse_term("c_p(a, d)"))
    svg = svg_of(tree)
    by_id = {el.get("data-node-id"): el.tag.split("}")[-1] for el in shapes(svg)}
    nodes = {n.id: n for n in iter_nodes(tree)}
    for node_id, tag in by_id.items():
        expected = "ellipse" if nodes[node_id].player is P else "rect"
        assert tag == expected


def test_overlay_adds_value_captions():
    tree = term_to_tree(parse_term("or_p(a, b)"))
    domain = DEFAULT_REGISTRY.get("min-cost")
    valuation = init_valuation(tree, domain)
    overlay = evaluate(tree, domain, valuation)
    svg = svg_of(tree, overlay=overlay)
    texts = [el.text for el in svg.iter() if el.tag.endswith("tspan")]
    assert "inf" in texts


def test_folded_subtrees_not_exported():
    tree = term_to_tree(parse_term("or_p(and_p(a, b), c)"))
    tree.children[0].folded = True
    svg = svg_of(tree, respect_fold=True)
    assert len(shapes(svg)) == 3  # root, folded child, c


@settings(max_examples=50, deadline=None)
@given(adt_trees(max_depth=3))
def test_every_node_is_exactly_one_svg_shape(root):
    svg = svg_of(root)
    ids = [el.get("data-node-id") for el in shapes(svg)]
    assert sorted(ids) == sorted(n.id for n in iter_nodes(root))
    dashed = [el for el in svg.iter() if el.get("class") == "counter-edge"]
    counters = [n for n in iter_nodes(root) if n.counter is not None]
    assert len(dashed) == len(counters)


GOLDEN_SVG = (
    b"<?xml version='1.0' encoding='utf-8'?>\n"
    b'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="152" height="172" '
    b'viewBox="-76 -36 152 172"><g class="edges" stroke="#555555">'
    b'<line x1="0" y1="0" x2="0" y2="100" class="counter-edge" stroke-dasharray="6,4" /></g>'
    b'<g class="and-arcs" stroke="#555555" fill="none" /><g class="nodes">'
    b'<ellipse data-node-id="n1" cx="0" cy="0" rx="60" ry="20" fill="#fdeaea" stroke="#c0392b" />'
    b'<text x="0" y="0" text-anchor="middle" font-size="12" font-family="sans-serif">'
    b'<tspan x="0" dy="0.3em">a</tspan></text>'
    b'<rect data-node-id="n2" x="-60" y="80" width="120" height="40" fill="#e8f6ec" stroke="#1e8449" />'
    b'<text x="0" y="100" text-anchor="middle" font-size="12" font-family="sans-serif">'
    b'<tspan x="0" dy="0.3em">d</tspan></text></g></svg>'
)

GOLDEN_TIKZ = rb"""\documentclass[tikz,border=4pt]{standalone}
\begin{document}
\begin{tikzpicture}[x=1pt,y=-1pt,
  proponent/.style={draw=red!60!black, fill=red!10, ellipse, align=center, minimum width=120pt, minimum height=40pt, inner sep=1pt},
  opponent/.style={draw=green!40!black, fill=green!8, rectangle, align=center, minimum width=120pt, minimum height=40pt, inner sep=1pt},
  refinement/.style={draw=black!60},
  counter/.style={draw=black!60, dashed}]
\node[proponent] (v0) at (0,0) {a};
\node[opponent] (v1) at (0,100) {d};
\draw[counter] (v0) -- (v1);
\end{tikzpicture}
\end{document}
"""


def test_golden_exports_for_countered_leaf():
    tree = term_to_tree(parse_term("c_p(a, d)"))
    result = layout(tree)
    assert export_svg(tree, result, LayoutConfig()) == GOLDEN_SVG
    assert export_tikz(tree, result, LayoutConfig()) == GOLDEN_TIKZ


def test_svg_deterministic_and_well_formed():
    tree = term_to_tree(parse_term('c_p("<&> weird label", d)'))
    result = layout(tree)
    one = export_svg(tree, result)
    two = export_svg(tree, result)
    assert one == two
    ET.fromstring(one)  # parses as XML


# --- TikZ ---------------------------------------------------------------------


def test_tikz_structure_counts():
    tree = term_to_tree(parse_term("c_p(and_p(a, b, c), d)"))
    result = layout(tree)
    tex = export_tikz(tree, result).decode()
    assert tex.count(r"\node[") == 5
    assert tex.count("dashed") == 1  # the counter style definition
    assert tex.count(r"\draw[counter]") == 1
    assert tex.count("arc[") == 1
    assert tex.startswith(r"\documentclass")
    assert tex.rstrip().endswith(r"\end{document}")


def test_tikz_escapes_specials():
    assert tex_escape("a&b_c%d") == r"a\&b\_c\%d"
    tree = AdtNode(id="n1", label="50% #1 { } ~", player=P)
    tex = export_tikz(tree, layout(tree)).decode()
    assert r"\%" in tex and r"\#" in tex and r"\{" in tex and r"\textasciitilde{}" in tex


def test_tikz_single_node():
    tree = AdtNode(id="n1", label="only", player=P)
    tex = export_tikz(tree, layout(tree)).decode()
    assert tex.count(r"\node[") == 1
    assert tex.count(r"\draw") == 0


def test_tikz_deterministic():
    tree = term_to_tree(parse_term("or_p(a, b)"))
    result = layout(tree)
    assert export_tikz(tree, result) == export_tikz(tree, result)
