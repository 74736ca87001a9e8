"""Tidy tree positioning.

Walker's algorithm with the linear-time improvements of Buchheim, Juenger
and Leipert: one bottom-up walk computes preliminary x coordinates with
subtree contours threaded together and conflict shifts spread evenly
between sibling subtrees; a top-down walk accumulates the modifiers. Both
walks are iterative, so depth is bounded by memory and not the interpreter
stack.

Counter subtrees are positioned as an ordinary last child; the dashed-edge
styling is the exporters' concern. Folded subtrees are skipped entirely
when ``respect_fold`` is set (the folded node itself stays visible). All
coordinates are node centers in abstract units, root at x = 0, depth on y.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import AdtNode


@dataclass(frozen=True)
class LayoutConfig:
    node_width: float = 120.0
    node_height: float = 40.0
    sibling_gap: float = 20.0
    subtree_gap: float = 40.0
    level_gap: float = 60.0

    def __post_init__(self):
        for name in ("node_width", "node_height", "sibling_gap", "subtree_gap", "level_gap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    bounds: tuple[float, float, float, float]  # min_x, min_y, max_x, max_y


def layout(
    tree: AdtNode, config: LayoutConfig | None = None, respect_fold: bool = False
) -> LayoutResult:
    config = config or LayoutConfig()
    sibling_sep = config.node_width + config.sibling_gap
    subtree_sep = config.node_width + config.subtree_gap

    def visible_children(node: AdtNode) -> list[AdtNode]:
        if respect_fold and node.folded:
            return []
        kids = list(node.children)
        if node.counter is not None:
            kids.append(node.counter)
        return kids

    # Flatten the visible tree once; all per-node state lives in these maps.
    children: dict[str, list[str]] = {}
    node_of: dict[str, AdtNode] = {}
    parent: dict[str, str | None] = {tree.id: None}
    idx: dict[str, int] = {tree.id: 0}
    depth: dict[str, int] = {tree.id: 0}
    order: list[str] = []
    stack = [tree]
    while stack:
        node = stack.pop()
        order.append(node.id)
        node_of[node.id] = node
        kids = visible_children(node)
        children[node.id] = [k.id for k in kids]
        for i, kid in enumerate(kids):
            parent[kid.id] = node.id
            idx[kid.id] = i
            depth[kid.id] = depth[node.id] + 1
        stack.extend(reversed(kids))

    prelim = dict.fromkeys(order, 0.0)
    mod = dict.fromkeys(order, 0.0)
    shift = dict.fromkeys(order, 0.0)
    change = dict.fromkeys(order, 0.0)
    thread: dict[str, str | None] = dict.fromkeys(order, None)
    ancestor: dict[str, str] = {v: v for v in order}

    def left_sibling(v: str) -> str | None:
        p = parent[v]
        if p is None or idx[v] == 0:
            return None
        return children[p][idx[v] - 1]

    def next_left(v: str) -> str | None:
        kids = children[v]
        return kids[0] if kids else thread[v]

    def next_right(v: str) -> str | None:
        kids = children[v]
        return kids[-1] if kids else thread[v]

    def move_subtree(wm: str, wp: str, amount: float) -> None:
        subtrees = idx[wp] - idx[wm]
        change[wp] -= amount / subtrees
        shift[wp] += amount
        change[wm] += amount / subtrees
        prelim[wp] += amount
        mod[wp] += amount

    def execute_shifts(v: str) -> None:
        pending = 0.0
        accumulated = 0.0
        for w in reversed(children[v]):
            prelim[w] += pending
            mod[w] += pending
            accumulated += change[w]
            pending += shift[w] + accumulated

    def apportion(v: str, default_ancestor: str) -> str:
        w = left_sibling(v)
        if w is None:
            return default_ancestor
        vip = vop = v
        vim = w
        vom = children[parent[v]][0]
        sip = mod[vip]
        sop = mod[vop]
        sim = mod[vim]
        som = mod[vom]
        while next_right(vim) is not None and next_left(vip) is not None:
            vim = next_right(vim)
            vip = next_left(vip)
            vom = next_left(vom)
            vop = next_right(vop)
            ancestor[vop] = v
            gap = (prelim[vim] + sim) - (prelim[vip] + sip) + subtree_sep
            if gap > 0:
                anc = ancestor[vim] if parent[ancestor[vim]] == parent[v] else default_ancestor
                move_subtree(anc, v, gap)
                sip += gap
                sop += gap
            sim += mod[vim]
            sip += mod[vip]
            som += mod[vom]
            sop += mod[vop]
        if next_right(vim) is not None and next_right(vop) is None:
            thread[vop] = next_right(vim)
            mod[vop] += sim - sop
        if next_left(vip) is not None and next_left(vom) is None:
            thread[vom] = next_left(vip)
            mod[vom] += sip - som
            default_ancestor = v
        return default_ancestor

    # Bottom-up walk, iteratively: finalize a node when its last child pops.
    frames: list[list] = [[tree.id, 0, None]]  # node, next child index, default ancestor
    while frames:
        frame = frames[-1]
        v, i, _ = frame
        kids = children[v]
        if i == 0 and kids:
            frame[2] = kids[0]
        if i < len(kids):
            frame[1] += 1
            frames.append([kids[i], 0, None])
            continue
        frames.pop()
        if kids:
            execute_shifts(v)
            midpoint = (prelim[kids[0]] + prelim[kids[-1]]) / 2
            w = left_sibling(v)
            if w is not None:
                prelim[v] = prelim[w] + sibling_sep
                mod[v] = prelim[v] - midpoint
            else:
                prelim[v] = midpoint
        else:
            w = left_sibling(v)
            prelim[v] = 0.0 if w is None else prelim[w] + sibling_sep
        if frames:
            parent_frame = frames[-1]
            parent_frame[2] = apportion(v, parent_frame[2])

    # Top-down walk accumulating modifiers; the root lands on x = 0.
    level_height = config.node_height + config.level_gap
    positions: dict[str, tuple[float, float]] = {}
    walk: list[tuple[str, float]] = [(tree.id, -prelim[tree.id])]
    while walk:
        v, offset = walk.pop()
        positions[v] = (prelim[v] + offset, depth[v] * level_height)
        for w in children[v]:
            walk.append((w, offset + mod[v]))

    half_w = config.node_width / 2
    half_h = config.node_height / 2
    xs = [p[0] for p in positions.values()]
    ys = [p[1] for p in positions.values()]
    bounds = (min(xs) - half_w, min(ys) - half_h, max(xs) + half_w, max(ys) + half_h)
    return LayoutResult(positions=positions, bounds=bounds)
