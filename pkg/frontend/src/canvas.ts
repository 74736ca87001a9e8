// Interactive tree view: SVG rendering of the service layout, right-click
// context menu (with matching keyboard shortcuts) for structural edits,
// wheel zoom and drag pan. Proponent nodes are ellipses, opponent nodes
// rectangles; counter edges render dashed. When a domain instance is
// selected, each node carries its evaluated value as a badge and the root
// shows the overall result.

import { formatValue, type TreeNode } from "./model.js";
import type { DocumentSession } from "./session.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 120;
const NODE_H = 40;

interface MenuEntry {
  action: string;
  title: string;
  shortcut?: string;
}

const MENU: MenuEntry[] = [
  { action: "refine-or", title: "Refine (OR child)", shortcut: "o" },
  { action: "refine-and", title: "Refine (AND child)", shortcut: "a" },
  { action: "add-counter", title: "Add countermeasure", shortcut: "c" },
  { action: "relabel", title: "Relabel", shortcut: "r" },
  { action: "set-or", title: "Switch to OR" },
  { action: "set-and", title: "Switch to AND" },
  { action: "toggle-fold", title: "Fold / expand", shortcut: "f" },
  { action: "delete", title: "Delete subtree", shortcut: "Delete" },
];

export class TreeCanvas {
  readonly svg: SVGSVGElement;
  readonly viewport: SVGGElement;
  readonly menu: HTMLDivElement;
  readonly dialog: HTMLDivElement;
  readonly status: HTMLDivElement;

  selectedId: string | null = null;
  scale = 1;
  panX = 40;
  panY = 40;

  private menuTargetId: string | null = null;
  private dialogResolve: ((value: string | null) => void) | null = null;
  private dragging = false;
  private dragStart: [number, number] = [0, 0];

  constructor(private container: HTMLElement, private session: DocumentSession) {
    this.svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.svg.setAttribute("class", "tree-canvas");
    this.svg.setAttribute("width", "100%");
    this.svg.setAttribute("height", "100%");
    this.svg.setAttribute("tabindex", "0");
    this.viewport = document.createElementNS(SVG_NS, "g") as SVGGElement;
    this.viewport.setAttribute("class", "viewport");
    this.svg.appendChild(this.viewport);

    this.menu = document.createElement("div");
    this.menu.className = "context-menu hidden";
    for (const entry of MENU) {
      const button = document.createElement("button");
      button.dataset.action = entry.action;
      button.textContent = entry.shortcut ? `${entry.title} (${entry.shortcut})` : entry.title;
      button.addEventListener("click", () => this.runMenuAction(entry.action));
      this.menu.appendChild(button);
    }

    this.dialog = document.createElement("div");
    this.dialog.className = "label-dialog hidden";
    const input = document.createElement("input");
    input.className = "label-input";
    const ok = document.createElement("button");
    ok.className = "label-ok";
    ok.textContent = "OK";
    const cancel = document.createElement("button");
    cancel.className = "label-cancel";
    cancel.textContent = "Cancel";
    ok.addEventListener("click", () => this.closeDialog(input.value));
    cancel.addEventListener("click", () => this.closeDialog(null));
    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") this.closeDialog(input.value);
      if (event.key === "Escape") this.closeDialog(null);
    });
    this.dialog.append(input, ok, cancel);

    this.status = document.createElement("div");
    this.status.className = "canvas-status";

    container.append(this.svg, this.menu, this.dialog, this.status);

    this.svg.addEventListener("click", () => this.hideMenu());
    this.svg.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = (event as WheelEvent).deltaY < 0 ? 1.15 : 1 / 1.15;
      this.scale = Math.min(4, Math.max(0.1, this.scale * factor));
      this.applyTransform();
    });
    this.svg.addEventListener("mousedown", (event) => {
      this.dragging = true;
      this.dragStart = [(event as MouseEvent).clientX - this.panX, (event as MouseEvent).clientY - this.panY];
    });
    this.svg.addEventListener("mousemove", (event) => {
      if (!this.dragging) return;
      this.panX = (event as MouseEvent).clientX - this.dragStart[0];
      this.panY = (event as MouseEvent).clientY - this.dragStart[1];
      this.applyTransform();
    });
    this.svg.addEventListener("mouseup", () => (this.dragging = false));
    this.svg.addEventListener("keydown", (event) => this.onKey(event as KeyboardEvent));

    session.onChange(() => this.render());
    this.render();
  }

  applyTransform(): void {
    this.viewport.setAttribute(
      "transform",
      `translate(${this.panX},${this.panY}) scale(${this.scale})`,
    );
  }

  private onKey(event: KeyboardEvent): void {
    if (!this.selectedId) return;
    const byKey: Record<string, string> = {
      o: "refine-or",
      a: "refine-and",
      c: "add-counter",
      r: "relabel",
      f: "toggle-fold",
      Delete: "delete",
    };
    const action = byKey[event.key];
    if (action) {
      event.preventDefault();
      this.menuTargetId = this.selectedId;
      void this.performAction(action, this.selectedId);
    }
  }

  render(): void {
    while (this.viewport.firstChild) this.viewport.removeChild(this.viewport.firstChild);
    const { tree, layout } = this.session;
    if (!tree || !layout) return;
    const positions = layout.positions;
    const edges = document.createElementNS(SVG_NS, "g");
    const nodes = document.createElementNS(SVG_NS, "g");
    this.viewport.append(edges, nodes);

    const evaluation = this.session.selected?.evaluation;

    const place = (node: TreeNode): void => {
      const pos = positions[node.id];
      if (!pos) return;
      const [x, y] = pos;
      for (const child of node.children) {
        this.edge(edges, node, child, false);
        place(child);
      }
      if (node.counter) {
        this.edge(edges, node, node.counter, true);
        place(node.counter);
      }
      if (node.refinement === "AND" && node.children.length && positions[node.children[0].id]) {
        const arc = document.createElementNS(SVG_NS, "path");
        arc.setAttribute("class", "and-arc");
        const r = NODE_H * 0.9;
        const angle = (child: TreeNode) => {
          const [cx, cy] = positions[child.id];
          return Math.atan2(cy - y, cx - x);
        };
        const visible = node.children.filter((c) => positions[c.id]);
        if (visible.length) {
          const angles = visible.map(angle);
          let lo = Math.min(...angles);
          let hi = Math.max(...angles);
          if (lo === hi) {
            lo -= 0.18;
            hi += 0.18;
          }
          const x1 = x + r * Math.cos(lo);
          const y1 = y + r * Math.sin(lo);
          const x2 = x + r * Math.cos(hi);
          const y2 = y + r * Math.sin(hi);
          arc.setAttribute("d", `M ${x1} ${y1} A ${r} ${r} 0 0 1 ${x2} ${y2}`);
          edges.appendChild(arc);
        }
      }

      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("class", `node player-${node.player}`);
      group.setAttribute("data-node-id", node.id);
      if (node.id === this.selectedId) group.classList.add("selected");
      let shape: SVGElement;
      if (node.player === "p") {
        shape = document.createElementNS(SVG_NS, "ellipse");
        shape.setAttribute("cx", String(x));
        shape.setAttribute("cy", String(y));
        shape.setAttribute("rx", String(NODE_W / 2));
        shape.setAttribute("ry", String(NODE_H / 2));
      } else {
        shape = document.createElementNS(SVG_NS, "rect");
        shape.setAttribute("x", String(x - NODE_W / 2));
        shape.setAttribute("y", String(y - NODE_H / 2));
        shape.setAttribute("width", String(NODE_W));
        shape.setAttribute("height", String(NODE_H));
      }
      group.appendChild(shape);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(x));
      label.setAttribute("y", String(y));
      label.setAttribute("text-anchor", "middle");
      label.setAttribute("class", "node-label");
      label.textContent = node.label + (node.folded ? " [+]" : "");
      group.appendChild(label);

      if (evaluation) {
        const badge = document.createElementNS(SVG_NS, "text");
        badge.setAttribute("x", String(x));
        badge.setAttribute("y", String(y + 14));
        badge.setAttribute("text-anchor", "middle");
        badge.setAttribute("class", "node-value");
        badge.setAttribute("data-value-for", node.id);
        badge.textContent = formatValue(evaluation.perNode[node.id]);
        group.appendChild(badge);
      }

      group.addEventListener("click", (event) => {
        event.stopPropagation();
        this.select(node.id);
      });
      group.addEventListener("contextmenu", (event) => {
        event.preventDefault();
        event.stopPropagation();
        this.select(node.id);
        this.showMenu(node.id, (event as MouseEvent).clientX, (event as MouseEvent).clientY);
      });
      nodes.appendChild(group);
    };

    place(tree.root);
    this.applyTransform();
    this.renderStatus(evaluation);
  }

  private renderStatus(evaluation: { rootValue: unknown; rootDisplay: unknown } | undefined): void {
    this.status.innerHTML = "";
    if (evaluation) {
      let text = `root = ${formatValue(evaluation.rootValue)}`;
      if (evaluation.rootDisplay !== evaluation.rootValue) {
        text += ` (${formatValue(evaluation.rootDisplay)})`;
      }
      const root = document.createElement("span");
      root.className = "root-value";
      root.textContent = text;
      this.status.appendChild(root);
    }
    const version = document.createElement("span");
    version.className = "version-tag";
    version.textContent = evaluation
      ? ` · version ${this.session.version}`
      : `version ${this.session.version}`;
    this.status.appendChild(version);
  }

  select(nodeId: string): void {
    this.selectedId = nodeId;
    this.render();
  }

  showMenu(nodeId: string, x: number, y: number): void {
    this.menuTargetId = nodeId;
    this.menu.classList.remove("hidden");
    this.menu.style.left = `${x}px`;
    this.menu.style.top = `${y}px`;
  }

  hideMenu(): void {
    this.menu.classList.add("hidden");
  }

  private runMenuAction(action: string): void {
    const target = this.menuTargetId;
    this.hideMenu();
    if (target) void this.performAction(action, target);
  }

  /** Ask for a label via the inline dialog; resolves null on cancel. */
  askLabel(initial = ""): Promise<string | null> {
    const input = this.dialog.querySelector("input") as HTMLInputElement;
    input.value = initial;
    this.dialog.classList.remove("hidden");
    return new Promise((resolve) => {
      this.dialogResolve = resolve;
    });
  }

  private closeDialog(value: string | null): void {
    this.dialog.classList.add("hidden");
    const resolve = this.dialogResolve;
    this.dialogResolve = null;
    if (resolve) resolve(value);
  }

  async performAction(action: string, nodeId: string): Promise<void> {
    const node = this.session.tree.byId.get(nodeId);
    if (!node) return;
    try {
      switch (action) {
        case "refine-or":
        case "refine-and": {
          const label = await this.askLabel("");
          if (label === null || !label.trim()) return;
          await this.session.edit("refine", {
            nodeId,
            refinement: action === "refine-or" ? "OR" : "AND",
            label,
          });
          break;
        }
        case "add-counter": {
          const label = await this.askLabel("");
          if (label === null || !label.trim()) return;
          await this.session.edit("addCounter", { nodeId, label });
          break;
        }
        case "relabel": {
          const label = await this.askLabel(node.label);
          if (label === null || !label.trim()) return;
          await this.session.edit("relabel", { nodeId, label });
          break;
        }
        case "set-or":
        case "set-and":
          await this.session.edit("setRefinement", {
            nodeId,
            refinement: action === "set-or" ? "OR" : "AND",
          });
          break;
        case "toggle-fold":
          await this.session.edit("toggleFold", { nodeId });
          break;
        case "delete":
          await this.session.edit("delete", { nodeId });
          if (this.selectedId === nodeId) this.selectedId = null;
          break;
      }
    } catch (error) {
      this.status.textContent = `edit failed: ${(error as Error).message}`;
    }
  }

  private edge(parent: SVGElement, from: TreeNode, to: TreeNode, isCounter: boolean): void {
    const positions = this.session.layout.positions;
    const a = positions[from.id];
    const b = positions[to.id];
    if (!a || !b) return;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a[0]));
    line.setAttribute("y1", String(a[1]));
    line.setAttribute("x2", String(b[0]));
    line.setAttribute("y2", String(b[1]));
    line.setAttribute("class", isCounter ? "edge counter-edge" : "edge refinement-edge");
    if (isCounter) line.setAttribute("stroke-dasharray", "6,4");
    parent.appendChild(line);
  }
}
