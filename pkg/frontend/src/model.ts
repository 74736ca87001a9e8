// Client-side view of the tree. Players are not stored in the wire format;
// they derive from the root (proponent) with counter edges flipping sides.

import type { RawNode } from "./api.js";

export type PlayerSide = "p" | "o";

export interface TreeNode {
  id: string;
  label: string;
  refinement: "AND" | "OR";
  folded: boolean;
  player: PlayerSide;
  children: TreeNode[];
  counter: TreeNode | null;
  parentId: string | null;
}

export interface TreeIndex {
  root: TreeNode;
  byId: Map<string, TreeNode>;
}

export function decodeTree(raw: RawNode): TreeIndex {
  const byId = new Map<string, TreeNode>();

  function walk(rawNode: RawNode, player: PlayerSide, parentId: string | null): TreeNode {
    const node: TreeNode = {
      id: rawNode.id,
      label: rawNode.label,
      refinement: rawNode.refinement ?? "OR",
      folded: rawNode.folded ?? false,
      player,
      children: [],
      counter: null,
      parentId,
    };
    byId.set(node.id, node);
    for (const child of rawNode.children ?? []) {
      node.children.push(walk(child, player, node.id));
    }
    if (rawNode.counter) {
      node.counter = walk(rawNode.counter, player === "p" ? "o" : "p", node.id);
    }
    return node;
  }

  const root = walk(raw, "p", null);
  return { root, byId };
}

/** Basic actions are the non-refined nodes; each (player, label) pair once. */
export function basicActionKeys(root: TreeNode): Array<{ player: PlayerSide; label: string }> {
  const seen = new Set<string>();
  const out: Array<{ player: PlayerSide; label: string }> = [];
  const stack: TreeNode[] = [root];
  while (stack.length) {
    const node = stack.pop()!;
    if (node.children.length === 0) {
      const key = `${node.player}:${node.label}`;
      if (!seen.has(key)) {
        seen.add(key);
        out.push({ player: node.player, label: node.label });
      }
    }
    if (node.counter) stack.push(node.counter);
    for (let i = node.children.length - 1; i >= 0; i--) stack.push(node.children[i]);
  }
  return out;
}

export function formatValue(value: unknown): string {
  if (value === true) return "true";
  if (value === false) return "false";
  if (value === "inf") return "inf";
  if (typeof value === "number") {
    return Number.isInteger(value) ? String(value) : String(value);
  }
  return String(value);
}
