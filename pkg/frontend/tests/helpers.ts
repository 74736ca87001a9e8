// Shared DOM-driving utilities for the UI tests.

import { ApiClient } from "../src/api.js";
import { AttributePanel } from "../src/attributes.js";
import { TreeCanvas } from "../src/canvas.js";
import { DocumentSession } from "../src/session.js";
import { TermPanel } from "../src/termpanel.js";

export async function until(
  condition: () => boolean,
  what = "condition",
  timeoutMs = 8000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 15));
  }
}

export interface Harness {
  api: ApiClient;
  session: DocumentSession;
  canvas: TreeCanvas;
  term: TermPanel;
  attributes: AttributePanel;
  canvasHost: HTMLElement;
  termHost: HTMLElement;
  attrHost: HTMLElement;
}

export async function mountApp(apiBase: string, adtBody?: string): Promise<Harness> {
  const api = new ApiClient(apiBase);
  const session = await DocumentSession.create(api, adtBody);
  const canvasHost = document.createElement("div");
  const termHost = document.createElement("div");
  const attrHost = document.createElement("div");
  document.body.append(canvasHost, termHost, attrHost);
  return {
    api,
    session,
    canvas: new TreeCanvas(canvasHost, session),
    term: new TermPanel(termHost, session),
    attributes: new AttributePanel(attrHost, session),
    canvasHost,
    termHost,
    attrHost,
  };
}

export function nodeGroup(host: HTMLElement, nodeId: string): Element {
  const group = host.querySelector(`[data-node-id="${nodeId}"]`);
  if (!group) throw new Error(`node ${nodeId} not rendered`);
  return group;
}

export function rightClick(element: Element): void {
  element.dispatchEvent(
    new MouseEvent("contextmenu", { bubbles: true, cancelable: true, clientX: 50, clientY: 60 }),
  );
}

export function clickMenu(harness: Harness, action: string): void {
  const button = harness.canvas.menu.querySelector(
    `button[data-action="${action}"]`,
  ) as HTMLButtonElement | null;
  if (!button) throw new Error(`no menu entry ${action}`);
  button.click();
}

export function fillLabelDialog(harness: Harness, label: string): void {
  const input = harness.canvas.dialog.querySelector("input") as HTMLInputElement;
  input.value = label;
  (harness.canvas.dialog.querySelector(".label-ok") as HTMLButtonElement).click();
}

/** Run one context-menu edit end to end and wait for the refreshed render. */
export async function menuEdit(
  harness: Harness,
  nodeId: string,
  action: string,
  label?: string,
): Promise<void> {
  const version = harness.session.version;
  const refreshes = harness.session.refreshes;
  rightClick(nodeGroup(harness.canvasHost, nodeId));
  clickMenu(harness, action);
  if (label !== undefined) fillLabelDialog(harness, label);
  await until(
    () => harness.session.version > version && harness.session.refreshes > refreshes,
    `${action} on ${nodeId}`,
  );
}

export function tableInput(harness: Harness, key: string): HTMLInputElement {
  const row = harness.attributes.table.querySelector(`tr[data-key="${key}"]`);
  if (!row) throw new Error(`no overview row for ${key}`);
  return row.querySelector("input") as HTMLInputElement;
}

export async function setTableValue(harness: Harness, key: string, value: string): Promise<void> {
  const version = harness.session.version;
  const refreshes = harness.session.refreshes;
  const input = tableInput(harness, key);
  input.value = value;
  input.dispatchEvent(new Event("change", { bubbles: true }));
  await until(
    () => harness.session.version > version && harness.session.refreshes > refreshes,
    `valuation ${key}=${value}`,
  );
}
