// Bootstrap: compose the panels around one DocumentSession. The service
// base defaults to the page origin so `adtrees serve --ui frontend/dist`
// works out of the box; override with ?api=http://host:port.

import { ApiClient } from "./api.js";
import { AttributePanel } from "./attributes.js";
import { TreeCanvas } from "./canvas.js";
import { FileActions } from "./files.js";
import { DocumentSession } from "./session.js";
import { TermPanel } from "./termpanel.js";

export interface App {
  session: DocumentSession;
  canvas: TreeCanvas;
  term: TermPanel;
  attributes: AttributePanel;
  files: FileActions;
}

function installConflictBanner(session: DocumentSession, host: HTMLElement): void {
  session.onConflict = async (currentVersion) => {
    const banner = document.createElement("div");
    banner.className = "conflict-banner";
    banner.textContent =
      `Document changed elsewhere (now at version ${currentVersion}). ` +
      "Reloaded; apply your change again if still wanted.";
    host.appendChild(banner);
    setTimeout(() => banner.remove(), 5000);
    return "giveUp";
  };
}

export async function boot(root: HTMLElement, apiBase?: string): Promise<App> {
  const params = new URLSearchParams(window.location.search);
  const base = apiBase ?? params.get("api") ?? window.location.origin;
  const api = new ApiClient(base);

  root.innerHTML = "";
  const toolbar = document.createElement("div");
  toolbar.className = "toolbar";
  const canvasHost = document.createElement("div");
  canvasHost.className = "canvas-host";
  const side = document.createElement("div");
  side.className = "side-panel";
  const termHost = document.createElement("section");
  termHost.className = "term-panel";
  const termTitle = document.createElement("h3");
  termTitle.textContent = "Term";
  termHost.appendChild(termTitle);
  const attrHost = document.createElement("section");
  attrHost.className = "attribute-panel";
  const attrTitle = document.createElement("h3");
  attrTitle.textContent = "Attributes";
  attrHost.appendChild(attrTitle);
  side.append(termHost, attrHost);
  root.append(toolbar, canvasHost, side);

  const docParam = params.get("doc");
  const session = docParam
    ? await DocumentSession.open(api, docParam)
    : await DocumentSession.create(api);
  installConflictBanner(session, toolbar);

  const app: App = {
    session,
    canvas: new TreeCanvas(canvasHost, session),
    term: new TermPanel(termHost, session),
    attributes: new AttributePanel(attrHost, session),
    files: undefined as unknown as FileActions,
  };

  const mountSession = (next: DocumentSession): void => {
    installConflictBanner(next, toolbar);
    canvasHost.innerHTML = "";
    termHost.innerHTML = "";
    termHost.appendChild(termTitle);
    attrHost.innerHTML = "";
    attrHost.appendChild(attrTitle);
    app.session = next;
    app.canvas = new TreeCanvas(canvasHost, next);
    app.term = new TermPanel(termHost, next);
    app.attributes = new AttributePanel(attrHost, next);
  };

  app.files = new FileActions(toolbar, api, () => app.session, mountSession);
  return app;
}

declare global {
  interface Window {
    adtreesBoot: typeof boot;
  }
}

if (typeof window !== "undefined") {
  window.adtreesBoot = boot;
  const mount = document.getElementById("app");
  if (mount) {
    void boot(mount);
  }
}
