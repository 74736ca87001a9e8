// File actions: new/open documents, save the .adt, download SVG or TikZ.
// Saving goes through the export endpoint so what we download is exactly
// what the service would persist.

import type { ApiClient } from "./api.js";
import type { DocumentSession } from "./session.js";

function download(filename: string, text: string, mime: string): void {
  const blob = new Blob([text], { type: mime });
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

export class FileActions {
  readonly newButton: HTMLButtonElement;
  readonly openInput: HTMLInputElement;
  readonly saveButton: HTMLButtonElement;
  readonly svgButton: HTMLButtonElement;
  readonly tikzButton: HTMLButtonElement;

  constructor(
    container: HTMLElement,
    private api: ApiClient,
    private session: () => DocumentSession,
    private replaceSession: (next: DocumentSession) => void,
  ) {
    this.newButton = this.button(container, "file-new", "New");
    this.openInput = document.createElement("input");
    this.openInput.type = "file";
    this.openInput.accept = ".adt,application/json";
    this.openInput.className = "file-open";
    container.appendChild(this.openInput);
    this.saveButton = this.button(container, "file-save", "Save .adt");
    this.svgButton = this.button(container, "file-svg", "SVG");
    this.tikzButton = this.button(container, "file-tikz", "TikZ");

    this.newButton.addEventListener("click", () => void this.createNew());
    this.openInput.addEventListener("change", () => void this.openFile());
    this.saveButton.addEventListener("click", () => void this.export("adt"));
    this.svgButton.addEventListener("click", () => void this.export("svg"));
    this.tikzButton.addEventListener("click", () => void this.export("tikz"));
  }

  private button(container: HTMLElement, className: string, title: string): HTMLButtonElement {
    const element = document.createElement("button");
    element.className = className;
    element.textContent = title;
    container.appendChild(element);
    return element;
  }

  private async createNew(): Promise<void> {
    const { DocumentSession } = await import("./session.js");
    this.replaceSession(await DocumentSession.create(this.api));
  }

  private async openFile(): Promise<void> {
    const file = this.openInput.files?.[0];
    if (!file) return;
    const text = await file.text();
    const { DocumentSession } = await import("./session.js");
    this.replaceSession(await DocumentSession.create(this.api, text));
  }

  private async export(format: "adt" | "svg" | "tikz"): Promise<void> {
    const session = this.session();
    const instance = session.selectedInstance ?? undefined;
    const body = await this.api.exportBytes(
      session.docId,
      format,
      format === "adt" ? undefined : instance,
    );
    const names = { adt: "model.adt", svg: "model.svg", tikz: "model.tex" } as const;
    const mimes = {
      adt: "application/json",
      svg: "image/svg+xml",
      tikz: "application/x-tex",
    } as const;
    download(names[format], body, mimes[format]);
  }
}
