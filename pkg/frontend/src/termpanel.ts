// Term view: the canonical text refreshes after every change; edits go
// back through PUT, and a rejected term highlights the offending span
// in place without touching the document.

import { ApiError } from "./api.js";
import type { DocumentSession } from "./session.js";

export class TermPanel {
  readonly textarea: HTMLTextAreaElement;
  readonly applyButton: HTMLButtonElement;
  readonly errorBox: HTMLDivElement;
  readonly summaryBox: HTMLDivElement;
  private dirty = false;

  constructor(container: HTMLElement, private session: DocumentSession) {
    this.textarea = document.createElement("textarea");
    this.textarea.className = "term-text";
    this.textarea.rows = 4;
    this.applyButton = document.createElement("button");
    this.applyButton.className = "term-apply";
    this.applyButton.textContent = "Apply term";
    this.errorBox = document.createElement("div");
    this.errorBox.className = "term-error hidden";
    this.summaryBox = document.createElement("div");
    this.summaryBox.className = "term-summary";
    container.append(this.textarea, this.applyButton, this.errorBox, this.summaryBox);

    this.textarea.addEventListener("input", () => {
      this.dirty = true;
    });
    this.applyButton.addEventListener("click", () => void this.apply());
    session.onChange(() => this.renderFromSession());
    this.renderFromSession();
  }

  private renderFromSession(): void {
    if (!this.dirty) {
      this.textarea.value = this.session.termText;
      this.errorBox.classList.add("hidden");
      this.errorBox.textContent = "";
    }
  }

  /** Offset of (1-based) line/col in the textarea's current value. */
  private offsetOf(line: number, col: number): number {
    const lines = this.textarea.value.split("\n");
    let offset = 0;
    for (let i = 0; i < line - 1 && i < lines.length; i++) {
      offset += lines[i].length + 1;
    }
    return offset + col - 1;
  }

  async apply(): Promise<void> {
    this.errorBox.classList.add("hidden");
    this.errorBox.textContent = "";
    try {
      const result = await this.session.applyTerm(this.textarea.value);
      this.dirty = false;
      this.renderFromSession();
      const { matched, inserted, deleted } = result.mapping;
      this.summaryBox.textContent = `applied: ${matched} kept, ${inserted} added, ${deleted} removed`;
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        const span = error.span;
        let message = error.body.message ?? "term rejected";
        if (error.body.expected?.length) {
          message += ` — expected ${error.body.expected.join(" or ")}`;
        }
        this.errorBox.textContent = span
          ? `line ${span.startLine}, col ${span.startCol}: ${message}`
          : message;
        this.errorBox.classList.remove("hidden");
        if (span) {
          const start = this.offsetOf(span.startLine, span.startCol);
          const end = Math.max(start + 1, this.offsetOf(span.endLine, span.endCol) + 1);
          this.textarea.focus();
          this.textarea.setSelectionRange(start, end);
        }
        return;
      }
      throw error;
    }
  }
}
