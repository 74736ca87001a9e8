// Attribute instances and the overview table: pick a domain, attach it,
// edit per-action values in a table (every node with that label follows),
// and watch the recomputed values immediately. Out-of-range input is
// rejected inline with the service's message; nothing is applied.

import { ApiError } from "./api.js";
import { basicActionKeys, formatValue } from "./model.js";
import type { DocumentSession } from "./session.js";

export class AttributePanel {
  readonly domainSelect: HTMLSelectElement;
  readonly paramInput: HTMLInputElement;
  readonly attachButton: HTMLButtonElement;
  readonly instanceSelect: HTMLSelectElement;
  readonly table: HTMLTableElement;
  readonly rootBox: HTMLDivElement;
  readonly warningBox: HTMLDivElement;
  readonly errorBox: HTMLDivElement;

  constructor(container: HTMLElement, private session: DocumentSession) {
    this.domainSelect = document.createElement("select");
    this.domainSelect.className = "domain-select";
    this.paramInput = document.createElement("input");
    this.paramInput.className = "domain-params hidden";
    this.paramInput.placeholder = "k";
    this.attachButton = document.createElement("button");
    this.attachButton.className = "domain-attach";
    this.attachButton.textContent = "Attach";
    this.instanceSelect = document.createElement("select");
    this.instanceSelect.className = "instance-select";
    this.table = document.createElement("table");
    this.table.className = "overview-table";
    this.rootBox = document.createElement("div");
    this.rootBox.className = "root-result";
    this.warningBox = document.createElement("div");
    this.warningBox.className = "dependence-warning hidden";
    this.errorBox = document.createElement("div");
    this.errorBox.className = "valuation-error hidden";

    const attachRow = document.createElement("div");
    attachRow.className = "attach-row";
    attachRow.append(this.domainSelect, this.paramInput, this.attachButton);
    container.append(attachRow, this.instanceSelect, this.rootBox, this.warningBox,
                     this.errorBox, this.table);

    this.domainSelect.addEventListener("change", () => this.syncParamVisibility());
    this.attachButton.addEventListener("click", () => void this.attach());
    this.instanceSelect.addEventListener("change", () => {
      this.session.selectInstance(this.instanceSelect.value || null);
    });

    session.onChange(() => this.render());
    this.render();
  }

  private syncParamVisibility(): void {
    const domain = this.session.domains.find((d) => d.id === this.domainSelect.value);
    const hasParams = !!domain && Object.keys(domain.params).length > 0;
    this.paramInput.classList.toggle("hidden", !hasParams);
  }

  private async attach(): Promise<void> {
    const domainId = this.domainSelect.value;
    if (!domainId) return;
    const params: Record<string, unknown> = {};
    const domain = this.session.domains.find((d) => d.id === domainId);
    if (domain && Object.keys(domain.params).length && this.paramInput.value.trim()) {
      const name = Object.keys(domain.params)[0];
      params[name] = Number(this.paramInput.value);
    }
    this.errorBox.classList.add("hidden");
    try {
      await this.session.attachDomain(domainId, params);
    } catch (error) {
      this.showError(error);
    }
  }

  private showError(error: unknown): void {
    if (error instanceof ApiError) {
      this.errorBox.textContent = error.body.message ?? `rejected (${error.status})`;
      this.errorBox.classList.remove("hidden");
      return;
    }
    throw error;
  }

  render(): void {
    const { domains, instances } = this.session;
    if (this.domainSelect.options.length !== domains.length) {
      this.domainSelect.innerHTML = "";
      for (const domain of domains) {
        const option = document.createElement("option");
        option.value = domain.id;
        option.textContent = domain.displayName;
        this.domainSelect.appendChild(option);
      }
      this.syncParamVisibility();
    }

    this.instanceSelect.innerHTML = "";
    for (const inst of instances) {
      const option = document.createElement("option");
      option.value = inst.instanceId;
      option.textContent = `${inst.instanceId}: ${inst.domainId}`;
      if (inst.instanceId === this.session.selectedInstance) option.selected = true;
      this.instanceSelect.appendChild(option);
    }

    const selected = this.session.selected;
    this.table.innerHTML = "";
    if (!selected) {
      this.rootBox.textContent = "no attribute attached";
      this.warningBox.classList.add("hidden");
      return;
    }

    const evaluation = selected.evaluation;
    let rootText = `root: ${formatValue(evaluation.rootValue)}`;
    if (evaluation.rootDisplay !== evaluation.rootValue) {
      rootText += ` → ${formatValue(evaluation.rootDisplay)}`;
    }
    this.rootBox.textContent = rootText;
    this.warningBox.textContent =
      "shared labels: bottom-up probability assumes independent actions";
    this.warningBox.classList.toggle("hidden", !evaluation.dependenceWarning);

    const head = this.table.createTHead().insertRow();
    for (const title of ["player", "action", "value", "source"]) {
      const cell = document.createElement("th");
      cell.textContent = title;
      head.appendChild(cell);
    }
    const body = this.table.createTBody();
    for (const { player, label } of basicActionKeys(this.session.tree.root)) {
      const key = `${player}:${label}`;
      const row = body.insertRow();
      row.dataset.key = key;
      row.insertCell().textContent = player === "p" ? "proponent" : "opponent";
      row.insertCell().textContent = label;
      const valueCell = row.insertCell();
      const input = document.createElement("input");
      input.className = "value-input";
      input.value = formatValue(evaluation.values[key]);
      input.addEventListener("change", () =>
        void this.commit(selected.instanceId, player, label, input),
      );
      valueCell.appendChild(input);
      row.insertCell().textContent = evaluation.provenance[key] ?? "Default";
    }
  }

  private parseInput(raw: string): unknown {
    const text = raw.trim().toLowerCase();
    if (text === "inf") return "inf";
    if (text === "true") return true;
    if (text === "false") return false;
    const num = Number(text);
    return Number.isNaN(num) ? raw : num;
  }

  private async commit(
    instanceId: string,
    player: string,
    label: string,
    input: HTMLInputElement,
  ): Promise<void> {
    this.errorBox.classList.add("hidden");
    try {
      await this.session.setValue(instanceId, player, label, this.parseInput(input.value));
    } catch (error) {
      input.classList.add("invalid");
      this.showError(error);
    }
  }
}
