/** Checkpoints panel: edit the config text, request assertion suggestions,
 * and verify checkpoints against the reference workspace.
 */

import { ApiClient } from "./api.js";

export class CheckpointsView {
  readonly configInput: HTMLTextAreaElement;
  readonly descriptionInput: HTMLInputElement;
  readonly suggestion: HTMLElement;
  readonly report: HTMLElement;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {
    const doc = root.ownerDocument;
    this.configInput = doc.createElement("textarea");
    this.configInput.className = "checkpoint-config";
    this.descriptionInput = doc.createElement("input");
    this.descriptionInput.className = "task-description";
    this.suggestion = doc.createElement("pre");
    this.suggestion.className = "suggestion";
    this.report = doc.createElement("div");
    this.report.className = "verification-report";
    for (const el of [this.configInput, this.descriptionInput, this.suggestion, this.report]) {
      root.appendChild(el);
    }
  }

  /** Show an editable suggestion for the typed task description. */
  async suggest(): Promise<void> {
    const payload = await this.api.suggest(this.descriptionInput.value);
    this.suggestion.textContent = JSON.stringify(payload, null, 2);
    this.suggestion.classList.toggle("low-confidence", payload.low_confidence);
  }

  /** Verify one checkpoint and render pass or per-task failure detail. */
  async verify(checkpointId: string): Promise<void> {
    const doc = this.root.ownerDocument;
    const report = await this.api.verify(checkpointId);
    this.report.textContent = "";
    this.report.dataset.passed = String(report.passed);
    for (const task of report.tasks) {
      const row = doc.createElement("div");
      row.className = `verify-row verify-${task.outcome}`;
      row.dataset.task = task.task_id;
      row.textContent = task.detail
        ? `${task.task_id}: ${task.outcome} — ${task.detail}`
        : `${task.task_id}: ${task.outcome}`;
      this.report.appendChild(row);
    }
  }
}
