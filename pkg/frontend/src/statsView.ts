/** Classroom statistics board: per-task passing counts, refreshed on every
 * completed tick.
 */

import { ApiClient } from "./api.js";

export class StatsView {
  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  async refresh(): Promise<void> {
    const doc = this.root.ownerDocument;
    const stats = await this.api.stats();
    this.root.textContent = "";
    this.root.dataset.classSize = String(stats.class_size);
    for (const [taskId, passing] of Object.entries(stats.task_pass_counts).sort()) {
      const row = doc.createElement("div");
      row.className = "stat-row";
      row.dataset.task = taskId;
      row.dataset.passing = String(passing);
      row.textContent = `${taskId}: ${passing}/${stats.class_size}`;
      this.root.appendChild(row);
    }
  }
}
