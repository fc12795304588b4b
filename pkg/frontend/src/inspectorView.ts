/** Element inspector: per-task property distributions and structural
 * clusters, with a magnifier that reorders the classroom view so matching
 * students come to the top.
 */

import { ApiClient, InspectPayload } from "./api.js";
import { SelectionListener } from "./progressView.js";

export class InspectorView {
  private payload: InspectPayload | null = null;
  private readonly listeners: SelectionListener[] = [];
  private readonly results: HTMLElement;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {
    this.results = root.ownerDocument.createElement("div");
    this.results.className = "inspector-results";
    root.appendChild(this.results);
  }

  onSelection(listener: SelectionListener): void {
    this.listeners.push(listener);
  }

  async inspect(taskId: string, selector: string, property?: string): Promise<InspectPayload> {
    const payload = await this.api.inspect(taskId, selector, property);
    this.payload = payload;
    this.renderResult(payload);
    return payload;
  }

  /** The magnifier: surface the students behind one bucket or cluster. */
  magnify(key: string): string[] {
    if (this.payload === null) return [];
    const members =
      this.payload.kind === "distribution"
        ? this.payload.buckets[key] ?? []
        : this.payload.clusters.find((c) => c.digest === key)?.members ?? [];
    for (const listener of this.listeners) listener(members);
    return members;
  }

  private renderResult(payload: InspectPayload): void {
    const doc = this.root.ownerDocument;
    this.results.textContent = "";
    if (payload.kind === "distribution") {
      for (const [value, members] of Object.entries(payload.buckets)) {
        const row = doc.createElement("div");
        row.className = "bucket";
        row.dataset.value = value;
        row.textContent = `${value} — ${members.length}`;
        row.addEventListener("click", () => this.magnify(value));
        this.results.appendChild(row);
      }
    } else {
      for (const cluster of payload.clusters) {
        const row = doc.createElement("div");
        row.className = "cluster";
        row.dataset.digest = cluster.digest;
        row.textContent = `${cluster.representative ?? cluster.digest} — ${cluster.members.length}`;
        row.addEventListener("click", () => this.magnify(cluster.digest));
        this.results.appendChild(row);
      }
    }
  }
}
