/** Composition root: wires the five panels together and applies live
 * updates from the push channel as whole-tick refreshes.
 */

import { ApiClient } from "./api.js";
import { CheckpointsView } from "./checkpointsView.js";
import { ClassroomView } from "./classroomView.js";
import { InspectorView } from "./inspectorView.js";
import { ProgressView } from "./progressView.js";
import { StatsView } from "./statsView.js";

export interface DashboardPanels {
  progress: HTMLElement;
  classroom: HTMLElement;
  checkpoints: HTMLElement;
  inspector: HTMLElement;
  stats: HTMLElement;
}

export class Dashboard {
  readonly progress: ProgressView;
  readonly classroom: ClassroomView;
  readonly checkpoints: CheckpointsView;
  readonly inspector: InspectorView;
  readonly stats: StatsView;
  private readonly abort = new AbortController();

  constructor(
    private readonly api: ApiClient,
    panels: DashboardPanels,
  ) {
    this.progress = new ProgressView(api, panels.progress);
    this.classroom = new ClassroomView(api, panels.classroom);
    this.checkpoints = new CheckpointsView(api, panels.checkpoints);
    this.inspector = new InspectorView(api, panels.inspector);
    this.stats = new StatsView(api, panels.stats);
    // Brushing, click-locking, and the inspector magnifier all reorder the
    // classroom view through the same selection channel.
    this.progress.onSelection((students) => this.classroom.applySelection(students));
    this.inspector.onSelection((students) => this.classroom.applySelection(students));
  }

  async start(): Promise<void> {
    await this.refreshAll();
    void this.followUpdates();
  }

  stop(): void {
    this.abort.abort();
  }

  private async refreshAll(): Promise<void> {
    const payload = await this.progress.refresh();
    await this.classroom.refresh(payload);
    await this.stats.refresh();
  }

  private async followUpdates(): Promise<void> {
    try {
      for await (const update of this.api.updates(this.abort.signal)) {
        if (update.kind === "TickReady") {
          await this.refreshAll();
        } else if (update.kind === "StatsChanged") {
          await this.stats.refresh();
        }
      }
    } catch {
      // stream closed (shutdown or abort); panels keep their last render
    }
  }
}
