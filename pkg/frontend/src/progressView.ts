/** Progress visualization: one horizontal band per checkpoint, a dot per
 * student positioned by completion, a timestamp slider, hover/click
 * highlighting, and a brush that selects a student set.
 */

import { ApiClient, ProgressPayload } from "./api.js";

export type SelectionListener = (students: string[]) => void;

const DOT_AREA_OPACITY = 0.12;

export class ProgressView {
  private payload: ProgressPayload | null = null;
  private ticks: number[] = [];
  private lockedStudent: string | null = null;
  private readonly listeners: SelectionListener[] = [];
  private readonly bandsHost: HTMLElement;
  private readonly slider: HTMLInputElement;
  private readonly sliderLabel: HTMLElement;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {
    const doc = root.ownerDocument;
    this.bandsHost = doc.createElement("div");
    this.bandsHost.className = "progress-bands";
    this.slider = doc.createElement("input");
    this.slider.type = "range";
    this.slider.className = "progress-slider";
    this.sliderLabel = doc.createElement("span");
    this.sliderLabel.className = "progress-slider-label";
    this.slider.addEventListener("change", () => {
      void this.showAt(Number(this.slider.value));
    });
    root.appendChild(this.bandsHost);
    root.appendChild(this.slider);
    root.appendChild(this.sliderLabel);
  }

  onSelection(listener: SelectionListener): void {
    this.listeners.push(listener);
  }

  /** Known tick timestamps, used only to give the slider discrete stops. */
  setTicks(ticks: number[]): void {
    this.ticks = [...ticks].sort((a, b) => a - b);
    if (this.ticks.length > 0) {
      this.slider.min = String(this.ticks[0]);
      this.slider.max = String(this.ticks[this.ticks.length - 1]);
      this.slider.step = "any";
    }
  }

  /** Fetch the latest tick and render it. */
  async refresh(): Promise<ProgressPayload> {
    return this.render(await this.api.progress());
  }

  /** Fetch a specific timestamp and render it (slider contract). */
  async showAt(t: number): Promise<ProgressPayload> {
    return this.render(await this.api.progress(t));
  }

  /** Render a payload verbatim; every dot position comes from the payload. */
  render(payload: ProgressPayload): ProgressPayload {
    this.payload = payload;
    const doc = this.root.ownerDocument;
    this.bandsHost.textContent = "";
    const students = Object.keys(payload.students).sort();
    for (const checkpointId of payload.checkpoints) {
      const band = doc.createElement("div");
      band.className = "band";
      band.dataset.checkpoint = checkpointId;
      const label = doc.createElement("span");
      label.className = "band-label";
      label.textContent = checkpointId;
      band.appendChild(label);
      for (const studentId of students) {
        const cell = payload.students[studentId][checkpointId];
        const dot = doc.createElement("span");
        dot.className = "dot";
        dot.dataset.student = studentId;
        dot.dataset.completion = String(cell.completion);
        dot.style.left = `${cell.completion * 100}%`;
        dot.style.opacity = String(DOT_AREA_OPACITY * 4);
        dot.addEventListener("mouseenter", () => this.highlight(studentId));
        dot.addEventListener("mouseleave", () => {
          if (this.lockedStudent === null) this.highlight(null);
        });
        dot.addEventListener("click", () => {
          this.lockedStudent = this.lockedStudent === studentId ? null : studentId;
          this.highlight(this.lockedStudent);
          this.emit(this.lockedStudent === null ? [] : [this.lockedStudent]);
        });
        band.appendChild(dot);
      }
      this.bandsHost.appendChild(band);
    }
    if (payload.t_ms !== null) {
      this.slider.value = String(payload.t_ms);
      this.sliderLabel.textContent = new Date(payload.t_ms).toISOString();
    }
    return payload;
  }

  /** Select every student whose completion in the band lies in [lo, hi]. */
  brush(checkpointId: string, lo: number, hi: number): string[] {
    if (this.payload === null) return [];
    const selected = Object.entries(this.payload.students)
      .filter(([, cells]) => {
        const cell = cells[checkpointId];
        return cell !== undefined && cell.completion >= lo && cell.completion <= hi;
      })
      .map(([studentId]) => studentId)
      .sort();
    for (const dot of Array.from(this.bandsHost.querySelectorAll(".dot"))) {
      const el = dot as HTMLElement;
      el.classList.toggle("brushed", selected.includes(el.dataset.student ?? ""));
    }
    this.emit(selected);
    return selected;
  }

  private highlight(studentId: string | null): void {
    for (const dot of Array.from(this.bandsHost.querySelectorAll(".dot"))) {
      const el = dot as HTMLElement;
      el.classList.toggle("highlight", studentId !== null && el.dataset.student === studentId);
    }
  }

  private emit(students: string[]): void {
    for (const listener of this.listeners) listener(students);
  }
}
