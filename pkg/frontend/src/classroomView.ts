/** Classroom view: one code box per student showing the current file, the
 * active-file highlight, and per-task pass/fail chips. Selections from other
 * panels move the selected students to the front; Reset Order restores
 * student-id order.
 */

import { ApiClient, ProgressPayload } from "./api.js";

export class ClassroomView {
  private order: string[] = [];
  private readonly boxesHost: HTMLElement;
  readonly resetButton: HTMLButtonElement;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {
    const doc = root.ownerDocument;
    this.resetButton = doc.createElement("button");
    this.resetButton.className = "reset-order";
    this.resetButton.textContent = "Reset Order";
    this.resetButton.addEventListener("click", () => this.resetOrder());
    this.boxesHost = doc.createElement("div");
    this.boxesHost.className = "classroom-boxes";
    root.appendChild(this.resetButton);
    root.appendChild(this.boxesHost);
  }

  /** Build one box per student from a progress payload plus snapshots. */
  async refresh(progress: ProgressPayload): Promise<void> {
    const doc = this.root.ownerDocument;
    const students = Object.keys(progress.students).sort();
    this.boxesHost.textContent = "";
    for (const studentId of students) {
      const snapshot = await this.api.snapshot(
        studentId,
        progress.t_ms === null ? undefined : progress.t_ms,
      );
      const box = doc.createElement("div");
      box.className = "student-box";
      box.dataset.student = studentId;

      const header = doc.createElement("div");
      header.className = "student-header";
      header.textContent = studentId;
      box.appendChild(header);

      const activePath = snapshot.active_file?.file_path ?? null;
      for (const [path, text] of Object.entries(snapshot.files).sort()) {
        const file = doc.createElement("pre");
        file.className = "student-file";
        file.dataset.path = path;
        if (path === activePath) file.classList.add("active-file");
        file.textContent = text;
        box.appendChild(file);
      }

      const chips = doc.createElement("div");
      chips.className = "task-chips";
      for (const checkpointId of progress.checkpoints) {
        const cell = progress.students[studentId][checkpointId];
        for (const outcome of cell.outcomes) {
          const chip = doc.createElement("span");
          chip.className = `chip chip-${outcome.status}`;
          chip.dataset.task = outcome.task_id;
          chip.textContent = `${outcome.task_id}: ${outcome.status}`;
          chips.appendChild(chip);
        }
      }
      box.appendChild(chips);
      this.boxesHost.appendChild(box);
    }
    this.order = students;
  }

  /** Current front-to-back order of student boxes. */
  currentOrder(): string[] {
    return Array.from(this.boxesHost.children).map(
      (box) => (box as HTMLElement).dataset.student ?? "",
    );
  }

  /** Bring the selected students to the front, id order within each group. */
  applySelection(selected: string[]): void {
    const chosen = new Set(selected);
    const next = [
      ...this.order.filter((s) => chosen.has(s)),
      ...this.order.filter((s) => !chosen.has(s)),
    ];
    this.reorderBoxes(next);
  }

  resetOrder(): void {
    this.reorderBoxes([...this.order].sort());
  }

  private reorderBoxes(order: string[]): void {
    const byStudent = new Map<string, Element>();
    for (const box of Array.from(this.boxesHost.children)) {
      byStudent.set((box as HTMLElement).dataset.student ?? "", box);
    }
    for (const studentId of order) {
      const box = byStudent.get(studentId);
      if (box !== undefined) this.boxesHost.appendChild(box);
    }
  }
}
