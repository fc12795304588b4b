/** Line-delimited request/response protocol over standard streams.
 *
 * Handshake: one line announcing capabilities. Then, per request line
 * `{"task": ..., "files": {path: text}}`, exactly one response line that is
 * a TaskOutcome object, in request order.
 */

import { createInterface } from "node:readline";
import { runTask, TaskSpec } from "./evaluate.js";

async function main(): Promise<void> {
  process.stdout.write(JSON.stringify({ capabilities: "interactive" }) + "\n");
  const lines = createInterface({ input: process.stdin, crlfDelay: Infinity });
  for await (const line of lines) {
    const trimmed = line.trim();
    if (trimmed.length === 0) continue;
    let outcome;
    try {
      const request = JSON.parse(trimmed) as { task: TaskSpec; files: Record<string, string> };
      outcome = await runTask(request.task, request.files);
    } catch (err) {
      outcome = {
        task_id: "",
        status: "error",
        detail: `bad request: ${String(err)}`,
        evaluated_at: Date.now(),
        snapshot_hash: "",
      };
    }
    process.stdout.write(JSON.stringify(outcome) + "\n");
  }
}

void main();
