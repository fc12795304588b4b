/** Browser entry point: mounts the dashboard against a service base URL
 * given as ?api=<url> (defaults to the page origin).
 */

import { ApiClient } from "./api.js";
import { Dashboard } from "./dashboard.js";

function panel(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing panel #${id}`);
  return el;
}

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? window.location.origin;
const token = params.get("token") ?? undefined;

const dashboard = new Dashboard(new ApiClient(base, token), {
  progress: panel("progress"),
  classroom: panel("classroom"),
  checkpoints: panel("checkpoints"),
  inspector: panel("inspector"),
  stats: panel("stats"),
});

void dashboard.start();
