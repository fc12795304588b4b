/** Interactive task evaluation: load a snapshot into jsdom, execute the
 * interaction steps, then evaluate the assertions against the live
 * document. Assertion semantics mirror the static evaluation path, except
 * that computed styles come from the browser environment.
 */

import { createHash } from "node:crypto";
import { JSDOM, VirtualConsole } from "jsdom";

export interface InteractionStep {
  kind: "click" | "type_text" | "hover" | "wait";
  selector?: string;
  text?: string;
  ms?: number;
}

export interface AssertionSpec {
  kind: "exists" | "count" | "attribute" | "text" | "style" | "rule_declared" | "ancestor";
  selector: string;
  min_count?: number;
  comparator?: string;
  n?: number;
  attribute?: string;
  expected?: string;
  mode?: string;
  property?: string;
  ancestor?: string;
}

export interface TaskSpec {
  id: string;
  description?: string;
  interaction: InteractionStep[];
  assertions: AssertionSpec[];
}

export interface TaskOutcome {
  task_id: string;
  status: "pass" | "fail" | "error";
  detail: string;
  evaluated_at: number;
  snapshot_hash: string;
}

const DEFAULT_TIMEOUT_MS = 10_000;

/** Same recipe as the engine: sha256 over sorted (path, text) pairs. */
export function contentHash(files: Record<string, string>): string {
  const hash = createHash("sha256");
  for (const path of Object.keys(files).sort()) {
    hash.update(path, "utf-8");
    hash.update("\x00");
    hash.update(files[path], "utf-8");
    hash.update("\x01");
  }
  return hash.digest("hex");
}

/** Inline referenced scripts and stylesheets so jsdom executes/applies them
 * without a resource loader. */
export function materialize(files: Record<string, string>): string {
  let html = files["index.html"] ?? "";
  html = html.replace(
    /<script\s+src="([^"]+)"\s*>\s*<\/script>/gi,
    (match, src: string) => {
      const body = files[src];
      return body === undefined ? match : `<script>${body}</script>`;
    },
  );
  html = html.replace(
    /<link\s+rel="stylesheet"\s+href="([^"]+)"\s*\/?>/gi,
    (match, href: string) => {
      const body = files[href];
      return body === undefined ? match : `<style>${body}</style>`;
    },
  );
  return html;
}

function collapseWhitespace(text: string): string {
  return text.replace(/\s+/g, " ").trim();
}

function compareCount(count: number, comparator: string, n: number): boolean {
  switch (comparator) {
    case "=": return count === n;
    case ">=": return count >= n;
    case "<=": return count <= n;
    case ">": return count > n;
    case "<": return count < n;
    default: throw new Error(`unknown comparator ${comparator}`);
  }
}

function checkAssertion(
  assertion: AssertionSpec,
  document: Document,
  window: Window & typeof globalThis,
): string | null {
  const matched = Array.from(document.querySelectorAll(assertion.selector));
  switch (assertion.kind) {
    case "exists": {
      const min = assertion.min_count ?? 1;
      if (matched.length < min) {
        return `expected at least ${min} match(es), got ${matched.length}`;
      }
      return null;
    }
    case "count": {
      const ok = compareCount(matched.length, assertion.comparator ?? "=", assertion.n ?? 0);
      return ok ? null : `expected count ${assertion.comparator} ${assertion.n}, got ${matched.length}`;
    }
    case "attribute": {
      if (matched.length === 0) return "no elements matched";
      const value = matched[0].getAttribute(assertion.attribute ?? "");
      return value === assertion.expected
        ? null
        : `expected ${JSON.stringify(assertion.expected)}, got ${JSON.stringify(value)}`;
    }
    case "text": {
      if (matched.length === 0) return "no elements matched";
      const text = collapseWhitespace(matched[0].textContent ?? "");
      const expected = assertion.expected ?? "";
      const ok = assertion.mode === "contains" ? text.includes(expected) : text === expected;
      return ok ? null : `expected ${JSON.stringify(expected)}, got ${JSON.stringify(text)}`;
    }
    case "style": {
      if (matched.length === 0) return "no elements matched";
      const style = window.getComputedStyle(matched[0] as Element);
      const value = style.getPropertyValue(assertion.property ?? "");
      return value.trim() === (assertion.expected ?? "")
        ? null
        : `expected ${assertion.expected}, got ${value || "(unset)"}`;
    }
    case "rule_declared": {
      for (const sheet of Array.from(document.styleSheets)) {
        let rules: CSSRuleList;
        try {
          rules = (sheet as CSSStyleSheet).cssRules;
        } catch {
          continue;
        }
        for (const rule of Array.from(rules)) {
          const styleRule = rule as CSSStyleRule;
          if (styleRule.selectorText === undefined) continue;
          const selectors = styleRule.selectorText.split(",").map((s) => s.trim());
          if (!selectors.includes(assertion.selector)) continue;
          const value = styleRule.style.getPropertyValue(assertion.property ?? "");
          if (value !== "") {
            return value.trim() === (assertion.expected ?? "")
              ? null
              : `expected ${assertion.expected}, got ${value.trim()}`;
          }
        }
      }
      return `no rule for ${assertion.selector} declares ${assertion.property}`;
    }
    case "ancestor": {
      if (matched.length === 0) return "no elements matched";
      const anchor = matched[0].closest(assertion.ancestor ?? "");
      return anchor !== null && anchor !== matched[0]
        ? null
        : `no ancestor matching ${assertion.ancestor}`;
    }
    default:
      throw new Error(`unknown assertion kind ${(assertion as { kind: string }).kind}`);
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function executeSteps(
  steps: InteractionStep[],
  document: Document,
  window: Window & typeof globalThis,
): Promise<void> {
  for (const step of steps) {
    switch (step.kind) {
      case "wait":
        await sleep(step.ms ?? 0);
        break;
      case "click": {
        const target = document.querySelector(step.selector ?? "");
        target?.dispatchEvent(new window.MouseEvent("click", { bubbles: true }));
        break;
      }
      case "type_text": {
        const field = document.querySelector(step.selector ?? "") as HTMLInputElement | null;
        if (field !== null) {
          field.value = step.text ?? "";
          field.dispatchEvent(new window.Event("input", { bubbles: true }));
        }
        break;
      }
      case "hover": {
        const target = document.querySelector(step.selector ?? "");
        target?.dispatchEvent(new window.MouseEvent("mouseover", { bubbles: true }));
        break;
      }
      default:
        throw new Error(`unknown step kind ${(step as { kind: string }).kind}`);
    }
  }
}

export async function runTask(
  task: TaskSpec,
  files: Record<string, string>,
  timeoutMs: number = DEFAULT_TIMEOUT_MS,
): Promise<TaskOutcome> {
  const snapshotHash = contentHash(files);
  const base: Omit<TaskOutcome, "status" | "detail"> = {
    task_id: task.id,
    evaluated_at: Date.now(),
    snapshot_hash: snapshotHash,
  };
  const consoleErrors: string[] = [];
  const virtualConsole = new VirtualConsole();
  virtualConsole.on("jsdomError", (err) => consoleErrors.push(String(err)));

  const work = (async (): Promise<TaskOutcome> => {
    const dom = new JSDOM(materialize(files), {
      runScripts: "dangerously",
      virtualConsole,
    });
    try {
      const window = dom.window as unknown as Window & typeof globalThis;
      const document = window.document;
      if (consoleErrors.length > 0) {
        return { ...base, status: "error", detail: consoleErrors[0] };
      }
      await executeSteps(task.interaction ?? [], document, window);
      for (let k = 0; k < task.assertions.length; k += 1) {
        const assertion = task.assertions[k];
        const failure = checkAssertion(assertion, document, window);
        if (failure !== null) {
          return {
            ...base,
            status: "fail",
            detail: `assertion ${k}: ${assertion.kind} on ${assertion.selector}: ${failure}`,
          };
        }
      }
      return { ...base, status: "pass", detail: "" };
    } finally {
      dom.window.close();
    }
  })();

  const timeout = sleep(timeoutMs).then(
    (): TaskOutcome => ({ ...base, status: "error", detail: "timeout" }),
  );
  try {
    return await Promise.race([work, timeout]);
  } catch (err) {
    return { ...base, status: "error", detail: String(err) };
  }
}
