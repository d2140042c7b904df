/**
 * DOM rendering for the device panel. Pure view code: every string shown
 * comes verbatim from a server snapshot, never from client computation.
 */

import { Diagnostic, Snapshot } from "./types.js";

export interface PanelHandlers {
  onFire(trigger: string): void;
  onReset(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderPanel(
  root: HTMLElement,
  snap: Snapshot,
  handlers: PanelHandlers,
  busy: boolean,
): void {
  root.replaceChildren();

  const header = el("div", "panel-header");
  header.appendChild(el("h2", "model-name", snap.model));
  const nodeLine = el("div", "node-line");
  const currBadge = el("span", "curr-node", snap.curr);
  currBadge.dataset.node = snap.curr;
  nodeLine.append("node: ", currBadge, ` (prev: ${snap.prev})`);
  header.appendChild(nodeLine);
  root.appendChild(header);

  const display = el("div", "display");
  if (snap.variables.length === 0) {
    display.appendChild(el("div", "display-empty", "(no variables)"));
  }
  for (const v of snap.variables) {
    const row = el("div", "display-row");
    row.appendChild(el("span", "var-name", v.name));
    const value = el("span", "var-value", v.value);
    value.dataset.variable = v.name;
    row.appendChild(value);
    row.appendChild(el("span", "var-type", v.type));
    display.appendChild(row);
  }
  if (snap.idled) display.classList.add("idled");
  root.appendChild(display);

  const buttons = el("div", "buttons");
  for (const t of snap.triggers) {
    const b = el("button", "trigger", t.name);
    b.dataset.trigger = t.name;
    b.disabled = !t.permitted || busy;
    b.addEventListener("click", () => handlers.onFire(t.name));
    buttons.appendChild(b);
  }
  const reset = el("button", "reset", "reset");
  reset.disabled = busy;
  reset.addEventListener("click", () => handlers.onReset());
  buttons.appendChild(reset);
  root.appendChild(buttons);
}

export interface LogEntry {
  trigger: string;
  values: string;
  idled: boolean;
}

export function renderLog(root: HTMLElement, entries: LogEntry[]): void {
  root.replaceChildren();
  const list = el("ol", "event-log");
  for (const e of entries) {
    const item = el(
      "li",
      e.idled ? "log-entry idled" : "log-entry",
      e.idled ? `${e.trigger} (no effect)` : `${e.trigger} -> ${e.values}`,
    );
    list.appendChild(item);
  }
  root.appendChild(list);
}

export function renderDiagnostics(
  root: HTMLElement,
  diags: Diagnostic[],
): void {
  root.replaceChildren();
  const list = el("ul", "diagnostics");
  for (const d of diags) {
    list.appendChild(
      el("li", `diag ${d.severity}`, `${d.line}:${d.col} ${d.severity}: ${d.message}`),
    );
  }
  root.appendChild(list);
}

export function renderError(root: HTMLElement, message: string): void {
  root.replaceChildren();
  root.appendChild(el("div", "error-banner", message));
}

export function clear(root: HTMLElement): void {
  root.replaceChildren();
}
