// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";

import {
  renderDiagnostics,
  renderError,
  renderLog,
  renderPanel,
} from "../src/panel.js";
import { Snapshot, isSnapshot } from "../src/types.js";

const snap: Snapshot = {
  session_id: "abc",
  model: "minimed",
  nodes: ["off", "on"],
  initial: "off",
  curr: "off",
  prev: "off",
  variables: [{ name: "display", type: "real64", value: "0.0" }],
  triggers: [
    { name: "click_UP", permitted: false },
    { name: "click_on_off", permitted: true },
  ],
  idled: false,
  step_count: 0,
};

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='root'></div>";
  root = document.getElementById("root") as HTMLElement;
});

const noop = { onFire: () => undefined, onReset: () => undefined };

describe("renderPanel", () => {
  it("shows the current node and variable values verbatim", () => {
    renderPanel(root, snap, noop, false);
    expect(root.querySelector(".curr-node")?.textContent).toBe("off");
    const value = root.querySelector("[data-variable='display']");
    expect(value?.textContent).toBe("0.0");
  });

  it("disables buttons for non-permitted triggers", () => {
    renderPanel(root, snap, noop, false);
    const up = root.querySelector(
      "button[data-trigger='click_UP']",
    ) as HTMLButtonElement;
    const onoff = root.querySelector(
      "button[data-trigger='click_on_off']",
    ) as HTMLButtonElement;
    expect(up.disabled).toBe(true);
    expect(onoff.disabled).toBe(false);
  });

  it("disables every button while a request is pending", () => {
    renderPanel(root, snap, noop, true);
    const buttons = [...root.querySelectorAll("button")];
    expect(buttons.length).toBeGreaterThan(0);
    expect(buttons.every((b) => (b as HTMLButtonElement).disabled)).toBe(true);
  });

  it("routes clicks to the fire handler", () => {
    const onFire = vi.fn();
    renderPanel(root, snap, { onFire, onReset: () => undefined }, false);
    (
      root.querySelector("button[data-trigger='click_on_off']") as HTMLElement
    ).click();
    expect(onFire).toHaveBeenCalledWith("click_on_off");
  });

  it("marks the display when the last step idled", () => {
    renderPanel(root, { ...snap, idled: true }, noop, false);
    expect(root.querySelector(".display")?.classList.contains("idled")).toBe(
      true,
    );
  });
});

describe("renderLog", () => {
  it("renders fired entries with values and idle entries as no-effect", () => {
    renderLog(root, [
      { trigger: "click_UP", values: "display=0.1", idled: false },
      { trigger: "click_UP", values: "display=0.1", idled: true },
    ]);
    const items = [...root.querySelectorAll("li")].map((li) => li.textContent);
    expect(items).toEqual([
      "click_UP -> display=0.1",
      "click_UP (no effect)",
    ]);
  });
});

describe("messages", () => {
  it("renders an error banner", () => {
    renderError(root, "boom");
    expect(root.querySelector(".error-banner")?.textContent).toBe("boom");
  });

  it("renders diagnostics with positions", () => {
    renderDiagnostics(root, [
      { severity: "error", message: "bad token", line: 3, col: 7 },
    ]);
    expect(root.querySelector(".diag")?.textContent).toBe(
      "3:7 error: bad token",
    );
  });
});

describe("isSnapshot", () => {
  it("accepts a well-formed snapshot", () => {
    expect(isSnapshot(snap)).toBe(true);
  });

  it("rejects malformed payloads", () => {
    expect(isSnapshot(null)).toBe(false);
    expect(isSnapshot({})).toBe(false);
    expect(isSnapshot({ ...snap, variables: [{ name: 1 }] })).toBe(false);
    expect(isSnapshot({ ...snap, idled: "yes" })).toBe(false);
  });
});
