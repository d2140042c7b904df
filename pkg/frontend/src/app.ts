/**
 * Application state machine for the panel page: one session at a time, one
 * in-flight request at a time, an event log capped client-side.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  LogEntry,
  clear,
  renderDiagnostics,
  renderError,
  renderLog,
  renderPanel,
} from "./panel.js";
import { Snapshot } from "./types.js";

export const LOG_CAP = 500;

export interface AppRoots {
  panel: HTMLElement;
  log: HTMLElement;
  messages: HTMLElement;
}

export class App {
  private snapshot: Snapshot | null = null;
  private entries: LogEntry[] = [];
  private busy = false;

  constructor(
    private readonly api: ApiClient,
    private readonly roots: AppRoots,
  ) {}

  get currentSnapshot(): Snapshot | null {
    return this.snapshot;
  }

  /** Upload model text; replaces any open session. */
  async loadModel(source: string): Promise<void> {
    const old = this.snapshot;
    try {
      const snap = await this.api.createSession(source);
      if (old) void this.api.deleteSession(old.session_id);
      this.snapshot = snap;
      this.entries = [];
      clear(this.roots.messages);
      this.render();
    } catch (err) {
      this.showError(err);
    }
  }

  async fire(trigger: string): Promise<void> {
    if (!this.snapshot || this.busy) return;
    this.busy = true;
    this.render();
    try {
      const snap = await this.api.fire(this.snapshot.session_id, trigger);
      this.snapshot = snap;
      this.pushLog({
        trigger,
        values: snap.variables.map((v) => `${v.name}=${v.value}`).join(", "),
        idled: snap.idled,
      });
      clear(this.roots.messages);
    } catch (err) {
      this.showError(err);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async reset(): Promise<void> {
    if (!this.snapshot || this.busy) return;
    this.busy = true;
    try {
      this.snapshot = await this.api.reset(this.snapshot.session_id);
      this.entries = [];
      clear(this.roots.messages);
    } catch (err) {
      this.showError(err);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  private pushLog(entry: LogEntry): void {
    this.entries.push(entry);
    if (this.entries.length > LOG_CAP) {
      this.entries = this.entries.slice(this.entries.length - LOG_CAP);
    }
  }

  private showError(err: unknown): void {
    if (err instanceof ApiError && err.diagnostics.length > 0) {
      renderDiagnostics(this.roots.messages, err.diagnostics);
    } else {
      const message = err instanceof Error ? err.message : String(err);
      renderError(this.roots.messages, message);
    }
  }

  render(): void {
    if (!this.snapshot) return;
    renderPanel(
      this.roots.panel,
      this.snapshot,
      {
        onFire: (t) => void this.fire(t),
        onReset: () => void this.reset(),
      },
      this.busy,
    );
    renderLog(this.roots.log, this.entries);
  }
}
