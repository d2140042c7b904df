/** Wire types mirroring docs/wire-protocol.md. */

export interface VariableView {
  name: string;
  type: "real64" | "int32" | "uint32" | "bool8";
  value: string;
}

export interface TriggerView {
  name: string;
  permitted: boolean;
}

export interface HistoryEntry {
  trigger: string;
  trace: string;
}

export interface Snapshot {
  session_id: string;
  model: string;
  nodes: string[];
  initial: string;
  curr: string;
  prev: string;
  variables: VariableView[];
  triggers: TriggerView[];
  idled: boolean;
  step_count: number;
  history?: HistoryEntry[];
}

export interface Diagnostic {
  severity: string;
  message: string;
  line: number;
  col: number;
}

/**
 * Structural check of a snapshot before rendering. The UI refuses to render
 * anything from a malformed payload (no partial panels).
 */
export function isSnapshot(x: unknown): x is Snapshot {
  if (typeof x !== "object" || x === null) return false;
  const s = x as Record<string, unknown>;
  return (
    typeof s.session_id === "string" &&
    typeof s.model === "string" &&
    Array.isArray(s.nodes) &&
    typeof s.curr === "string" &&
    typeof s.prev === "string" &&
    Array.isArray(s.variables) &&
    (s.variables as unknown[]).every(
      (v) =>
        typeof v === "object" &&
        v !== null &&
        typeof (v as VariableView).name === "string" &&
        typeof (v as VariableView).value === "string",
    ) &&
    Array.isArray(s.triggers) &&
    (s.triggers as unknown[]).every(
      (t) =>
        typeof t === "object" &&
        t !== null &&
        typeof (t as TriggerView).name === "string" &&
        typeof (t as TriggerView).permitted === "boolean",
    ) &&
    typeof s.idled === "boolean" &&
    typeof s.step_count === "number"
  );
}
