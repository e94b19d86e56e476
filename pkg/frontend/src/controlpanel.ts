// Simulation control panel: one fire button per enabled (transition, binding)
// pair, undo/reset, and the firing history log.

import type { StatePayload } from "./api.js";

export interface ControlHandlers {
  onFire(index: number): void;
  onUndo(): void;
  onReset(): void;
}

/**
 * Render the control panel into `container` (replacing previous content).
 * Fire buttons correspond one-to-one with `state.enabled`.
 */
export function renderControlPanel(container: HTMLElement,
                                   state: StatePayload,
                                   handlers: ControlHandlers): void {
  container.textContent = "";

  const enabled = document.createElement("div");
  enabled.className = "enabled";
  const heading = document.createElement("h3");
  heading.textContent = "Enabled";
  enabled.appendChild(heading);
  if (!state.enabled.length) {
    const none = document.createElement("p");
    none.className = "none";
    none.textContent = "none (dead marking)";
    enabled.appendChild(none);
  }
  for (const entry of state.enabled) {
    const btn = document.createElement("button");
    btn.className = entry.silent ? "fire silent" : "fire";
    btn.dataset.index = String(entry.index);
    btn.textContent = entry.label;
    btn.addEventListener("click", () => handlers.onFire(entry.index));
    enabled.appendChild(btn);
  }
  container.appendChild(enabled);

  const actions = document.createElement("div");
  actions.className = "actions";
  const undo = document.createElement("button");
  undo.className = "undo";
  undo.textContent = "Undo";
  undo.disabled = !state.history.length;
  undo.addEventListener("click", () => handlers.onUndo());
  actions.appendChild(undo);
  const reset = document.createElement("button");
  reset.className = "reset";
  reset.textContent = "Reset";
  reset.addEventListener("click", () => handlers.onReset());
  actions.appendChild(reset);
  container.appendChild(actions);

  const history = document.createElement("div");
  history.className = "history";
  const h = document.createElement("h3");
  h.textContent = "History";
  history.appendChild(h);
  const log = document.createElement("ol");
  for (const entry of state.history) {
    const item = document.createElement("li");
    item.className = entry.silent ? "silent" : "";
    item.textContent = entry.label;
    log.appendChild(item);
  }
  history.appendChild(log);
  container.appendChild(history);
}
