// Wires the three panels to the bridge. The UI never mutates state locally:
// every render uses a response from the bridge, and every mutation re-fetches.

import { BridgeClient, sameBinding } from "./api.js";
import type { NetPayload, StatePayload } from "./api.js";
import { renderControlPanel } from "./controlpanel.js";
import { renderNet } from "./netview.js";
import type { PathStep } from "./treeview.js";
import { renderTreeView } from "./treeview.js";

export interface AppElements {
  net: HTMLElement;
  controls: HTMLElement;
  tree: HTMLElement;
  tests: HTMLElement;
  banner: HTMLElement;
}

export class App {
  private readonly client: BridgeClient;
  private readonly els: AppElements;
  private net: NetPayload | null = null;

  constructor(els: AppElements, client = new BridgeClient()) {
    this.client = client;
    this.els = els;
  }

  async init(): Promise<void> {
    await this.guard(async () => {
      this.net = await this.client.net();
      const [state, tree, tests] = await Promise.all([
        this.client.state(),
        this.client.tree(),
        this.client.tests(),
      ]);
      this.render(state);
      renderTreeView(this.els.tree, tree, (path) => {
        void this.replay(path);
      });
      this.els.tests.textContent = tests.text;
    });
  }

  private render(state: StatePayload): void {
    if (this.net) renderNet(this.els.net, this.net, state.marking);
    renderControlPanel(this.els.controls, state, {
      onFire: (index) => void this.fire(index),
      onUndo: () => void this.undo(),
      onReset: () => void this.reset(),
    });
  }

  async fire(index: number): Promise<void> {
    await this.guard(async () => this.render(await this.client.fire(index)));
  }

  async reset(): Promise<void> {
    await this.guard(async () => this.render(await this.client.reset()));
  }

  /** Undo = reset, then replay all but the last history entry. */
  async undo(): Promise<void> {
    await this.guard(async () => {
      const state = await this.client.state();
      const steps = state.history.slice(0, -1);
      this.render(await this.replaySteps(steps));
    });
  }

  /** Replay a tree path from the initial marking. */
  async replay(path: PathStep[]): Promise<void> {
    await this.guard(async () => this.render(await this.replaySteps(path)));
  }

  private async replaySteps(steps: PathStep[]): Promise<StatePayload> {
    let state = await this.client.reset();
    for (const step of steps) {
      const entry = state.enabled.find(
        (e) => e.transition === step.transition &&
               sameBinding(e.binding, step.binding));
      if (!entry) throw new Error(`step not enabled: ${step.transition}`);
      state = await this.client.fire(entry.index);
    }
    return state;
  }

  private async guard(body: () => Promise<void>): Promise<void> {
    try {
      await body();
      this.els.banner.textContent = "";
      this.els.banner.classList.remove("visible");
    } catch (err) {
      // Connection loss / stale state: show the banner; the next successful
      // action clears it and re-renders from a fresh response.
      this.els.banner.textContent =
        `bridge unreachable or stale state — retry (${String(err)})`;
      this.els.banner.classList.add("visible");
    }
  }
}

export function mount(doc: Document, client?: BridgeClient): App {
  const byId = (id: string): HTMLElement => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
  };
  const app = new App({
    net: byId("net"),
    controls: byId("controls"),
    tree: byId("tree"),
    tests: byId("tests"),
    banner: byId("banner"),
  }, client);
  void app.init();
  return app;
}
