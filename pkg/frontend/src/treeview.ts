// Collapsible test-tree inspector. Each non-root vertex is labeled with its
// firing (`name(args)`); round-trip and dead leaves are marked. Clicking a
// vertex replays its path from the root in the simulator.

import type { TreePayload, TreeVertex } from "./api.js";

/** A replayable step: the firing stored on a tree vertex. */
export interface PathStep {
  transition: string;
  binding: Record<string, string>;
}

export type SelectHandler = (path: PathStep[]) => void;

function renderVertex(vertex: TreeVertex, path: PathStep[],
                      onSelect: SelectHandler): HTMLLIElement {
  const li = document.createElement("li");
  li.className = "vertex" + (vertex.leaf ? ` leaf-${vertex.leaf}` : "");

  const row = document.createElement("span");
  row.className = "row";
  if (vertex.children.length) {
    const toggle = document.createElement("button");
    toggle.className = "toggle";
    toggle.textContent = "−";
    toggle.addEventListener("click", () => {
      const kids = li.querySelector(":scope > ul");
      if (!kids) return;
      const hidden = kids.classList.toggle("collapsed");
      toggle.textContent = hidden ? "+" : "−";
    });
    row.appendChild(toggle);
  }

  const label = document.createElement("button");
  label.className = "label" + (vertex.silent ? " silent" : "");
  label.textContent = vertex.label ?? "(initial)";
  label.addEventListener("click", () => onSelect(path));
  row.appendChild(label);

  if (vertex.leaf) {
    const mark = document.createElement("span");
    mark.className = "leaf-mark";
    mark.textContent = `[${vertex.leaf}]`;
    row.appendChild(mark);
  }
  li.appendChild(row);

  if (vertex.children.length) {
    const ul = document.createElement("ul");
    for (const child of vertex.children) {
      const step: PathStep = {
        transition: child.transition ?? "",
        binding: child.binding ?? {},
      };
      ul.appendChild(renderVertex(child, [...path, step], onSelect));
    }
    li.appendChild(ul);
  }
  return li;
}

/**
 * Render the test tree into `container` (replacing previous content).
 * `onSelect` receives the root-to-vertex path of the clicked vertex.
 */
export function renderTreeView(container: HTMLElement, tree: TreePayload,
                               onSelect: SelectHandler): void {
  container.textContent = "";
  const root = document.createElement("ul");
  root.className = "treeview";
  root.appendChild(renderVertex(tree.root, [], onSelect));
  container.appendChild(root);
  if (tree.truncated) {
    const note = document.createElement("p");
    note.className = "truncated";
    note.textContent = "tree truncated by bounds";
    container.appendChild(note);
  }
}
